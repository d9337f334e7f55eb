use std::borrow::Cow;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::bs::BsWord;
use super::element::{LampConfig, PqElement};
use super::{parse_word, Element, GroupError, GroupSpec, IntMatrix, Letter};

const CACHED_POWERS: i64 = 128;

/// Cached `A^k` for `|k| ≤ CACHED_POWERS` (or until entries overflow).
#[derive(Clone, Debug)]
struct MatrixPowers {
    forward: Vec<IntMatrix>,
    backward: Vec<IntMatrix>,
    a: IntMatrix,
    a_inv: IntMatrix,
}

impl MatrixPowers {
    fn new(a: &IntMatrix) -> Result<Self, GroupError> {
        let a_inv = a.unimodular_inverse()?;
        let fill = |m: &IntMatrix| {
            let mut out = vec![IntMatrix::identity(m.dim())];
            for _ in 0..CACHED_POWERS {
                match out.last().unwrap().checked_mul(m) {
                    Some(next) => out.push(next),
                    None => break,
                }
            }
            out
        };
        Ok(Self { forward: fill(a), backward: fill(&a_inv), a: a.clone(), a_inv })
    }

    fn power(&self, k: i64) -> Result<Cow<'_, IntMatrix>, GroupError> {
        let (table, base) = if k >= 0 { (&self.forward, &self.a) } else { (&self.backward, &self.a_inv) };
        let e = k.unsigned_abs();
        if let Some(m) = table.get(e as usize) {
            return Ok(Cow::Borrowed(m));
        }
        let mut result = IntMatrix::identity(base.dim());
        let mut sq = base.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.checked_mul(&sq).ok_or(GroupError::Overflow("matrix power"))?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.checked_mul(&sq).ok_or(GroupError::Overflow("matrix power"))?;
            }
        }
        Ok(Cow::Owned(result))
    }
}

/// A validated group with its standard generating set. All operations are
/// pure; a `Group` can be shared across threads.
#[derive(Clone, Debug)]
pub struct Group {
    spec: GroupSpec,
    powers: Option<MatrixPowers>,
    generators: Vec<Element>,
}

impl Group {
    pub fn new(spec: GroupSpec) -> Result<Self, GroupError> {
        spec.validate()?;
        let powers = match &spec {
            GroupSpec::SemidirectZd { matrix } => Some(MatrixPowers::new(matrix)?),
            _ => None,
        };
        let generators = generator_elements(&spec);
        Ok(Self { spec, powers, generators })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn identity(&self) -> Element {
        match &self.spec {
            GroupSpec::FreeAbelian { d } => Element::FreeAbelian { v: vec![0; *d] },
            GroupSpec::SemidirectZd { matrix } => Element::Semidirect { v: vec![0; matrix.dim()], k: 0 },
            GroupSpec::Pq { .. } => Element::Pq(PqElement::identity()),
            GroupSpec::Lamplighter { .. } => Element::Lamplighter(LampConfig::default()),
            GroupSpec::BaumslagSolitar { .. } => Element::BaumslagSolitar(BsWord::identity()),
        }
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    /// Generators followed by their inverses, in the fixed BFS order
    /// `g1, g1⁻¹, g2, g2⁻¹, …`.
    pub fn letters(&self) -> Vec<Letter> {
        (0..self.generators.len()).flat_map(|g| [Letter::new(g, false), Letter::new(g, true)]).collect()
    }

    pub fn letter_element(&self, letter: Letter) -> Result<Element, GroupError> {
        let g = self
            .generators
            .get(letter.generator)
            .ok_or_else(|| GroupError::UnknownSymbol(format!("generator #{}", letter.generator)))?;
        if letter.inverse {
            self.invert(g)
        } else {
            Ok(g.clone())
        }
    }

    /// Canonical form of the product of the letters of `word`.
    pub fn canonicalize(&self, word: &[Letter]) -> Result<Element, GroupError> {
        let mut acc = self.identity();
        for &letter in word {
            let g = self.letter_element(letter)?;
            acc = self.multiply(&acc, &g)?;
        }
        Ok(acc)
    }

    pub fn parse(&self, text: &str) -> Result<Element, GroupError> {
        self.canonicalize(&parse_word(&self.spec, text)?)
    }

    fn check(&self, x: &Element) -> Result<(), GroupError> {
        let ok = match (&self.spec, x) {
            (GroupSpec::FreeAbelian { d }, Element::FreeAbelian { v }) => v.len() == *d,
            (GroupSpec::SemidirectZd { matrix }, Element::Semidirect { v, .. }) => v.len() == matrix.dim(),
            (GroupSpec::Pq { .. }, Element::Pq(_)) => true,
            (GroupSpec::Lamplighter { .. }, Element::Lamplighter(_)) => true,
            (GroupSpec::BaumslagSolitar { .. }, Element::BaumslagSolitar(_)) => true,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(GroupError::FamilyMismatch { expected: self.spec.family_name(), found: x.family_name() })
        }
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element, GroupError> {
        self.check(a)?;
        self.check(b)?;
        let out = match (&self.spec, a, b) {
            (_, Element::FreeAbelian { v }, Element::FreeAbelian { v: w }) => {
                Element::FreeAbelian { v: add_vec(v, w)? }
            }
            (_, Element::Semidirect { v, k }, Element::Semidirect { v: w, k: l }) => {
                let powers = self.powers.as_ref().expect("semidirect group has powers");
                let aw = powers.power(*k)?.checked_apply(w).ok_or(GroupError::Overflow("A^k w"))?;
                Element::Semidirect { v: add_vec(v, &aw)?, k: k.checked_add(*l).ok_or(GroupError::Overflow("k"))? }
            }
            (GroupSpec::Pq { p, q }, Element::Pq(x), Element::Pq(y)) => Element::Pq(pq_mul(x, y, *p, *q)?),
            (GroupSpec::Lamplighter { p }, Element::Lamplighter(x), Element::Lamplighter(y)) => {
                Element::Lamplighter(x.mul(y, *p).ok_or(GroupError::Overflow("lamp position"))?)
            }
            (GroupSpec::BaumslagSolitar { p, q }, Element::BaumslagSolitar(x), Element::BaumslagSolitar(y)) => {
                let mut out = x.clone();
                out.mul_assign(y, *p, *q)?;
                Element::BaumslagSolitar(out)
            }
            _ => unreachable!("checked above"),
        };
        Ok(out)
    }

    pub fn invert(&self, a: &Element) -> Result<Element, GroupError> {
        self.check(a)?;
        let out = match (&self.spec, a) {
            (_, Element::FreeAbelian { v }) => Element::FreeAbelian { v: neg_vec(v)? },
            (_, Element::Semidirect { v, k }) => {
                // (v,k)⁻¹ = (−A^{−k} v, −k)
                let powers = self.powers.as_ref().expect("semidirect group has powers");
                let nk = k.checked_neg().ok_or(GroupError::Overflow("k"))?;
                let w = powers.power(nk)?.checked_apply(v).ok_or(GroupError::Overflow("A^-k v"))?;
                Element::Semidirect { v: neg_vec(&w)?, k: nk }
            }
            (GroupSpec::Pq { p, q }, Element::Pq(x)) => Element::Pq(pq_inv(x, *p, *q)?),
            (GroupSpec::Lamplighter { p }, Element::Lamplighter(x)) => {
                Element::Lamplighter(x.inverse(*p).ok_or(GroupError::Overflow("lamp position"))?)
            }
            (GroupSpec::BaumslagSolitar { p, q }, Element::BaumslagSolitar(x)) => {
                Element::BaumslagSolitar(x.inverse(*p, *q)?)
            }
            _ => unreachable!("checked above"),
        };
        Ok(out)
    }

    /// Membership in the designated subgroup H: `k = 0` (semidirect, PQ),
    /// `shift = 0` (lamplighter), empty t-part i.e. ⟨a⟩ (Baumslag–Solitar),
    /// and the whole group for ℤᵈ.
    pub fn in_subgroup(&self, x: &Element) -> bool {
        match x {
            Element::FreeAbelian { .. } => true,
            Element::Semidirect { k, .. } => *k == 0,
            Element::Pq(e) => e.k == 0,
            Element::Lamplighter(l) => l.shift == 0,
            Element::BaumslagSolitar(w) => w.syllables.is_empty(),
        }
    }

    /// A canonical label of the coset xH.
    pub fn coset_key(&self, x: &Element) -> Element {
        match x {
            Element::FreeAbelian { v } => Element::FreeAbelian { v: vec![0; v.len()] },
            Element::Semidirect { v, k } => Element::Semidirect { v: vec![0; v.len()], k: *k },
            Element::Pq(e) => Element::Pq(PqElement { m: BigInt::zero(), e: 0, k: e.k }),
            Element::Lamplighter(l) => Element::Lamplighter(LampConfig { lamps: Default::default(), shift: l.shift }),
            Element::BaumslagSolitar(w) => Element::BaumslagSolitar(w.coset_key()),
        }
    }

    /// Number of stable letters in the Britton-reduced form.
    pub fn t_length(&self, x: &Element) -> Result<usize, GroupError> {
        match x {
            Element::BaumslagSolitar(w) if matches!(self.spec, GroupSpec::BaumslagSolitar { .. }) => Ok(w.t_length()),
            _ => Err(GroupError::FamilyMismatch { expected: "baumslag_solitar", found: x.family_name() }),
        }
    }

    /// The group of ℤ[1/pq] ⋊ ℤ that BS(p,q) maps onto under [`Group::embed_j2`].
    pub fn j2_target(&self) -> Result<Group, GroupError> {
        match self.spec {
            GroupSpec::BaumslagSolitar { p, q } => {
                let g = num_integer::Integer::gcd(&p, &q);
                Group::new(GroupSpec::Pq { p: p / g, q: q / g })
            }
            _ => Err(GroupError::FamilyMismatch { expected: "baumslag_solitar", found: self.spec.family_name() }),
        }
    }

    /// Homomorphism BS(p,q) → ℤ[1/pq] ⋊ ℤ with `a ↦ [[1,1],[0,1]]` and
    /// `t ↦ diag(q/p, 1)`, so that `t a^p t⁻¹ ↦ [[1,q],[0,1]]`.
    pub fn embed_j2(&self, x: &Element, target: &Group) -> Result<Element, GroupError> {
        let w = match x {
            Element::BaumslagSolitar(w) if matches!(self.spec, GroupSpec::BaumslagSolitar { .. }) => w,
            _ => return Err(GroupError::FamilyMismatch { expected: "baumslag_solitar", found: x.family_name() }),
        };
        let pq = match target.spec {
            GroupSpec::Pq { p, q } => p * q,
            _ => return Err(GroupError::FamilyMismatch { expected: "pq", found: target.spec.family_name() }),
        };
        let a_pow = |c: i64| Element::Pq(PqElement::normalized(BigInt::from(c), 0, 0, pq));
        let t_pow = |sign: i8| Element::Pq(PqElement { m: BigInt::zero(), e: 0, k: -(sign as i64) });
        let mut acc = a_pow(w.head);
        for s in &w.syllables {
            acc = target.multiply(&acc, &t_pow(s.sign))?;
            acc = target.multiply(&acc, &a_pow(s.exponent))?;
        }
        Ok(acc)
    }
}

fn generator_elements(spec: &GroupSpec) -> Vec<Element> {
    match spec {
        GroupSpec::FreeAbelian { d } => (0..*d)
            .map(|i| {
                let mut v = vec![0; *d];
                v[i] = 1;
                Element::FreeAbelian { v }
            })
            .collect(),
        GroupSpec::SemidirectZd { matrix } => {
            let d = matrix.dim();
            let mut gens: Vec<Element> = (0..d)
                .map(|i| {
                    let mut v = vec![0; d];
                    v[i] = 1;
                    Element::Semidirect { v, k: 0 }
                })
                .collect();
            gens.push(Element::Semidirect { v: vec![0; d], k: 1 });
            gens
        }
        GroupSpec::Pq { .. } => vec![
            Element::Pq(PqElement { m: BigInt::zero(), e: 0, k: 1 }),
            Element::Pq(PqElement { m: BigInt::one(), e: 0, k: 0 }),
        ],
        GroupSpec::Lamplighter { .. } => vec![
            Element::Lamplighter(LampConfig { lamps: [(0, 1)].into_iter().collect(), shift: 0 }),
            Element::Lamplighter(LampConfig { lamps: Default::default(), shift: 1 }),
        ],
        GroupSpec::BaumslagSolitar { .. } => vec![
            Element::BaumslagSolitar(BsWord::a_power(1)),
            Element::BaumslagSolitar(BsWord { head: 0, syllables: vec![super::bs::Syllable { sign: 1, exponent: 0 }] }),
        ],
    }
}

fn add_vec(v: &[i64], w: &[i64]) -> Result<Vec<i64>, GroupError> {
    v.iter().zip(w).map(|(a, b)| a.checked_add(*b).ok_or(GroupError::Overflow("vector entry"))).collect()
}

fn neg_vec(v: &[i64]) -> Result<Vec<i64>, GroupError> {
    v.iter().map(|a| a.checked_neg().ok_or(GroupError::Overflow("vector entry"))).collect()
}

/// `(p/q)^k` written over the denominator `(pq)^{|k|}`.
fn ratio_power_numerator(k: i64, p: u64, q: u64) -> BigInt {
    let base = if k >= 0 { p } else { q };
    num_traits::pow(BigInt::from(base), 2 * k.unsigned_abs() as usize)
}

fn pq_mul(x: &PqElement, y: &PqElement, p: u64, q: u64) -> Result<PqElement, GroupError> {
    // [[r^k, P],[0,1]] [[r^l, Q],[0,1]] = [[r^{k+l}, P + r^k Q],[0,1]]
    let pq = p * q;
    let shift = x.k.unsigned_abs();
    let ye = y.e as u64 + shift;
    let e = (x.e as u64).max(ye);
    let e32: u32 = e.try_into().map_err(|_| GroupError::Overflow("pq denominator exponent"))?;
    let rq = &y.m * ratio_power_numerator(x.k, p, q) * num_traits::pow(BigInt::from(pq), (e - ye) as usize);
    let px = &x.m * num_traits::pow(BigInt::from(pq), (e - x.e as u64) as usize);
    let k = x.k.checked_add(y.k).ok_or(GroupError::Overflow("k"))?;
    Ok(PqElement::normalized(px + rq, e32, k, pq))
}

fn pq_inv(x: &PqElement, p: u64, q: u64) -> Result<PqElement, GroupError> {
    // [[r^k, P],[0,1]]⁻¹ = [[r^{-k}, -r^{-k} P],[0,1]]
    let pq = p * q;
    let nk = x.k.checked_neg().ok_or(GroupError::Overflow("k"))?;
    let e = x.e as u64 + x.k.unsigned_abs();
    let e32: u32 = e.try_into().map_err(|_| GroupError::Overflow("pq denominator exponent"))?;
    let m = -(&x.m * ratio_power_numerator(nk, p, q));
    Ok(PqElement::normalized(m, e32, nk, pq))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shear() -> Group {
        Group::new(GroupSpec::SemidirectZd { matrix: IntMatrix::parse("1,1;0,1").unwrap() }).unwrap()
    }

    #[test]
    fn semidirect_group_law() {
        let g = shear();
        let x = Element::Semidirect { v: vec![1, 0], k: 1 };
        let y = Element::Semidirect { v: vec![0, 1], k: 0 };
        let xy = g.multiply(&x, &y).unwrap();
        assert_eq!(xy, Element::Semidirect { v: vec![2, 1], k: 1 });
        let inv = g.invert(&xy).unwrap();
        assert_eq!(inv, Element::Semidirect { v: vec![-1, -1], k: -1 });
        assert_eq!(g.multiply(&xy, &inv).unwrap(), g.identity());
    }

    #[test]
    fn pq_conjugate_of_t() {
        let g = Group::new(GroupSpec::Pq { p: 2, q: 3 }).unwrap();
        let x = g.parse("s t s^-1").unwrap();
        // P = 2/3 = 4/6
        assert_eq!(x, Element::Pq(PqElement { m: BigInt::from(4), e: 1, k: 0 }));
        if let Element::Pq(e) = &x {
            assert_eq!(e.entry(6), (BigInt::from(2), BigInt::from(3)));
        }
        assert!(g.in_subgroup(&x));
    }

    #[test]
    fn bs_relation_canonicalizes() {
        let g = Group::new(GroupSpec::BaumslagSolitar { p: 2, q: 3 }).unwrap();
        assert_eq!(g.parse("t a a t^-1").unwrap(), Element::BaumslagSolitar(BsWord::a_power(3)));
        assert_eq!(g.parse("").unwrap(), g.identity());
        let t = g.parse("t").unwrap();
        let t_inv = g.invert(&t).unwrap();
        assert_eq!(t_inv, g.parse("t^-1").unwrap());
        assert_eq!(g.multiply(&t, &t_inv).unwrap(), g.identity());
    }

    #[test]
    fn family_mismatch_is_an_error() {
        let g = shear();
        let x = Element::FreeAbelian { v: vec![1, 0] };
        assert!(matches!(g.multiply(&x, &x), Err(GroupError::FamilyMismatch { .. })));
        let short = Element::Semidirect { v: vec![1], k: 0 };
        assert!(g.multiply(&short, &g.identity()).is_err());
    }

    #[test]
    fn j2_images() {
        let g = Group::new(GroupSpec::BaumslagSolitar { p: 2, q: 3 }).unwrap();
        let target = g.j2_target().unwrap();
        let a = g.parse("a").unwrap();
        assert_eq!(g.embed_j2(&a, &target).unwrap(), Element::Pq(PqElement { m: BigInt::one(), e: 0, k: 0 }));
        assert_eq!(g.embed_j2(&g.identity(), &target).unwrap(), target.identity());
        let x = g.parse("t a t^-1").unwrap();
        match g.embed_j2(&x, &target).unwrap() {
            Element::Pq(e) => {
                assert_eq!(e.k, 0);
                assert_eq!(e.entry(6), (BigInt::from(3), BigInt::from(2)));
            }
            other => panic!("unexpected {other}"),
        }
        // the defining relation maps to the identity
        let rel = g.parse("t a a t^-1 a^-1 a^-1 a^-1").unwrap();
        assert_eq!(rel, g.identity());
    }

    #[test]
    fn subgroup_membership() {
        let g = shear();
        assert!(g.in_subgroup(&g.identity()));
        assert!(!g.in_subgroup(&Element::Semidirect { v: vec![3, 1], k: 1 }));
        let pq = Group::new(GroupSpec::Pq { p: 2, q: 3 }).unwrap();
        assert!(pq.in_subgroup(&Element::Pq(PqElement { m: BigInt::one(), e: 1, k: 0 })));
    }

    #[test]
    fn t_length_examples() {
        let g = Group::new(GroupSpec::BaumslagSolitar { p: 2, q: 3 }).unwrap();
        assert_eq!(g.t_length(&g.parse("a a a a a").unwrap()).unwrap(), 0);
        assert_eq!(g.t_length(&g.parse("t t t").unwrap()).unwrap(), 3);
        assert_eq!(g.t_length(&g.parse("t a t^-1").unwrap()).unwrap(), 2);
        assert!(shear().t_length(&shear().identity()).is_err());
    }
}
