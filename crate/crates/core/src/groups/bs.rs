//! Britton normal forms for BS(p,q) = ⟨a, t | t a^p t⁻¹ = a^q⟩.
//!
//! An element is stored as `a^{c0} t^{ε1} a^{c1} … t^{εn} a^{cn}` with no pinch
//! (`t a^{pm} t⁻¹` or `t⁻¹ a^{qm} t`), every interior exponent `c_{i-1}`
//! reduced into `{0..q-1}` when `ε_i = +1` and `{0..p-1}` when `ε_i = -1`, and
//! the rightmost exponent unconstrained. Quotients are pushed to the right
//! using `a^{qm} t = t a^{pm}` and `a^{pm} t⁻¹ = t⁻¹ a^{qm}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::GroupError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Syllable {
    /// +1 or −1
    pub sign: i8,
    pub exponent: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub struct BsWord {
    pub head: i64,
    pub syllables: Vec<Syllable>,
}

fn overflow() -> GroupError {
    GroupError::Overflow("Baumslag-Solitar exponent")
}

impl BsWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn a_power(c: i64) -> Self {
        Self { head: c, syllables: Vec::new() }
    }

    /// Number of stable letters, which equals the displacement of the base
    /// vertex of the Bass–Serre tree.
    pub fn t_length(&self) -> usize {
        self.syllables.len()
    }

    fn last_exponent_mut(&mut self) -> &mut i64 {
        match self.syllables.last_mut() {
            Some(s) => &mut s.exponent,
            None => &mut self.head,
        }
    }

    /// Right multiplication by `a^c`.
    pub fn push_a(&mut self, c: i64) -> Result<(), GroupError> {
        let last = self.last_exponent_mut();
        *last = last.checked_add(c).ok_or_else(overflow)?;
        Ok(())
    }

    /// Right multiplication by `t^sign`.
    pub fn push_t(&mut self, sign: i8, p: u64, q: u64) -> Result<(), GroupError> {
        let (p, q) = (p as i64, q as i64);
        if let Some(&Syllable { sign: prev, exponent }) = self.syllables.last() {
            if prev == -sign {
                // t a^{pm} t⁻¹ = a^{qm};  t⁻¹ a^{qm} t = a^{pm}
                let (divisor, multiplier) = if prev == 1 { (p, q) } else { (q, p) };
                if exponent % divisor == 0 {
                    let carried = (exponent / divisor).checked_mul(multiplier).ok_or_else(overflow)?;
                    self.syllables.pop();
                    return self.push_a(carried);
                }
            }
        }
        // a^c t = a^r t a^{p m} with c = q m + r;  a^c t⁻¹ = a^r t⁻¹ a^{q m} with c = p m + r
        let (modulus, multiplier) = if sign == 1 { (q, p) } else { (p, q) };
        let last = self.last_exponent_mut();
        let m = last.div_euclid(modulus);
        *last = last.rem_euclid(modulus);
        let carried = m.checked_mul(multiplier).ok_or_else(overflow)?;
        self.syllables.push(Syllable { sign, exponent: carried });
        Ok(())
    }

    /// Right multiplication by another normal form.
    pub fn mul_assign(&mut self, other: &BsWord, p: u64, q: u64) -> Result<(), GroupError> {
        self.push_a(other.head)?;
        for s in &other.syllables {
            self.push_t(s.sign, p, q)?;
            self.push_a(s.exponent)?;
        }
        Ok(())
    }

    pub fn inverse(&self, p: u64, q: u64) -> Result<Self, GroupError> {
        let mut out = Self::identity();
        let mut exponents: Vec<i64> = vec![self.head];
        exponents.extend(self.syllables.iter().map(|s| s.exponent));
        let last = *exponents.last().expect("nonempty");
        out.push_a(last.checked_neg().ok_or_else(overflow)?)?;
        for i in (0..self.syllables.len()).rev() {
            out.push_t(-self.syllables[i].sign, p, q)?;
            out.push_a(exponents[i].checked_neg().ok_or_else(overflow)?)?;
        }
        Ok(out)
    }

    /// The word with the rightmost exponent cleared; identifies the coset x⟨a⟩.
    pub fn coset_key(&self) -> Self {
        let mut key = self.clone();
        *key.last_exponent_mut() = 0;
        key
    }

    /// Checks the normal-form constraints.
    pub fn is_reduced(&self, p: u64, q: u64) -> bool {
        let (p, q) = (p as i64, q as i64);
        let mut prev_exp = self.head;
        let mut prev_sign: Option<i8> = None;
        for s in &self.syllables {
            let modulus = if s.sign == 1 { q } else { p };
            if !(0..modulus).contains(&prev_exp) {
                return false;
            }
            if let Some(ps) = prev_sign {
                if ps == -s.sign {
                    let divisor = if ps == 1 { p } else { q };
                    if prev_exp % divisor == 0 {
                        return false;
                    }
                }
            }
            prev_exp = s.exponent;
            prev_sign = Some(s.sign);
        }
        true
    }
}

impl fmt::Display for BsWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a^{}", self.head)?;
        for s in &self.syllables {
            let t = if s.sign == 1 { "t" } else { "t^-1" };
            write!(f, " {t} a^{}", s.exponent)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(letters: &str, p: u64, q: u64) -> BsWord {
        let mut w = BsWord::identity();
        for c in letters.chars() {
            match c {
                'a' => w.push_a(1).unwrap(),
                'A' => w.push_a(-1).unwrap(),
                't' => w.push_t(1, p, q).unwrap(),
                'T' => w.push_t(-1, p, q).unwrap(),
                _ => panic!("bad letter"),
            }
        }
        w
    }

    #[test]
    fn defining_relation_pinches() {
        // t a^2 t^-1 = a^3 in BS(2,3)
        assert_eq!(word("taaT", 2, 3), BsWord::a_power(3));
        // t^-1 a^3 t = a^2
        assert_eq!(word("Taaat", 2, 3), BsWord::a_power(2));
    }

    #[test]
    fn unpinchable_conjugate() {
        let w = word("taT", 2, 3);
        assert_eq!(w.t_length(), 2);
        assert!(w.is_reduced(2, 3));
    }

    #[test]
    fn quotients_move_right() {
        // a^3 t = t a^2 in BS(2,3)
        assert_eq!(word("aaat", 2, 3), word("taa", 2, 3));
        let w = word("aaaat", 2, 3);
        assert_eq!(w.head, 1);
        assert_eq!(w.syllables, vec![Syllable { sign: 1, exponent: 2 }]);
    }

    #[test]
    fn inverse_round_trip() {
        let w = word("taTaatAAT", 2, 3);
        let inv = w.inverse(2, 3).unwrap();
        let mut prod = w.clone();
        prod.mul_assign(&inv, 2, 3).unwrap();
        assert_eq!(prod, BsWord::identity());
        assert_eq!(inv.inverse(2, 3).unwrap(), w);
    }

    #[test]
    fn bs11_is_abelian() {
        assert_eq!(word("tat", 1, 1), word("tta", 1, 1));
        assert_eq!(word("atAT", 1, 1), BsWord::identity());
    }
}
