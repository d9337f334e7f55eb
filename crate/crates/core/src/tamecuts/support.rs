use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use super::CutError;
use crate::groups::{Element, Group, GroupSpec};

/// Support of a characteristic cut: the set where it equals 1.
#[derive(Clone, Debug, PartialEq)]
pub enum Support {
    Explicit(BTreeSet<Element>),
    /// Lamplighter configurations with shift 0 and every lit lamp at
    /// `|j| ≤ half_width`; `None` is the trivial subgroup.
    LamplighterWindow {
        p: u32,
        half_width: Option<u64>,
    },
    /// `{x_n^k : |k| ≤ bound}` in ℤ[1/pq] ⋊ ℤ, where `x_n = (1/(pq)^n, 0)`.
    PqPowers {
        pq: u64,
        n: u32,
        bound: BigUint,
    },
    /// `{(v, 0) : ‖v‖_∞ ≤ radius}` in ℤᵈ ⋊_A ℤ.
    SemidirectBox {
        d: usize,
        radius: BigUint,
    },
    /// `{v : ‖v‖_∞ ≤ radius}` in ℤᵈ.
    FreeBox {
        d: usize,
        radius: BigUint,
    },
    /// `⋃_y y·inner` over coset representatives; the translates are disjoint
    /// when `inner` lies in the subgroup.
    Translates {
        reps: Vec<Element>,
        inner: Box<Support>,
    },
    /// Baumslag–Solitar elements with at most `n` stable letters whose image
    /// under the map to ℤ[1/pq] ⋊ ℤ lies in `target_support`.
    BsProduct {
        n: u32,
        target: GroupSpec,
        target_support: Box<Support>,
    },
}

impl Support {
    pub fn contains(&self, group: &Group, x: &Element) -> Result<bool, CutError> {
        Ok(match (self, x) {
            (Support::Explicit(set), _) => set.contains(x),
            (Support::LamplighterWindow { half_width, .. }, Element::Lamplighter(l)) => {
                l.shift == 0
                    && match half_width {
                        None => l.lamps.is_empty(),
                        Some(w) => l.lamps.keys().all(|j| j.unsigned_abs() <= *w),
                    }
            }
            (Support::PqPowers { pq, n, bound }, Element::Pq(e)) => {
                // m/(pq)^e = k/(pq)^n with k = m·(pq)^{n−e}
                e.k == 0 && e.e <= *n && {
                    let k: BigInt = &e.m * BigInt::from(*pq).pow(n - e.e);
                    k.magnitude() <= bound
                }
            }
            (Support::SemidirectBox { radius, .. }, Element::Semidirect { v, k }) => {
                *k == 0 && v.iter().all(|c| BigUint::from(c.unsigned_abs()) <= *radius)
            }
            (Support::FreeBox { radius, .. }, Element::FreeAbelian { v }) => {
                v.iter().all(|c| BigUint::from(c.unsigned_abs()) <= *radius)
            }
            (Support::Translates { reps, inner }, _) => {
                for y in reps {
                    let z = group.multiply(&group.invert(y)?, x)?;
                    if inner.contains(group, &z)? {
                        return Ok(true);
                    }
                }
                false
            }
            (Support::BsProduct { n, target, target_support }, Element::BaumslagSolitar(w)) => {
                w.t_length() <= *n as usize && {
                    let pq = Group::new(target.clone())?;
                    target_support.contains(&pq, &group.embed_j2(x, &pq)?)?
                }
            }
            _ => false,
        })
    }

    /// Exact number of elements, when it has a closed form.
    pub fn cardinality(&self) -> Option<BigUint> {
        match self {
            Support::Explicit(set) => Some(BigUint::from(set.len())),
            Support::LamplighterWindow { p, half_width } => {
                Some(half_width.map_or(BigUint::one(), |w| BigUint::from(*p).pow((2 * w + 1) as u32)))
            }
            Support::PqPowers { bound, .. } => Some(bound * 2u32 + 1u32),
            Support::SemidirectBox { d, radius } | Support::FreeBox { d, radius } => {
                Some((radius * 2u32 + 1u32).pow(*d as u32))
            }
            Support::Translates { reps, inner } => inner.cardinality().map(|c| c * reps.len()),
            Support::BsProduct { .. } => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Support::Explicit(_) => "explicit",
            Support::LamplighterWindow { .. } => "lamplighter_window",
            Support::PqPowers { .. } => "pq_powers",
            Support::SemidirectBox { .. } => "semidirect_box",
            Support::FreeBox { .. } => "free_box",
            Support::Translates { .. } => "translates",
            Support::BsProduct { .. } => "bs_product",
        }
    }

    /// Whether `self ⊆ other` follows from the parameters alone, for two
    /// supports of the same shape. `None` when the shapes differ.
    pub fn structurally_within(&self, other: &Support) -> Option<bool> {
        Some(match (self, other) {
            (Support::Explicit(a), Support::Explicit(b)) => a.is_subset(b),
            (Support::LamplighterWindow { half_width: a, .. }, Support::LamplighterWindow { half_width: b, .. }) => {
                a <= b
            }
            (Support::PqPowers { pq, n: n1, bound: b1 }, Support::PqPowers { n: n2, bound: b2, .. }) => {
                n1 <= n2 && b1 * BigUint::from(*pq).pow(n2 - n1) <= *b2
            }
            (Support::SemidirectBox { radius: a, .. }, Support::SemidirectBox { radius: b, .. })
            | (Support::FreeBox { radius: a, .. }, Support::FreeBox { radius: b, .. }) => a <= b,
            (Support::Translates { reps: r1, inner: i1 }, Support::Translates { reps: r2, inner: i2 }) => {
                r1.iter().all(|y| r2.contains(y)) && i1.structurally_within(i2)?
            }
            (
                Support::BsProduct { n: n1, target_support: s1, .. },
                Support::BsProduct { n: n2, target_support: s2, .. },
            ) => n1 <= n2 && s1.structurally_within(s2)?,
            _ => return None,
        })
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Support::Explicit(set) => write!(f, "explicit set of {} elements", set.len()),
            Support::LamplighterWindow { p, half_width: None } => write!(f, "trivial subgroup of ⊕ℤ_{p}"),
            Support::LamplighterWindow { p, half_width: Some(w) } => write!(f, "⊕_{{|j|≤{w}}} ℤ_{p}"),
            Support::PqPowers { pq, n, bound } => write!(f, "{{x^k : |k| ≤ {bound}}}, x = 1/{pq}^{n}"),
            Support::SemidirectBox { radius, .. } => write!(f, "{{(v,0) : ‖v‖∞ ≤ {radius}}}"),
            Support::FreeBox { radius, .. } => write!(f, "{{v : ‖v‖∞ ≤ {radius}}}"),
            Support::Translates { reps, inner } => write!(f, "{} translates of [{inner}]", reps.len()),
            Support::BsProduct { n, target_support, .. } => {
                write!(f, "t-length ≤ {n} and image in [{target_support}]")
            }
        }
    }
}
