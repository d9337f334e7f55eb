use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::bs::BsWord;

/// Canonical form of a group element. Two elements of the same group are
/// equal iff their representations are identical.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Element {
    FreeAbelian {
        v: Vec<i64>,
    },
    /// `(v, k)` with `(v,k)(w,l) = (v + A^k w, k + l)`.
    Semidirect {
        v: Vec<i64>,
        k: i64,
    },
    Pq(PqElement),
    Lamplighter(LampConfig),
    BaumslagSolitar(BsWord),
}

impl Element {
    pub fn family_name(&self) -> &'static str {
        match self {
            Element::FreeAbelian { .. } => "free_abelian",
            Element::Semidirect { .. } => "semidirect_zd",
            Element::Pq(_) => "pq",
            Element::Lamplighter(_) => "lamplighter",
            Element::BaumslagSolitar(_) => "baumslag_solitar",
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::FreeAbelian { v } => write!(f, "{v:?}"),
            Element::Semidirect { v, k } => write!(f, "({v:?}, {k})"),
            Element::Pq(x) => write!(f, "{x}"),
            Element::Lamplighter(x) => write!(f, "{x}"),
            Element::BaumslagSolitar(x) => write!(f, "{x}"),
        }
    }
}

/// The matrix `[[(p/q)^k, P], [0, 1]]` with `P = m / (pq)^e`, normalised so that
/// `e = 0` or `pq ∤ m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PqElement {
    pub m: BigInt,
    pub e: u32,
    pub k: i64,
}

impl PqElement {
    pub fn identity() -> Self {
        Self { m: BigInt::zero(), e: 0, k: 0 }
    }

    /// Builds and normalises `m / (pq)^e`.
    pub fn normalized(mut m: BigInt, mut e: u32, k: i64, pq: u64) -> Self {
        if m.is_zero() {
            e = 0;
        }
        let base = BigInt::from(pq);
        while e > 0 && (&m % &base).is_zero() {
            m /= &base;
            e -= 1;
        }
        Self { m, e, k }
    }

    /// Upper-right entry as a reduced fraction `(numerator, denominator)`.
    pub fn entry(&self, pq: u64) -> (BigInt, BigInt) {
        let den = num_traits::pow(BigInt::from(pq), self.e as usize);
        let g = num_integer::Integer::gcd(&self.m, &den);
        if g.is_zero() {
            return (BigInt::zero(), BigInt::from(1));
        }
        (&self.m / &g, den / g)
    }
}

impl fmt::Display for PqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(P={}/(pq)^{}, k={})", self.m, self.e, self.k)
    }
}

/// Lamplighter element: finitely supported lamp configuration ℤ → ℤ_p (no
/// zero values stored) and cursor shift.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub struct LampConfig {
    pub lamps: BTreeMap<i64, u32>,
    pub shift: i64,
}

impl LampConfig {
    /// `(f,k)(g,l) = (f + g(· − k), k + l)`.
    pub fn mul(&self, other: &Self, p: u32) -> Option<Self> {
        let mut lamps = self.lamps.clone();
        for (&pos, &val) in &other.lamps {
            let at = pos.checked_add(self.shift)?;
            let entry = lamps.entry(at).or_insert(0);
            *entry = (*entry + val) % p;
            if *entry == 0 {
                lamps.remove(&at);
            }
        }
        Some(Self { lamps, shift: self.shift.checked_add(other.shift)? })
    }

    /// `(f,k)⁻¹ = (−f(· + k), −k)`.
    pub fn inverse(&self, p: u32) -> Option<Self> {
        let lamps = self
            .lamps
            .iter()
            .map(|(&pos, &val)| Some((pos.checked_sub(self.shift)?, (p - val) % p)))
            .collect::<Option<BTreeMap<_, _>>>()?;
        Some(Self { lamps, shift: self.shift.checked_neg()? })
    }

    /// Closed-form word length for the generators `{a, t}`: lamp changes plus
    /// the shortest cursor tour from 0 to `shift` visiting every lit lamp.
    pub fn word_length(&self, p: u32) -> u64 {
        let changes: u64 = self.lamps.values().map(|&v| v.min(p - v) as u64).sum();
        let lo = self.lamps.keys().next().copied().unwrap_or(0).min(0).min(self.shift);
        let hi = self.lamps.keys().next_back().copied().unwrap_or(0).max(0).max(self.shift);
        changes + (2 * (hi - lo) - self.shift.abs()) as u64
    }
}

impl fmt::Display for LampConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lamps: Vec<String> = self.lamps.iter().map(|(p, v)| format!("{p}:{v}")).collect();
        write!(f, "(lamps={{{}}}, shift={})", lamps.join(","), self.shift)
    }
}
