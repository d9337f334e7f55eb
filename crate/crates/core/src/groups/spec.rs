use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{GroupError, IntMatrix};

/// One of the supported finitely generated group families together with its
/// parameters. The generating set is fixed per family, see
/// [`GroupSpec::generator_names`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GroupSpec {
    /// ℤᵈ with the unit vectors `e1..ed`.
    FreeAbelian { d: usize },
    /// ℤᵈ ⋊_A ℤ with generators `e1..ed, t`.
    SemidirectZd { matrix: IntMatrix },
    /// ℤ[1/pq] ⋊_{p/q} ℤ realised as 2×2 matrices, generators `s = diag(p/q, 1)`
    /// and `t = [[1,1],[0,1]]`.
    Pq { p: u64, q: u64 },
    /// ℤ_p ≀ ℤ with `a` (lamp at the cursor) and `t` (shift).
    Lamplighter { p: u32 },
    /// BS(p,q) = ⟨a, t | t a^p t⁻¹ = a^q⟩.
    BaumslagSolitar { p: u64, q: u64 },
}

impl GroupSpec {
    pub fn validate(&self) -> Result<(), GroupError> {
        match self {
            GroupSpec::FreeAbelian { d } => {
                if *d == 0 {
                    return Err(GroupError::InvalidSpec("free abelian rank must be positive".into()));
                }
            }
            GroupSpec::SemidirectZd { matrix } => {
                let det = matrix.determinant();
                if det != 1.into() && det != (-1).into() {
                    return Err(GroupError::InvalidSpec(format!(
                        "semidirect matrix must have determinant ±1, got {det}"
                    )));
                }
            }
            GroupSpec::Pq { p, q } => {
                if *p == 0 || *q == 0 {
                    return Err(GroupError::InvalidSpec("p and q must be positive".into()));
                }
                if p.gcd(q) != 1 {
                    return Err(GroupError::InvalidSpec(format!("p={p} and q={q} are not coprime")));
                }
                if p.checked_mul(*q).is_none() {
                    return Err(GroupError::InvalidSpec("p*q overflows".into()));
                }
            }
            GroupSpec::Lamplighter { p } => {
                if *p < 2 {
                    return Err(GroupError::InvalidSpec("lamplighter needs p >= 2".into()));
                }
            }
            GroupSpec::BaumslagSolitar { p, q } => {
                if *p == 0 || *q == 0 {
                    return Err(GroupError::InvalidSpec("p and q must be positive".into()));
                }
            }
        }
        Ok(())
    }

    /// Names of the standard generators, in the order used by BFS.
    pub fn generator_names(&self) -> Vec<String> {
        match self {
            GroupSpec::FreeAbelian { d } => (1..=*d).map(|i| format!("e{i}")).collect(),
            GroupSpec::SemidirectZd { matrix } => {
                let mut names: Vec<String> = (1..=matrix.dim()).map(|i| format!("e{i}")).collect();
                names.push("t".into());
                names
            }
            GroupSpec::Pq { .. } => vec!["s".into(), "t".into()],
            GroupSpec::Lamplighter { .. } | GroupSpec::BaumslagSolitar { .. } => {
                vec!["a".into(), "t".into()]
            }
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            GroupSpec::FreeAbelian { .. } => "free_abelian",
            GroupSpec::SemidirectZd { .. } => "semidirect_zd",
            GroupSpec::Pq { .. } => "pq",
            GroupSpec::Lamplighter { .. } => "lamplighter",
            GroupSpec::BaumslagSolitar { .. } => "baumslag_solitar",
        }
    }

    /// Whether the group is abelian (used to pick exact Fourier norms).
    pub fn is_abelian(&self) -> bool {
        match self {
            GroupSpec::FreeAbelian { .. } => true,
            GroupSpec::SemidirectZd { matrix } => *matrix == IntMatrix::identity(matrix.dim()),
            GroupSpec::Pq { p, q } => p == q,
            GroupSpec::Lamplighter { .. } => false,
            GroupSpec::BaumslagSolitar { p, q } => *p == 1 && *q == 1,
        }
    }

    /// Stable hex digest of the canonical JSON encoding, used for cache keys.
    pub fn digest(&self) -> String {
        let json = serde_json::to_vec(self).expect("group spec serialises");
        let hash = Sha256::digest(&json);
        hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::FreeAbelian { d } => write!(f, "Z^{d}"),
            GroupSpec::SemidirectZd { matrix } => write!(f, "Z^{} x_A Z (A={matrix})", matrix.dim()),
            GroupSpec::Pq { p, q } => write!(f, "Z[1/{}] x_({p}/{q}) Z", p * q),
            GroupSpec::Lamplighter { p } => write!(f, "Z_{p} wr Z"),
            GroupSpec::BaumslagSolitar { p, q } => write!(f, "BS({p},{q})"),
        }
    }
}

/// A generator or its formal inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Self { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Self { generator: self.generator, inverse: !self.inverse }
    }
}

/// Parses a whitespace separated word such as `"t a a t^-1"`. Inverses may be
/// written `x^-1`, `x⁻¹` or `X` (upper case of a single-letter name).
pub fn parse_word(spec: &GroupSpec, text: &str) -> Result<Vec<Letter>, GroupError> {
    let names = spec.generator_names();
    let mut word = Vec::new();
    for token in text.split_whitespace() {
        let (base, inverse) = if let Some(b) = token.strip_suffix("^-1") {
            (b.to_string(), true)
        } else if let Some(b) = token.strip_suffix("⁻¹") {
            (b.to_string(), true)
        } else if token.len() == 1 && token.chars().all(|c| c.is_ascii_uppercase()) {
            (token.to_ascii_lowercase(), true)
        } else {
            (token.to_string(), false)
        };
        let generator =
            names.iter().position(|n| *n == base).ok_or_else(|| GroupError::UnknownSymbol(token.to_string()))?;
        word.push(Letter { generator, inverse });
    }
    Ok(word)
}

pub fn format_word(spec: &GroupSpec, word: &[Letter]) -> String {
    let names = spec.generator_names();
    word.iter()
        .map(|l| if l.inverse { format!("{}^-1", names[l.generator]) } else { names[l.generator].clone() })
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(GroupSpec::Pq { p: 2, q: 4 }.validate().is_err());
        assert!(GroupSpec::Pq { p: 2, q: 3 }.validate().is_ok());
        assert!(GroupSpec::Lamplighter { p: 1 }.validate().is_err());
        let bad = GroupSpec::SemidirectZd { matrix: IntMatrix::parse("2,0;0,1").unwrap() };
        assert!(bad.validate().is_err());
        let flip = GroupSpec::SemidirectZd { matrix: IntMatrix::parse("0,1;1,0").unwrap() };
        assert!(flip.validate().is_ok());
    }

    #[test]
    fn parse_inverse_notations() {
        let spec = GroupSpec::BaumslagSolitar { p: 2, q: 3 };
        let w1 = parse_word(&spec, "t a a t^-1").unwrap();
        let w2 = parse_word(&spec, "t a a t⁻¹").unwrap();
        let w3 = parse_word(&spec, "t a a T").unwrap();
        assert_eq!(w1, w2);
        assert_eq!(w1, w3);
        assert!(matches!(parse_word(&spec, "t b"), Err(GroupError::UnknownSymbol(_))));
        assert_eq!(format_word(&spec, &w1), "t a a t^-1");
    }

    #[test]
    fn digest_is_stable_per_spec() {
        let a = GroupSpec::Lamplighter { p: 2 };
        assert_eq!(a.digest(), GroupSpec::Lamplighter { p: 2 }.digest());
        assert_ne!(a.digest(), GroupSpec::Lamplighter { p: 3 }.digest());
        assert_eq!(a.digest().len(), 16);
    }
}
