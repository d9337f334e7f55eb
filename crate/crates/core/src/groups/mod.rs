//! Exact arithmetic, canonical forms, word metrics and ball enumeration for
//! free abelian groups, ℤᵈ ⋊_A ℤ, ℤ[1/pq] ⋊ ℤ, lamplighters and
//! Baumslag–Solitar groups.

mod ball;
mod bs;
mod cache;
mod coset;
mod element;
mod group;
mod matrix;
mod spec;

pub use ball::{ball, word_length, Ball, BallExplorer, DEFAULT_BUDGET};
pub use bs::{BsWord, Syllable};
pub use cache::{decode_ball, encode_ball, BallCache, CACHE_ENV, DEFAULT_CACHE_DIR, FORMAT_VERSION};
pub use coset::{coset_section, CosetSection};
pub use element::{Element, LampConfig, PqElement};
pub use group::Group;
pub use matrix::{determinant, IntMatrix};
pub use spec::{format_word, parse_word, GroupSpec, Letter};

#[derive(Debug, thiserror::Error)]
pub enum GroupError {
    #[error("invalid group: {0}")]
    InvalidSpec(String),
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("element of family {found} used with a {expected} group")]
    FamilyMismatch { expected: &'static str, found: &'static str },
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("ball budget of {budget} elements exceeded after radius {radius_reached}")]
    BudgetExceeded { budget: usize, radius_reached: u32 },
    #[error("element not found within radius {radius}")]
    NotFound { radius: u32 },
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
