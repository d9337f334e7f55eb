//! Fourier-algebra norms of finitely supported functions on ℤᵈ and ℤ_m.
//!
//! On an abelian group the A-norm of `f` is the L¹ norm of its transform, so
//! for `f` on ℤᵈ it is `∫_{𝕋ᵈ} |Σ f(k) e^{2πi k·t}| dt`. Every result is a
//! [`NormCertificate`]: an interval with the method that produced it.

mod certificate;
mod cyclic;
mod dirichlet;
mod torus;
mod trig;

pub use certificate::{Method, NormCertificate};
pub use cyclic::{finite_cyclic_a_norm, hardy_ratio, tensor_certificate, tensor_norm};
pub use dirichlet::{dirichlet_l1, dirichlet_l1_big, FEJER_LIMIT, LEBESGUE_SLOPE};
pub use torus::{a_norm_torus, a_norm_torus_levels, DEFAULT_GRID_BUDGET};
pub use trig::TrigPoly;

#[derive(Debug, thiserror::Error)]
pub enum FourierError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("tolerance {tol} not reached within a grid budget of {budget} points (best bounds [{}, {}])", best.lower, best.upper)]
    Resource { tol: f64, budget: usize, best: NormCertificate },
}
