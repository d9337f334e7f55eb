//! Lower bounds on `‖λ(f)‖` in the reduced C*-algebra, rapid-decay tests and
//! empirical lower bounds on multiplier norms.

mod function;
mod multiplier;
mod rd;
mod spectral;

pub use function::FinSuppFun;
pub use multiplier::{ma_ball_norm_lower, multiplier_lower, standard_probes, MultiplierBound};
pub use rd::{rd_fit, rd_test, RdSample};
pub use spectral::{lambda_norm_lower, lambda_norm_lower_on, SpectralEstimate, SpectralOptions};

use crate::groups::GroupError;

#[derive(Debug, thiserror::Error)]
pub enum OpnormError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
