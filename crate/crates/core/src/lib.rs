//! Tame-cut sequences on finitely generated groups, with the supporting
//! word-metric, Fourier-norm and operator-norm machinery.

pub mod fourier;
pub mod groups;
pub mod opnorm;
pub mod regression;
pub mod tamecuts;
