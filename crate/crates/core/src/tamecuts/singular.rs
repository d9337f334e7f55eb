//! Certified upper bounds for `max(‖A‖, ‖A⁻¹‖)`.
//!
//! A float estimate `λ̃` of the top eigenvalue of `AᵀA` is turned into a
//! rational `μ = num/den` and accepted only when `μI − AᵀA` is shown positive
//! semidefinite in exact integer arithmetic (all principal minors ≥ 0). Hence
//! `‖A‖ ≤ √μ` holds without rounding caveats.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::groups::{determinant, IntMatrix};

use super::CutError;

/// `‖A‖² ≤ num/den`, with `lower ≤ ‖A‖ ≤ upper` as floats.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormBound {
    pub num: BigUint,
    pub den: BigUint,
    pub upper: f64,
    pub lower: f64,
}

impl NormBound {
    /// Smallest integer `N ≥ n·(num/den)^{n/2}`, i.e. with `N²·denⁿ ≥ n²·numⁿ`.
    pub fn ceil_n_power(&self, n: u32) -> BigUint {
        let target = BigUint::from(n) * BigUint::from(n) * self.num.pow(n);
        let scale = self.den.pow(n);
        let mut s = (&target / &scale).sqrt();
        while &s * &s * &scale < target {
            s += 1u32;
        }
        s
    }
}

fn gram(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let d = a.dim();
    let big = a.to_big();
    (0..d).map(|i| (0..d).map(|j| (0..d).map(|k| &big[k][i] * &big[k][j]).sum()).collect()).collect()
}

fn is_psd(m: &[Vec<BigInt>]) -> bool {
    let d = m.len();
    (1u32..(1 << d)).all(|mask| {
        let idx: Vec<usize> = (0..d).filter(|i| mask & (1 << i) != 0).collect();
        let sub: Vec<Vec<BigInt>> = idx.iter().map(|&i| idx.iter().map(|&j| m[i][j].clone()).collect()).collect();
        determinant(&sub).sign() != Sign::Minus
    })
}

/// `num·I − den·G ⪰ 0`.
fn dominates(g: &[Vec<BigInt>], num: &BigUint, den: &BigUint) -> bool {
    let (num, den) = (BigInt::from(num.clone()), BigInt::from(den.clone()));
    let m: Vec<Vec<BigInt>> = g
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter().enumerate().map(|(j, x)| if i == j { &num - &den * x } else { -(&den * x) }).collect()
        })
        .collect();
    is_psd(&m)
}

/// Top eigenpair of a symmetric PSD float matrix by power iteration.
fn top_eigen(g: &[Vec<f64>]) -> (f64, Vec<f64>) {
    let d = g.len();
    let mut v: Vec<f64> = (0..d).map(|i| 1.0 + 0.1 * i as f64).collect();
    let mut lambda = 0.0;
    for _ in 0..2000 {
        let w: Vec<f64> = (0..d).map(|i| (0..d).map(|j| g[i][j] * v[j]).sum()).collect();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return (0.0, v);
        }
        lambda = v.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() / v.iter().map(|x| x * x).sum::<f64>();
        v = w.into_iter().map(|x| x / norm).collect();
    }
    (lambda, v)
}

pub fn spectral_norm_bound(a: &IntMatrix) -> Result<NormBound, CutError> {
    let g = gram(a);
    let gf: Vec<Vec<f64>> = g.iter().map(|r| r.iter().map(|x| x.to_f64().unwrap_or(f64::INFINITY)).collect()).collect();
    let (estimate, v) = top_eigen(&gf);
    if !estimate.is_finite() {
        return Err(CutError::InvalidInput("matrix entries too large for the norm estimate".into()));
    }
    let rounded = estimate.round();
    let (num, den) =
        if (rounded - estimate).abs() < 1e-9 && dominates(&g, &BigUint::from(rounded as u64), &BigUint::one()) {
            (BigUint::from(rounded as u64), BigUint::one())
        } else {
            let den = BigUint::one() << 64usize;
            let mut slack = f64::EPSILON * 4.0;
            loop {
                let scaled = estimate * (1.0 + slack) * 2f64.powi(64);
                let num = BigUint::from(scaled.ceil() as u128);
                if dominates(&g, &num, &den) {
                    break (num, den);
                }
                slack *= 4.0;
                if slack > 1.0 {
                    return Err(CutError::InvalidInput("could not certify the operator norm".into()));
                }
            }
        };
    let ratio = ratio_f64(&num, &den);
    let mut upper = ratio.sqrt();
    while upper * upper < ratio {
        upper = next_up(upper);
    }
    let upper = next_up(upper);
    Ok(NormBound { num, den, upper, lower: rayleigh_lower(&g, &v) })
}

/// `max(‖A‖, ‖A⁻¹‖)` as a certified bound.
pub fn growth_constant(a: &IntMatrix) -> Result<NormBound, CutError> {
    let inv = a.unimodular_inverse()?;
    let (x, y) = (spectral_norm_bound(a)?, spectral_norm_bound(&inv)?);
    let x_wins = &x.num * &y.den >= &y.num * &x.den;
    let (hi, lo) = if x_wins { (x, y) } else { (y, x) };
    Ok(NormBound { lower: hi.lower.max(lo.lower), ..hi })
}

fn ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    let shift = num.bits().max(den.bits()).saturating_sub(60);
    (num >> shift).to_f64().unwrap_or(f64::INFINITY) / (den >> shift).to_f64().unwrap_or(f64::INFINITY)
}

fn next_up(x: f64) -> f64 {
    f64::from_bits(x.to_bits() + 1)
}

/// `√(vᵀGv / vᵀv)` for an integer rounding of `v`, evaluated exactly and
/// rounded down.
fn rayleigh_lower(g: &[Vec<BigInt>], v: &[f64]) -> f64 {
    let scale = 2f64.powi(40);
    let w: Vec<BigInt> = v.iter().map(|x| BigInt::from((x * scale).round() as i64)).collect();
    let d = w.len();
    let vv: BigInt = w.iter().map(|x| x * x).sum();
    if vv.is_zero() {
        return 0.0;
    }
    let vgv: BigInt = (0..d).map(|i| (0..d).map(|j| &w[i] * &g[i][j] * &w[j]).sum::<BigInt>()).sum();
    let r = ratio_f64(&vgv.abs().to_biguint().expect("nonnegative"), &vv.to_biguint().expect("nonnegative"));
    let mut lower = r.sqrt();
    while lower * lower > r {
        lower = f64::from_bits(lower.to_bits() - 1);
    }
    f64::from_bits(lower.to_bits().saturating_sub(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shear_constant_is_golden_ratio() {
        let a = IntMatrix::parse("1,1;0,1").unwrap();
        let b = growth_constant(&a).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(b.upper >= phi && b.upper - phi <= 1e-9, "{b:?}");
        assert!(b.lower <= phi && phi - b.lower <= 1e-9);
    }

    #[test]
    fn identity_is_exactly_one() {
        let b = growth_constant(&IntMatrix::identity(3)).unwrap();
        assert_eq!((b.num.clone(), b.den.clone()), (BigUint::one(), BigUint::one()));
        assert_eq!(b.ceil_n_power(5), BigUint::from(5u32));
    }

    #[test]
    fn ceiling_is_exact() {
        // μ = 2: N = ⌈n·2^{n/2}⌉; n = 3 gives ⌈3·2√2⌉ = ⌈8.485⌉ = 9
        let b = NormBound { num: BigUint::from(2u32), den: BigUint::one(), upper: 0.0, lower: 0.0 };
        assert_eq!(b.ceil_n_power(3), BigUint::from(9u32));
        assert_eq!(b.ceil_n_power(2), BigUint::from(4u32));
    }

    #[test]
    fn psd_check() {
        let g = gram(&IntMatrix::parse("2,1;1,1").unwrap());
        // eigenvalues of AᵀA are (7 ± 3√5)/2 ≈ 6.854, 0.146
        assert!(dominates(&g, &BigUint::from(7u32), &BigUint::one()));
        assert!(!dominates(&g, &BigUint::from(6u32), &BigUint::one()));
    }
}
