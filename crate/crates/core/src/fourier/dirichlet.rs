//! Lebesgue constants `L_n = ‖D_n‖_{L¹(𝕋)}`.
//!
//! For `n ≤ FEJER_LIMIT` Fejér's finite sum
//! `L_n = 1/M + (2/π) Σ_{k=1}^{n} tan(πk/M)/k`, `M = 2n + 1`, is evaluated with
//! compensated summation. Beyond that the expansion
//! `L_n = (4/π²) ln M + c₀ + c₂/M² + O(M⁻⁴)` is used.

use std::f64::consts::PI;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::{FourierError, Method, NormCertificate};

pub const FEJER_LIMIT: u64 = 1 << 20;

/// Growth rate of `L_n` against `ln n`: `4/π²`.
pub const LEBESGUE_SLOPE: f64 = 4.0 / (PI * PI);

const C0: f64 = 0.989_431_273_831_147;
const C2: f64 = 0.011_991_9;
const REMAINDER: f64 = 1e-3;

pub fn dirichlet_l1(n: u64, tol: f64) -> Result<NormCertificate, FourierError> {
    dirichlet_l1_big(&BigUint::from(n), tol)
}

pub fn dirichlet_l1_big(n: &BigUint, tol: f64) -> Result<NormCertificate, FourierError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(FourierError::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    match n.to_u64() {
        Some(0) => Ok(NormCertificate::exact(1.0, Method::ClosedForm)),
        Some(n) if n <= FEJER_LIMIT => {
            let v = fejer_sum(n);
            let err = 8.0 * f64::EPSILON * n as f64 * v;
            Ok(NormCertificate::interval(v - err, v + err, Method::ClosedForm, tol))
        }
        _ => {
            let m: BigUint = n * 2u32 + 1u32;
            let mf = m.to_f64().unwrap_or(f64::INFINITY);
            let inv2 = if mf.is_finite() { 1.0 / (mf * mf) } else { 0.0 };
            let v = LEBESGUE_SLOPE * ln_big(&m) + C0 + C2 * inv2;
            let err = REMAINDER * inv2 + 4.0 * f64::EPSILON * v;
            Ok(NormCertificate::interval(v - err, v + err, Method::Asymptotic, tol))
        }
    }
}

fn fejer_sum(n: u64) -> f64 {
    let m = (2 * n + 1) as f64;
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for k in 1..=n {
        let term = (PI * k as f64 / m).tan() / k as f64 - comp;
        let next = sum + term;
        comp = (next - sum) - term;
        sum = next;
    }
    1.0 / m + 2.0 / PI * sum
}

/// Natural logarithm of an arbitrarily large integer.
pub(crate) fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite below 2^1000").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}
