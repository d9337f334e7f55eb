//! Ordinary least squares for log-log growth fits.

use serde::{Deserialize, Serialize};

/// `y ≈ C·x^a`, fitted as `ln y = ln C + a ln x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerFit {
    pub c: f64,
    pub a: f64,
}

/// Returns `(intercept, slope)` of the least-squares line, or `None` when
/// fewer than two points or all `x` coincide.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let n = xs.len();
    if n < 2 || n != ys.len() {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Some((my - slope * mx, slope))
}

/// Fits `y ≈ C·x^a` over positive data.
pub fn power_fit(xs: &[f64], ys: &[f64]) -> Option<PowerFit> {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    least_squares(&lx, &ly).map(|(b, a)| PowerFit { c: b.exp(), a })
}
