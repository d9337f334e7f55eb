use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{lambda_norm_lower_on, FinSuppFun, OpnormError, SpectralOptions};
use crate::groups::{ball, Element, Group, GroupSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplierBound {
    pub value: f64,
    /// Ratio per probe; index 0 is `δ_e`, then the caller's probes in order.
    pub ratios: Vec<f64>,
    pub best_probe: usize,
}

/// The flat indicator of `support` followed by `count` functions with
/// independent uniform `[0, 1]` values on `support`.
pub fn standard_probes(group: &GroupSpec, support: &[Element], count: usize, seed: u64) -> Vec<FinSuppFun> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut probes = vec![FinSuppFun::indicator(group.clone(), support)];
    for _ in 0..count {
        let pairs: Vec<(Element, Complex64)> =
            support.iter().map(|x| (x.clone(), Complex64::new(rng.gen::<f64>(), 0.0))).collect();
        probes.push(FinSuppFun::from_pairs(group.clone(), pairs));
    }
    probes
}

/// `max_f ‖λ(φ·f)‖_{lower} / ‖f‖₁` over `δ_e` and the given probes. Since
/// `‖λ(f)‖ ≤ ‖f‖₁`, each ratio is at most `‖λ(φf)‖/‖λ(f)‖ ≤ ‖φ‖_{MA}`.
pub fn multiplier_lower(
    group: &Group,
    phi: &(dyn Fn(&Element) -> Complex64 + Sync),
    probes: &[FinSuppFun],
    radius: u32,
    opts: &SpectralOptions,
) -> Result<MultiplierBound, OpnormError> {
    if let Some(i) = probes.iter().position(|f| f.is_empty()) {
        return Err(OpnormError::InvalidInput(format!("probe {i} is zero")));
    }
    let b = ball(group, radius, opts.budget, None)?;
    let delta = FinSuppFun::delta(group.spec().clone(), group.identity());
    let all: Vec<&FinSuppFun> = std::iter::once(&delta).chain(probes).collect();
    let ratios = all
        .par_iter()
        .map(|f| {
            let product = f.multiply_by(phi);
            let est = lambda_norm_lower_on(group, &product, &b, opts)?;
            Ok(if product.is_empty() { 0.0 } else { est.lower / f.l1() })
        })
        .collect::<Result<Vec<f64>, OpnormError>>()?;
    let (best_probe, value) =
        ratios
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, r)| if r > acc.1 { (i, r) } else { acc });
    Ok(MultiplierBound { value, ratios, best_probe })
}

/// Lower bound for `sup{‖λ_H(φ·f)‖ : supp f ⊆ B_n, ‖λ_H(f)‖ ≤ 1}` using
/// probes supported in `B_n`.
pub fn ma_ball_norm_lower(
    group: &Group,
    phi: &(dyn Fn(&Element) -> Complex64 + Sync),
    n: u32,
    probes: &[FinSuppFun],
    radius: u32,
    opts: &SpectralOptions,
) -> Result<MultiplierBound, OpnormError> {
    let bn = ball(group, n, opts.budget, None)?;
    for (i, f) in probes.iter().enumerate() {
        if let Some(x) = f.support().find(|x| !bn.contains(x)) {
            return Err(OpnormError::InvalidInput(format!("probe {i} is nonzero at {x}, outside B_{n}")));
        }
    }
    multiplier_lower(group, phi, probes, radius, opts)
}
