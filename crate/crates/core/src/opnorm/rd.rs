use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{lambda_norm_lower_on, FinSuppFun, OpnormError, SpectralOptions};
use crate::groups::{ball, Element, Group};
use crate::regression::{least_squares, PowerFit};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RdSample {
    pub n: u32,
    pub l2: f64,
    pub lower: f64,
    /// `lower / l2`
    pub ratio: f64,
}

/// `samples` random nonnegative functions on `B_n`, each tested on `ℓ²(B_n)`.
pub fn rd_test(
    group: &Group,
    n: u32,
    samples: usize,
    seed: u64,
    opts: &SpectralOptions,
) -> Result<Vec<RdSample>, OpnormError> {
    let b = ball(group, n, opts.budget, None)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let functions: Vec<FinSuppFun> = (0..samples)
        .map(|_| {
            let pairs: Vec<(Element, Complex64)> =
                b.members().iter().map(|x| (x.clone(), Complex64::new(rng.gen::<f64>(), 0.0))).collect();
            FinSuppFun::from_pairs(group.spec().clone(), pairs)
        })
        .collect();
    functions
        .par_iter()
        .map(|f| {
            let est = lambda_norm_lower_on(group, f, &b, opts)?;
            Ok(RdSample { n, l2: est.l2_lower, lower: est.lower, ratio: est.lower / est.l2_lower })
        })
        .collect()
}

/// Least-squares fit of `ln(max ratio at n)` against `ln(1 + n)`.
pub fn rd_fit(samples: &[RdSample]) -> Result<PowerFit, OpnormError> {
    let mut best: BTreeMap<u32, f64> = BTreeMap::new();
    for s in samples {
        let e = best.entry(s.n).or_insert(f64::NEG_INFINITY);
        *e = e.max(s.ratio);
    }
    if best.len() < 3 {
        return Err(OpnormError::InvalidInput(format!("rd_fit needs at least 3 distinct n, got {}", best.len())));
    }
    let first = *best.values().next().expect("nonempty");
    if best.values().all(|&r| r == first) {
        return Ok(PowerFit { c: first, a: 0.0 });
    }
    let xs: Vec<f64> = best.keys().map(|&n| (1.0 + n as f64).ln()).collect();
    let ys: Vec<f64> = best.values().map(|r| r.ln()).collect();
    let (b, a) = least_squares(&xs, &ys).expect("distinct abscissae");
    Ok(PowerFit { c: b.exp(), a })
}
