use serde::{Deserialize, Serialize};

use super::{log_ball_radius, Cut, CutError, CutFamily, Domain};
use crate::fourier::NormCertificate;
use crate::groups::{ball, BallCache, Element, Group, DEFAULT_BUDGET};
use crate::opnorm::{multiplier_lower, standard_probes, SpectralOptions};
use crate::regression::{power_fit, PowerFit};

#[derive(Clone, Debug)]
pub struct VerifyOptions<'a> {
    pub budget: usize,
    /// Probes are supported in `B_r`; defaults to `min(n, 3)`.
    pub probe_radius: Option<u32>,
    /// Random probes besides `δ_e` and the flat one.
    pub probes: usize,
    pub seed: u64,
    pub spectral: SpectralOptions,
    pub cache: Option<&'a BallCache>,
}

impl Default for VerifyOptions<'_> {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            probe_radius: None,
            probes: 4,
            seed: 0,
            spectral: SpectralOptions::default(),
            cache: None,
        }
    }
}

/// An element of the domain where the cut is not 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub element: Element,
    pub length: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub n: u32,
    pub covers_ball: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
    /// Number of domain elements checked.
    pub checked: usize,
    pub norm_upper: NormCertificate,
    pub norm_lower: f64,
    pub consistency: bool,
}

/// Enumerates the domain (`B_n`, `B_n ∩ H` or the logarithmic ball) and checks
/// membership of every element, then bounds `‖φ_n‖` from below with
/// `multiplier_lower`.
pub fn verify_cut(cut: &Cut, opts: &VerifyOptions) -> Result<VerificationReport, CutError> {
    let group = Group::new(cut.group.clone())?;
    let domain: Vec<(Element, u32)> = match cut.domain {
        Domain::WordBall | Domain::SubgroupBall => {
            let b = ball(&group, cut.n, opts.budget, opts.cache)?;
            b.iter()
                .filter(|(x, _)| cut.domain == Domain::WordBall || group.in_subgroup(x))
                .map(|(x, l)| (x.clone(), l))
                .collect()
        }
        Domain::LogBall => {
            let r = log_ball_radius(cut.n)?;
            if (2 * r + 1) as u128 > opts.budget as u128 {
                return Err(CutError::Group(crate::groups::GroupError::BudgetExceeded {
                    budget: opts.budget,
                    radius_reached: 0,
                }));
            }
            let r = r as i64;
            (-r..=r)
                .map(|k| {
                    let len = ((k.unsigned_abs() as f64).ln_1p()).ceil() as u32;
                    (Element::FreeAbelian { v: vec![k] }, len)
                })
                .collect()
        }
    };
    let mut witness = None;
    for (x, l) in &domain {
        if !cut.contains(&group, x)? {
            witness = Some(Witness { element: x.clone(), length: *l });
            break;
        }
    }

    let r = opts.probe_radius.unwrap_or(cut.n.min(3));
    let probe_ball = ball(&group, r, opts.budget, opts.cache)?;
    let support: Vec<Element> = probe_ball
        .members()
        .iter()
        .filter(|x| cut.domain != Domain::SubgroupBall || group.in_subgroup(x))
        .cloned()
        .collect();
    let probes = standard_probes(group.spec(), &support, opts.probes, opts.seed);
    let phi = cut.indicator(&group);
    let spectral = SpectralOptions { budget: opts.budget, ..opts.spectral.clone() };
    let lower = multiplier_lower(&group, &phi, &probes, 2 * r, &spectral)?.value;
    let upper = &cut.norm_cert;
    Ok(VerificationReport {
        n: cut.n,
        covers_ball: witness.is_none(),
        witness,
        checked: domain.len(),
        norm_upper: upper.clone(),
        norm_lower: lower,
        consistency: lower <= upper.upper * (1.0 + 1e-12) + 1e-12,
    })
}

/// Least-squares fit of `ln upper` against `ln n` over positive indices. A
/// family whose uppers agree within 1% gets `a = 0` and `C = max upper`.
pub fn fit_growth(family: &CutFamily) -> Result<PowerFit, CutError> {
    let points: Vec<(f64, f64)> =
        family.cuts.iter().filter(|c| c.n > 0).map(|c| (c.n as f64, c.norm_cert.upper)).collect();
    if points.len() < 3 {
        return Err(CutError::InvalidInput(format!("growth fit needs 3 positive indices, got {}", points.len())));
    }
    let max = points.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let min = points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    if max <= 1.01 * min {
        return Ok(PowerFit { c: max, a: 0.0 });
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = points.into_iter().unzip();
    power_fit(&xs, &ys).ok_or_else(|| CutError::InvalidInput("degenerate growth data".into()))
}
