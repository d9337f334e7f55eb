//! Characteristic tame cuts: indicator functions `φ_n` with `φ_n ≡ 1` on the
//! ball `B_n` and certified bounds on their multiplier norms.
//!
//! Subgroup-level cuts live on the designated subgroup H of each family and
//! cover `B_n ∩ H`; [`extend_by_cogrowth`] turns them into cuts on the whole
//! group by translating over a coset section.

mod construct;
mod singular;
mod support;
mod verify;

pub use construct::{
    cut_ball, cut_bs, cut_lamplighter, cut_log_length_z, cut_pq, cut_semidirect_zd, extend_by_cogrowth,
    log_ball_radius, standard_cut, subgroup_cut, BuildOptions, Construction,
};
pub use singular::{growth_constant, spectral_norm_bound, NormBound};
pub use support::Support;
pub use verify::{fit_growth, verify_cut, VerificationReport, VerifyOptions, Witness};

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fourier::{FourierError, NormCertificate};
use crate::groups::{Element, Group, GroupError, GroupSpec};
use crate::opnorm::OpnormError;
use crate::regression::PowerFit;

#[derive(Debug, thiserror::Error)]
pub enum CutError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Fourier(#[from] FourierError),
    #[error(transparent)]
    Opnorm(#[from] OpnormError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl CutError {
    /// Budget or tolerance exhaustion, as opposed to bad input.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            CutError::Group(GroupError::BudgetExceeded { .. })
                | CutError::Opnorm(OpnormError::Group(GroupError::BudgetExceeded { .. }))
                | CutError::Fourier(FourierError::Resource { .. })
        )
    }
}

/// The set a cut must equal 1 on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    /// `B_n` in the word metric.
    WordBall,
    /// `B_n ∩ H`, with the word metric of the whole group.
    SubgroupBall,
    /// `{k ∈ ℤ : ln(1 + |k|) ≤ n}`.
    LogBall,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub construction: String,
    pub parameters: BTreeMap<String, String>,
}

impl Provenance {
    pub(crate) fn new<const N: usize>(construction: &str, parameters: [(&str, String); N]) -> Self {
        Self {
            construction: construction.to_string(),
            parameters: parameters.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cut {
    pub group: GroupSpec,
    pub n: u32,
    pub domain: Domain,
    pub support: Support,
    pub norm_cert: NormCertificate,
    pub provenance: Provenance,
}

impl Cut {
    pub fn contains(&self, group: &Group, x: &Element) -> Result<bool, CutError> {
        self.support.contains(group, x)
    }

    /// `φ_n` as a function; membership errors (family mismatches) read as 0.
    pub fn indicator<'a>(&'a self, group: &'a Group) -> impl Fn(&Element) -> Complex64 + Sync + 'a {
        move |x| {
            if self.support.contains(group, x).unwrap_or(false) {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::default()
            }
        }
    }

    pub fn summary(&self) -> CutSummary {
        CutSummary {
            group: self.group.clone(),
            n: self.n,
            domain: self.domain,
            support: self.support.to_string(),
            support_kind: self.support.kind().to_string(),
            support_size: self.support.cardinality().map(|c| c.to_string()),
            norm_cert: self.norm_cert.clone(),
            provenance: self.provenance.clone(),
        }
    }
}

/// Serializable view of a [`Cut`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutSummary {
    pub group: GroupSpec,
    pub n: u32,
    pub domain: Domain,
    pub support: String,
    pub support_kind: String,
    /// Decimal string; absent when no closed form is known.
    pub support_size: Option<String>,
    pub norm_cert: NormCertificate,
    pub provenance: Provenance,
}

#[derive(Clone, Debug)]
pub struct CutFamily {
    pub cuts: Vec<Cut>,
    pub growth_fit: Option<PowerFit>,
}

impl CutFamily {
    /// Checks that all cuts share a group and have strictly increasing
    /// indices; fits growth when at least three positive indices are present.
    pub fn new(cuts: Vec<Cut>) -> Result<Self, CutError> {
        if let Some(w) = cuts.windows(2).find(|w| w[0].n >= w[1].n) {
            return Err(CutError::InvalidInput(format!("indices must increase, got {} then {}", w[0].n, w[1].n)));
        }
        if let Some(c) = cuts.iter().find(|c| c.group != cuts[0].group) {
            return Err(CutError::InvalidInput(format!("mixed groups {} and {}", cuts[0].group, c.group)));
        }
        let mut family = Self { cuts, growth_fit: None };
        family.growth_fit = fit_growth(&family).ok();
        Ok(family)
    }

    /// Builds `make(n)` for every index in parallel.
    pub fn build<F>(indices: &[u32], make: F) -> Result<Self, CutError>
    where
        F: Fn(u32) -> Result<Cut, CutError> + Sync,
    {
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let cuts = sorted.par_iter().map(|&n| make(n)).collect::<Result<Vec<_>, _>>()?;
        Self::new(cuts)
    }

    pub fn get(&self, n: u32) -> Option<&Cut> {
        self.cuts.iter().find(|c| c.n == n)
    }

    pub fn indices(&self) -> Vec<u32> {
        self.cuts.iter().map(|c| c.n).collect()
    }
}
