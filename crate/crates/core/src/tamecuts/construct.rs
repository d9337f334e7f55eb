use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_complex::Complex64;

use super::{growth_constant, Cut, CutError, CutFamily, Domain, Provenance, Support};
use crate::fourier::{
    a_norm_torus, dirichlet_l1, dirichlet_l1_big, tensor_certificate, FourierError, Method, NormCertificate, TrigPoly,
};
use crate::groups::{ball, coset_section, BallCache, Element, Group, GroupSpec, IntMatrix, LampConfig, DEFAULT_BUDGET};
use crate::opnorm::{multiplier_lower, standard_probes, SpectralOptions};

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions<'a> {
    pub budget: usize,
    /// Target relative width of Fourier-norm certificates.
    pub tol: f64,
    pub cache: Option<&'a BallCache>,
}

impl Default for BuildOptions<'_> {
    fn default() -> Self {
        Self { budget: DEFAULT_BUDGET, tol: 1e-9, cache: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    /// The family-specific cut: [`subgroup_cut`], extended to the whole group
    /// on request, or [`cut_bs`].
    Standard,
    Ball,
    /// ℤ with the length `ln(1 + |k|)`.
    LogLength,
}

impl Construction {
    pub fn build(self, spec: &GroupSpec, n: u32, extend: bool, opts: &BuildOptions) -> Result<Cut, CutError> {
        match self {
            Construction::Standard => standard_cut(spec, n, extend, opts),
            Construction::Ball => cut_ball(spec, n, opts),
            Construction::LogLength => match spec {
                GroupSpec::FreeAbelian { d: 1 } => cut_log_length_z(n, opts.tol),
                _ => Err(CutError::InvalidInput(format!("logarithmic length is defined on ℤ only, not {spec}"))),
            },
        }
    }
}

/// `H_n` for the lamplighter: the subgroup of `⊕ℤ_p` generated by `B_n ∩ H`.
/// A configuration with a lamp lit at `j` has length at least that of the
/// single lamp at `j`, and length grows with `|j|`, so `H_n` is the window of
/// positions whose single lamp fits in `B_n`.
pub fn cut_lamplighter(p: u32, n: u32) -> Result<Cut, CutError> {
    let spec = GroupSpec::Lamplighter { p };
    spec.validate()?;
    let single = |j: i64| LampConfig { lamps: BTreeMap::from([(j, 1)]), shift: 0 }.word_length(p);
    let mut half_width = None;
    let mut j = 0u64;
    while single(j as i64).max(single(-(j as i64))) <= n as u64 {
        half_width = Some(j);
        j += 1;
    }
    let support = Support::LamplighterWindow { p, half_width };
    Ok(Cut {
        group: spec,
        n,
        domain: Domain::SubgroupBall,
        provenance: Provenance::new(
            "lamplighter",
            [("p", p.to_string()), ("half_width", half_width.map_or("none".into(), |w| w.to_string()))],
        ),
        support,
        norm_cert: NormCertificate::exact(1.0, Method::ExtensionIsometry),
    })
}

/// `A_n = {x_n^k : |k| ≤ n(pq)^{2n}}` in the cyclic subgroup generated by
/// `x_n = (1/(pq)^n, 0)`, whose indicator is a Dirichlet kernel.
pub fn cut_pq(p: u64, q: u64, n: u32, tol: f64) -> Result<Cut, CutError> {
    let spec = GroupSpec::Pq { p, q };
    spec.validate()?;
    let pq = p * q;
    let bound = BigUint::from(n) * BigUint::from(pq).pow(2 * n);
    let norm_cert = dirichlet_l1_big(&bound, tol)?;
    Ok(Cut {
        group: spec,
        n,
        domain: Domain::SubgroupBall,
        provenance: Provenance::new("pq", [("p", p.to_string()), ("q", q.to_string()), ("bound", bound.to_string())]),
        support: Support::PqPowers { pq, n, bound },
        norm_cert,
    })
}

/// Box of radius `⌈n·Cⁿ⌉` in `H = ℤᵈ` with `C ≥ max(‖A‖, ‖A⁻¹‖)` certified.
pub fn cut_semidirect_zd(a: &IntMatrix, n: u32, tol: f64) -> Result<Cut, CutError> {
    let spec = GroupSpec::SemidirectZd { matrix: a.clone() };
    spec.validate()?;
    let c = growth_constant(a)?;
    let radius = c.ceil_n_power(n);
    let d = a.dim();
    let factor = dirichlet_l1_big(&radius, tol)?;
    let norm_cert = tensor_certificate(&vec![factor; d]);
    Ok(Cut {
        group: spec,
        n,
        domain: Domain::SubgroupBall,
        provenance: Provenance::new(
            "semidirect_zd",
            [("c_upper", c.upper.to_string()), ("c_lower", c.lower.to_string()), ("radius", radius.to_string())],
        ),
        support: Support::SemidirectBox { d, radius },
        norm_cert,
    })
}

/// `φ_n = Σ_{y ∈ S_n} δ_y * ψ_{2n}` over a minimal coset section `S_n` of
/// `B_n`. The upper bound is `|S_n|·‖ψ_{2n}‖` by translation invariance; the
/// lower bound is `‖ψ_{2n}‖`, since `φ_n` restricts to `ψ_{2n}` on H.
pub fn extend_by_cogrowth(subcuts: &CutFamily, spec: &GroupSpec, n: u32, opts: &BuildOptions) -> Result<Cut, CutError> {
    let sub =
        subcuts.get(2 * n).ok_or_else(|| CutError::InvalidInput(format!("no subgroup cut at index {}", 2 * n)))?;
    if &sub.group != spec {
        return Err(CutError::InvalidInput(format!("subgroup cut lives on {}, not {spec}", sub.group)));
    }
    let whole_group_is_h = matches!(spec, GroupSpec::FreeAbelian { .. });
    if sub.domain != Domain::SubgroupBall && !whole_group_is_h {
        return Err(CutError::InvalidInput("extension needs a cut on the subgroup".into()));
    }
    let group = Group::new(spec.clone())?;
    let b = ball(&group, n, opts.budget, opts.cache)?;
    let section = coset_section(&group, &b);
    let count = section.len();
    let psi = &sub.norm_cert;
    Ok(Cut {
        group: spec.clone(),
        n,
        domain: Domain::WordBall,
        provenance: Provenance::new(
            "cogrowth_extension",
            [("inner", sub.provenance.construction.clone()), ("section_size", count.to_string())],
        ),
        support: Support::Translates { reps: section.representatives, inner: Box::new(sub.support.clone()) },
        norm_cert: NormCertificate::interval(
            psi.lower,
            count as f64 * psi.upper,
            Method::TranslationInvariance,
            psi.tolerance,
        ),
    })
}

/// Product of the Bass–Serre tree-ball cut (norm at most `2n+1`) and the
/// extended cut `ψ_n` on ℤ[1/pq] ⋊ ℤ, pulled back along the diagonal map.
pub fn cut_bs(p: u64, q: u64, n: u32, opts: &BuildOptions) -> Result<Cut, CutError> {
    let spec = GroupSpec::BaumslagSolitar { p, q };
    spec.validate()?;
    let target = Group::new(spec.clone())?.j2_target()?;
    let (tp, tq) = match *target.spec() {
        GroupSpec::Pq { p, q } => (p, q),
        _ => unreachable!("j2 target is a pq group"),
    };
    let subs = CutFamily::new(vec![cut_pq(tp, tq, 2 * n, opts.tol)?])?;
    let psi = extend_by_cogrowth(&subs, target.spec(), n, opts)?;
    let tree = (2 * n + 1) as f64;
    Ok(Cut {
        group: spec,
        n,
        domain: Domain::WordBall,
        provenance: Provenance::new(
            "baumslag_solitar",
            [("tree_factor", tree.to_string()), ("target", target.spec().to_string())],
        ),
        support: Support::BsProduct { n, target: target.spec().clone(), target_support: Box::new(psi.support) },
        norm_cert: NormCertificate::interval(
            1.0,
            tree * psi.norm_cert.upper,
            Method::ProductRule,
            psi.norm_cert.tolerance,
        ),
    })
}

/// `1_{B_n}`. Abelian groups of rank at most 3 get the Fourier norm; other
/// groups get `[lower, |B_n|]` with the lower end from a flat probe.
pub fn cut_ball(spec: &GroupSpec, n: u32, opts: &BuildOptions) -> Result<Cut, CutError> {
    let group = Group::new(spec.clone())?;
    let b = ball(&group, n, opts.budget, opts.cache)?;
    let norm_cert = match spec {
        _ if n == 0 => NormCertificate::exact(1.0, Method::ClosedForm),
        GroupSpec::FreeAbelian { d: 1 } => dirichlet_l1(n as u64, opts.tol)?,
        GroupSpec::FreeAbelian { d } if *d <= 3 => {
            let f = TrigPoly::from_terms(
                *d,
                b.members().iter().map(|x| match x {
                    Element::FreeAbelian { v } => (v.clone(), Complex64::new(1.0, 0.0)),
                    _ => unreachable!("free abelian ball"),
                }),
            )?;
            // the best grid level is still a valid enclosure when the tolerance is out of reach
            match a_norm_torus(&f, opts.tol) {
                Err(FourierError::Resource { best, .. }) => best,
                other => other?,
            }
        }
        _ => {
            let r = n.min(2);
            let probes = standard_probes(spec, b.truncate(r).members(), 0, 0);
            let set: BTreeSet<&Element> = b.members().iter().collect();
            let phi = |x: &Element| if set.contains(x) { Complex64::new(1.0, 0.0) } else { Complex64::default() };
            let sopts = SpectralOptions { budget: opts.budget, ..Default::default() };
            let lower = multiplier_lower(&group, &phi, &probes, 2 * r, &sopts)?.value.max(1.0);
            NormCertificate::interval(lower, b.len() as f64, Method::L1Bound, 0.0)
        }
    };
    Ok(Cut {
        group: spec.clone(),
        n,
        domain: Domain::WordBall,
        provenance: Provenance::new("ball", [("size", b.len().to_string())]),
        support: Support::Explicit(b.members().iter().cloned().collect()),
        norm_cert,
    })
}

/// Largest `N` with `ln(1 + N) ≤ n`.
pub fn log_ball_radius(n: u32) -> Result<u64, CutError> {
    if n > 43 {
        return Err(CutError::InvalidInput(format!("logarithmic ball of radius {n} exceeds 64-bit range")));
    }
    let fits = |k: u64| (k as f64).ln_1p() <= n as f64;
    let mut r = (n as f64).exp_m1().floor() as u64;
    while !fits(r) {
        r -= 1;
    }
    while fits(r + 1) {
        r += 1;
    }
    Ok(r)
}

/// `1_{[−N, N]}` on ℤ with `N = ⌊eⁿ − 1⌋`, covering the ball of radius `n`
/// for the length `ln(1 + |k|)`.
pub fn cut_log_length_z(n: u32, tol: f64) -> Result<Cut, CutError> {
    let radius = log_ball_radius(n)?;
    Ok(Cut {
        group: GroupSpec::FreeAbelian { d: 1 },
        n,
        domain: Domain::LogBall,
        provenance: Provenance::new("log_length", [("radius", radius.to_string())]),
        support: Support::FreeBox { d: 1, radius: BigUint::from(radius) },
        norm_cert: dirichlet_l1(radius, tol)?,
    })
}

/// The subgroup-level cut of each family. For ℤᵈ the subgroup is the whole
/// group and the cut is the box of radius `n`.
pub fn subgroup_cut(spec: &GroupSpec, n: u32, tol: f64) -> Result<Cut, CutError> {
    match spec {
        GroupSpec::Lamplighter { p } => cut_lamplighter(*p, n),
        GroupSpec::Pq { p, q } => cut_pq(*p, *q, n, tol),
        GroupSpec::SemidirectZd { matrix } => cut_semidirect_zd(matrix, n, tol),
        GroupSpec::FreeAbelian { d } => {
            spec.validate()?;
            let factor = dirichlet_l1(n as u64, tol)?;
            Ok(Cut {
                group: spec.clone(),
                n,
                domain: Domain::WordBall,
                provenance: Provenance::new("free_box", [("radius", n.to_string())]),
                support: Support::FreeBox { d: *d, radius: BigUint::from(n) },
                norm_cert: tensor_certificate(&vec![factor; *d]),
            })
        }
        GroupSpec::BaumslagSolitar { .. } => {
            Err(CutError::InvalidInput("Baumslag–Solitar cuts come from the product construction".into()))
        }
    }
}

/// The cut on the whole group for every family: [`cut_bs`] for
/// Baumslag–Solitar groups, otherwise [`subgroup_cut`], extended with
/// [`extend_by_cogrowth`] when `extend` is set.
pub fn standard_cut(spec: &GroupSpec, n: u32, extend: bool, opts: &BuildOptions) -> Result<Cut, CutError> {
    match spec {
        GroupSpec::BaumslagSolitar { p, q } => cut_bs(*p, *q, n, opts),
        _ if extend => {
            let subs = CutFamily::new(vec![subgroup_cut(spec, 2 * n, opts.tol)?])?;
            extend_by_cogrowth(&subs, spec, n, opts)
        }
        _ => subgroup_cut(spec, n, opts.tol),
    }
}
