//! `∫_{𝕋ᵈ} |p|` for trigonometric polynomials `p`, d ≤ 3.
//!
//! Two evaluators share one refinement loop. When `d = 1` and `p` is real up
//! to a unimodular factor and a modulation, the sign changes of the real part
//! are located on a grid, refined by safeguarded Newton steps, and `∫|r|` is
//! summed exactly from the antiderivative. Otherwise the grid mean of `|p|`,
//! computed with FFTs, is used. Each grid doubling yields an interval
//! `[v ± |Δ|]`, intersected with all earlier intervals and with the a priori
//! bounds `max|c_k| ≤ ∫|p| ≤ min(‖c‖₂, ‖c‖₁)`, so refinement never widens the
//! certificate.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use num_integer::Integer;
use rayon::prelude::*;
use rustfft::FftPlanner;

use super::{FourierError, Method, NormCertificate, TrigPoly};

pub const DEFAULT_GRID_BUDGET: usize = 1 << 22;
const MAX_DIM: usize = 3;
const SYMMETRY_TOL: f64 = 1e-12;

pub fn a_norm_torus(f: &TrigPoly, tol: f64) -> Result<NormCertificate, FourierError> {
    let levels = a_norm_torus_levels(f, tol, DEFAULT_GRID_BUDGET)?;
    Ok(levels.last().cloned().expect("at least one level"))
}

/// Every intermediate certificate, coarsest first; the last one is the answer.
pub fn a_norm_torus_levels(f: &TrigPoly, tol: f64, budget: usize) -> Result<Vec<NormCertificate>, FourierError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(FourierError::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    if f.dim() == 0 || f.dim() > MAX_DIM {
        return Err(FourierError::InvalidInput(format!(
            "torus quadrature supports 1 ≤ d ≤ {MAX_DIM}, got d = {}; use tensor_norm for product structure",
            f.dim()
        )));
    }
    if f.is_zero() {
        return Err(FourierError::InvalidInput("the zero polynomial has no A-norm certificate".into()));
    }
    let lo = f.max_abs();
    let hi = f.l1().min(f.l2()).max(lo);
    let trivial = NormCertificate::interval(lo, hi, Method::L2Bound, tol);
    if f.len() == 1 {
        return Ok(vec![NormCertificate::exact(lo, Method::ClosedForm)]);
    }
    let red = Reduced::new(f);
    let deg = red.spans.iter().map(|&s| s.div_ceil(2)).max().unwrap_or(0) as usize;
    let m0 = 64usize.max(16 * (deg + 1));
    if let Some(real) = RealForm::new(&red) {
        let floor = 64.0 * f64::EPSILON * (red.spans[0] as f64 + 1.0) * lo;
        refine(trivial, m0, 1, tol, budget, floor, Method::ClosedForm, |m| real.integral(m))
    } else {
        let floor = 4.0 * f64::EPSILON * f.l1();
        refine(trivial, m0, red.dim, tol, budget, floor, Method::Quadrature, |m| red.grid_mean_abs(m))
    }
}

#[allow(clippy::too_many_arguments)]
fn refine(
    trivial: NormCertificate,
    m0: usize,
    dim: usize,
    tol: f64,
    budget: usize,
    floor: f64,
    method: Method,
    mut eval: impl FnMut(usize) -> f64,
) -> Result<Vec<NormCertificate>, FourierError> {
    let mut levels = vec![trivial.clone()];
    let (mut lower, mut upper) = (trivial.lower, trivial.upper);
    let mut prev: Option<f64> = None;
    let mut m = m0;
    loop {
        let points = m.checked_pow(dim as u32).filter(|&p| p <= budget);
        if points.is_none() {
            let best = levels.last().cloned().expect("nonempty");
            return Err(FourierError::Resource { tol, budget, best });
        }
        let v = eval(m);
        if let Some(pv) = prev {
            let delta = (v - pv).abs();
            let margin = delta.max(floor);
            let (cl, cu) = ((v - margin).max(trivial.lower), (v + margin).min(trivial.upper));
            if cl.max(lower) <= cu.min(upper) {
                lower = lower.max(cl);
                upper = upper.min(cu);
            } else {
                lower = cl.min(cu);
                upper = cu.max(cl);
            }
            levels.push(NormCertificate::interval(lower, upper, method, tol).with_grid(m as u64));
            if margin <= 0.5 * tol * v {
                return Ok(levels);
            }
        }
        prev = Some(v);
        m *= 2;
    }
}

/// Support shifted to start at 0 on each axis and divided by the gcd of the
/// frequency differences. `t ↦ g·t` preserves Haar measure on 𝕋, so the
/// integral of `|p|` is unchanged.
struct Reduced {
    dim: usize,
    spans: Vec<u64>,
    terms: Vec<(Vec<u64>, Complex64)>,
}

impl Reduced {
    fn new(f: &TrigPoly) -> Self {
        let dim = f.dim();
        let mut mins = vec![i64::MAX; dim];
        for (k, _) in f.terms() {
            for (m, &x) in mins.iter_mut().zip(k) {
                *m = (*m).min(x);
            }
        }
        let mut gcds = vec![0u64; dim];
        for (k, _) in f.terms() {
            for i in 0..dim {
                gcds[i] = gcds[i].gcd(&(k[i] - mins[i]).unsigned_abs());
            }
        }
        let gcds: Vec<u64> = gcds.into_iter().map(|g| g.max(1)).collect();
        let terms: Vec<(Vec<u64>, Complex64)> = f
            .terms()
            .map(|(k, c)| ((0..dim).map(|i| (k[i] - mins[i]).unsigned_abs() / gcds[i]).collect(), c))
            .collect();
        let spans = (0..dim).map(|i| terms.iter().map(|(k, _)| k[i]).max().unwrap_or(0)).collect();
        Self { dim, spans, terms }
    }

    /// Values of `p` on the uniform `m^d` grid, row-major.
    fn grid_values(&self, m: usize) -> Vec<Complex64> {
        let total = m.pow(self.dim as u32);
        let mut buf = vec![Complex64::default(); total];
        for (k, c) in &self.terms {
            let idx = k.iter().fold(0usize, |acc, &x| acc * m + x as usize);
            buf[idx] += c;
        }
        let fft = FftPlanner::new().plan_fft_inverse(m);
        buf.par_chunks_mut(m).for_each(|line| fft.process(line));
        for axis in 0..self.dim.saturating_sub(1) {
            let stride = m.pow((self.dim - 1 - axis) as u32);
            let block = stride * m;
            let mut lines = vec![Complex64::default(); total];
            lines.par_chunks_mut(m).enumerate().for_each(|(l, line)| {
                let base = (l / stride) * block + l % stride;
                for (j, slot) in line.iter_mut().enumerate() {
                    *slot = buf[base + j * stride];
                }
                fft.process(line);
            });
            buf.par_iter_mut().enumerate().for_each(|(idx, slot)| {
                let rem = idx % block;
                let l = (idx / block) * stride + rem % stride;
                *slot = lines[l * m + rem / stride];
            });
        }
        buf
    }

    fn grid_mean_abs(&self, m: usize) -> f64 {
        let values = self.grid_values(m);
        let partial: Vec<f64> = values.par_chunks(m).map(|c| c.iter().map(|z| z.norm()).sum::<f64>()).collect();
        partial.iter().sum::<f64>() / values.len() as f64
    }
}

/// `p(t) = e^{iβ} e^{πiKt} r(t)` with `r(t) = a0 + Σ Re(h_j e^{2πi w_j t})` real,
/// `w_j = (K − 2j)/2`.
struct RealForm {
    span: u64,
    a0: f64,
    /// `h_j` for `j = 0, 1, …` in order of decreasing `w_j`.
    h: Vec<Complex64>,
    unphase: Complex64,
    dense: Reduced,
}

impl RealForm {
    fn new(red: &Reduced) -> Option<Self> {
        if red.dim != 1 {
            return None;
        }
        let span = red.spans[0];
        let mut c = vec![Complex64::default(); span as usize + 1];
        for (k, v) in &red.terms {
            c[k[0] as usize] = *v;
        }
        let scale = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let (first, last) = (c[0], c[span as usize]);
        if (first.norm() - last.norm()).abs() > SYMMETRY_TOL * scale {
            return None;
        }
        let beta = 0.5 * (first * last).arg();
        let unphase = Complex64::from_polar(1.0, -beta);
        let q: Vec<Complex64> = c.iter().map(|z| z * unphase).collect();
        let n = q.len();
        if (0..n).any(|k| (q[n - 1 - k] - q[k].conj()).norm() > SYMMETRY_TOL * scale) {
            return None;
        }
        let half = n / 2;
        let h = q[..half].iter().map(|z| 2.0 * z.conj()).collect();
        let a0 = if span.is_multiple_of(2) { q[half].re } else { 0.0 };
        Some(Self { span, a0, h, unphase, dense: Reduced { dim: 1, spans: vec![span], terms: red.terms.clone() } })
    }

    /// `(r(t), r'(t), R(t))` with `R' = r`, `R(0)` arbitrary but fixed.
    fn eval(&self, t: f64) -> (f64, f64, f64) {
        let k = self.span as i64;
        let (mut r, mut dr, mut big_r) = (self.a0, 0.0, self.a0 * t);
        let step = Complex64::from_polar(1.0, TAU * t);
        let mut z = Complex64::default();
        for (i, j) in (0..self.h.len()).rev().enumerate() {
            let e = k - 2 * j as i64;
            if i % 64 == 0 {
                z = Complex64::from_polar(1.0, PI * t * e as f64);
            }
            let w = e as f64 / 2.0;
            let hz = self.h[j] * z;
            r += hz.re;
            dr -= TAU * w * hz.im;
            big_r += hz.im / (TAU * w);
            z *= step;
        }
        (r, dr, big_r)
    }

    fn root_in(&self, mut a: f64, mut b: f64, mut ra: f64) -> f64 {
        let rb = self.eval(b).0;
        let mut x = a - ra * (b - a) / (rb - ra);
        for _ in 0..100 {
            let (rx, drx, _) = self.eval(x);
            if rx == 0.0 {
                return x;
            }
            if (rx > 0.0) == (ra > 0.0) {
                a = x;
                ra = rx;
            } else {
                b = x;
            }
            let newton = x - rx / drx;
            let next = if newton > a && newton < b && drx != 0.0 { newton } else { 0.5 * (a + b) };
            if (next - x).abs() <= 4.0 * f64::EPSILON || b - a <= 4.0 * f64::EPSILON {
                return next;
            }
            x = next;
        }
        x
    }

    /// `∫₀¹ |r|` with sign changes located on an `m`-point grid.
    fn integral(&self, m: usize) -> f64 {
        let p = self.dense.grid_values(m);
        let k = self.span as u128;
        let two_m = 2 * m as u128;
        let r: Vec<f64> = p
            .iter()
            .enumerate()
            .map(|(j, z)| {
                let angle = -PI * ((k * j as u128) % two_m) as f64 / m as f64;
                (z * self.unphase * Complex64::from_polar(1.0, angle)).re
            })
            .collect();
        let end_value = self.eval(1.0).0;
        let brackets: Vec<(usize, f64, f64)> = (0..m)
            .filter_map(|j| {
                let (a, ra) = (j as f64 / m as f64, r[j]);
                let rb = if j + 1 < m { r[j + 1] } else { end_value };
                if ra == 0.0 && j > 0 {
                    Some((j, a, f64::NAN))
                } else if ra != 0.0 && rb != 0.0 && (ra > 0.0) != (rb > 0.0) {
                    Some((j, a, ra))
                } else {
                    None
                }
            })
            .collect();
        let roots: Vec<f64> = brackets
            .par_iter()
            .map(|&(j, a, ra)| if ra.is_nan() { a } else { self.root_in(a, (j + 1) as f64 / m as f64, ra) })
            .collect();
        let mut knots = Vec::with_capacity(roots.len() + 2);
        knots.push(0.0);
        knots.extend(roots);
        knots.push(1.0);
        let prims: Vec<f64> = knots.par_iter().map(|&t| self.eval(t).2).collect();
        prims.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cert(f: &TrigPoly, tol: f64) -> NormCertificate {
        a_norm_torus(f, tol).unwrap()
    }

    #[test]
    fn delta_is_one() {
        let c = cert(&TrigPoly::indicator([0]), 1e-9);
        assert_eq!((c.lower, c.upper), (1.0, 1.0));
    }

    #[test]
    fn three_point_indicator_closed_form() {
        let expected = 1.0 / 3.0 + 2.0 * 3f64.sqrt() / PI;
        let c = cert(&TrigPoly::dirichlet(1), 1e-10);
        assert!(c.contains(expected), "{c:?}");
        assert!(c.width() <= 1e-10 * c.upper);
        assert_eq!(c.method, Method::ClosedForm);
    }

    #[test]
    fn pair_is_four_over_pi() {
        let c = cert(&TrigPoly::indicator([0, 1]), 1e-10);
        assert!((c.value() - 4.0 / PI).abs() < 1e-10);
        let far = cert(&TrigPoly::indicator([0, 3i64.pow(12)]), 1e-10);
        assert!((far.value() - c.value()).abs() < 1e-12);
    }

    #[test]
    fn complex_coefficients_use_quadrature() {
        // |1 + i e^{2πit} + 0.5 e^{4πit}| has no zeros on the circle
        let f = TrigPoly::from_terms(
            1,
            [
                (vec![0], Complex64::new(1.0, 0.0)),
                (vec![1], Complex64::new(0.0, 1.0)),
                (vec![2], Complex64::new(0.5, 0.0)),
            ],
        )
        .unwrap();
        let c = cert(&f, 1e-9);
        assert_eq!(c.method, Method::Quadrature);
        let n = 200_000;
        let riemann: f64 = (0..n).map(|j| f.eval(&[j as f64 / n as f64]).norm()).sum::<f64>() / n as f64;
        assert!((c.value() - riemann).abs() < 1e-8, "{c:?} vs {riemann}");
    }

    #[test]
    fn two_dimensional_product_factorises() {
        // 1_{-1..1}² is a tensor product, so its norm is the square of the 1D value
        let one = 1.0 / 3.0 + 2.0 * 3f64.sqrt() / PI;
        let f = TrigPoly::from_terms(
            2,
            (-1..=1).flat_map(|a| (-1..=1).map(move |b| (vec![a, b], Complex64::new(1.0, 0.0)))),
        )
        .unwrap();
        let c = cert(&f, 1e-4);
        assert!((c.value() - one * one).abs() < 2e-4 * one * one, "{c:?}");
    }

    #[test]
    fn budget_exhaustion_carries_bounds() {
        let f = TrigPoly::from_terms(
            2,
            [
                (vec![0, 0], Complex64::new(1.0, 0.0)),
                (vec![1, 0], Complex64::new(1.0, 0.0)),
                (vec![0, 1], Complex64::new(1.0, 0.0)),
            ],
        )
        .unwrap();
        match a_norm_torus_levels(&f, 1e-12, 1 << 14) {
            Err(FourierError::Resource { best, .. }) => assert!(best.lower <= best.upper),
            other => panic!("expected a resource error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(a_norm_torus(&TrigPoly::zero(1), 1e-6).is_err());
        assert!(a_norm_torus(&TrigPoly::indicator([0]), 0.0).is_err());
        let f4 = TrigPoly::from_terms(4, [(vec![0, 0, 0, 1], Complex64::new(1.0, 0.0))]).unwrap();
        assert!(a_norm_torus(&f4, 1e-6).is_err());
    }
}
