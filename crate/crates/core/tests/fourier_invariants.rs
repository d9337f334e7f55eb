use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use tamecut::fourier::{
    a_norm_torus, a_norm_torus_levels, dirichlet_l1, finite_cyclic_a_norm, tensor_norm, TrigPoly, DEFAULT_GRID_BUDGET,
};

const TOL: f64 = 1e-7;

fn poly_1d(max_deg: i64) -> impl Strategy<Value = TrigPoly> {
    prop::collection::vec((-max_deg..=max_deg, -1.0f64..1.0, -1.0f64..1.0), 2..8).prop_filter_map("nonzero", |terms| {
        let f = TrigPoly::from_terms(1, terms.into_iter().map(|(k, re, im)| (vec![k], Complex64::new(re, im)))).ok()?;
        (!f.is_zero()).then_some(f)
    })
}

/// Midpoint rule for `∫|f|` with many more nodes than the degree.
fn dense_mean_abs(f: &TrigPoly, nodes: usize) -> f64 {
    (0..nodes).map(|j| f.eval(&[(j as f64 + 0.5) / nodes as f64]).norm()).sum::<f64>() / nodes as f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn certificate_is_sandwiched_and_matches_dense_quadrature(f in poly_1d(8)) {
        let cert = a_norm_torus(&f, TOL).unwrap();
        prop_assert!(cert.lower <= cert.upper);
        prop_assert!(cert.lower >= f.max_abs() - 1e-12);
        prop_assert!(cert.upper <= f.l1().min(f.l2()) + 1e-12);
        let oracle = dense_mean_abs(&f, 1 << 15);
        prop_assert!((cert.value() - oracle).abs() <= 1e-5 * oracle, "{} vs {}", cert.value(), oracle);
    }

    #[test]
    fn grids_refine_within_trivial_bounds(f in poly_1d(8)) {
        let levels = a_norm_torus_levels(&f, TOL, DEFAULT_GRID_BUDGET).unwrap();
        let grids: Vec<u64> = levels.iter().filter_map(|c| c.grid).collect();
        prop_assert!(grids.windows(2).all(|w| w[0] < w[1]));
        let (lo, hi) = (levels[0].lower, levels[0].upper);
        for c in &levels {
            prop_assert!(c.lower >= lo - 1e-12 && c.upper <= hi + 1e-12);
        }
        let last = levels.last().unwrap();
        prop_assert!(last.width() <= levels[0].width() + 1e-12);
    }

    #[test]
    fn translation_leaves_the_norm_unchanged(f in poly_1d(6), y in -50i64..50) {
        let a = a_norm_torus(&f, TOL).unwrap();
        let b = a_norm_torus(&f.translate(&[y]), TOL).unwrap();
        prop_assert!((a.value() - b.value()).abs() <= 2.0 * TOL * a.value() + 1e-12);
    }

    #[test]
    fn cyclic_sums_approach_the_torus(f in poly_1d(6)) {
        let m = 4096usize;
        let values: Vec<Complex64> = (0..m).map(|j| f.eval(&[j as f64 / m as f64])).collect();
        // Sampling f on ℤ_m and transforming back recovers the coefficients; the cyclic norm is
        // then the mean of |f| over the m-th roots of unity.
        let mut on_group = vec![Complex64::default(); m];
        for (k, c) in f.terms() {
            on_group[k[0].rem_euclid(m as i64) as usize] += c;
        }
        let cyclic = finite_cyclic_a_norm(&on_group).unwrap();
        let riemann = values.iter().map(|z| z.norm()).sum::<f64>() / m as f64;
        prop_assert!((cyclic - riemann).abs() <= 1e-9 * riemann.max(1.0));
        let torus = a_norm_torus(&f, TOL).unwrap();
        prop_assert!((cyclic - torus.value()).abs() <= 1e-4 * torus.value());
    }

    #[test]
    fn tensor_products_factorise(f in poly_1d(4), g in poly_1d(4)) {
        let mut prod = TrigPoly::zero(2);
        for (k, c) in f.terms() {
            for (l, d) in g.terms() {
                prod.add(vec![k[0], l[0]], c * d);
            }
        }
        let joint = a_norm_torus(&prod, 1e-5).unwrap();
        let split = tensor_norm(&[f, g], TOL).unwrap();
        prop_assert!((joint.value() - split.value()).abs() <= 1e-4 * split.value());
    }
}

#[test]
fn dirichlet_norms_strictly_increase() {
    let certs: Vec<_> = (0..=257u64).map(|n| dirichlet_l1(n, 1e-12).unwrap()).collect();
    for (n, w) in certs.windows(2).enumerate() {
        assert!(w[0].upper < w[1].lower, "n = {n}: {:?} vs {:?}", w[0], w[1]);
    }
}

#[test]
fn dirichlet_matches_direct_midpoint_integration() {
    for n in [1u64, 2, 5, 17, 40] {
        let d = TrigPoly::dirichlet(n as i64);
        let oracle = dense_mean_abs(&d, 1 << 17);
        let cert = dirichlet_l1(n, 1e-12).unwrap();
        assert!((cert.value() - oracle).abs() < 1e-7, "n = {n}: {} vs {oracle}", cert.value());
    }
    let exact_one = 1.0 / 3.0 + 2.0 * 3f64.sqrt() / PI;
    assert!((dirichlet_l1(1, 1e-12).unwrap().value() - exact_one).abs() < 1e-12);
}
