use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use tamecut::groups::{ball, coset_section, Element, Group, GroupSpec, IntMatrix, DEFAULT_BUDGET};
use tamecut::tamecuts::{
    cut_ball, cut_bs, cut_log_length_z, cut_pq, log_ball_radius, standard_cut, verify_cut, BuildOptions, Cut, Support,
    VerifyOptions,
};

fn shear() -> GroupSpec {
    GroupSpec::SemidirectZd { matrix: IntMatrix::parse("1,1;0,1").unwrap() }
}

fn families() -> Vec<(GroupSpec, u32)> {
    vec![
        (GroupSpec::Lamplighter { p: 2 }, 5),
        (GroupSpec::Lamplighter { p: 3 }, 5),
        (GroupSpec::Pq { p: 2, q: 3 }, 5),
        (shear(), 5),
        (GroupSpec::FreeAbelian { d: 2 }, 5),
        (GroupSpec::BaumslagSolitar { p: 2, q: 3 }, 3),
    ]
}

fn assert_monotone(g: &Group, cuts: &[Cut], probe: u32) {
    let b = ball(g, probe, DEFAULT_BUDGET, None).unwrap();
    for w in cuts.windows(2) {
        assert_eq!(w[0].support.structurally_within(&w[1].support), Some(true), "{}: n = {}", g.spec(), w[0].n);
        for x in b.members() {
            if w[0].contains(g, x).unwrap() {
                assert!(w[1].contains(g, x).unwrap(), "{}: {x} leaves the support at n = {}", g.spec(), w[1].n);
            }
        }
    }
}

#[test]
fn supports_increase_with_n() {
    let opts = BuildOptions::default();
    for (spec, top) in families() {
        let g = Group::new(spec.clone()).unwrap();
        let cuts: Vec<Cut> = (1..=top).map(|n| standard_cut(&spec, n, false, &opts).unwrap()).collect();
        assert_monotone(&g, &cuts, 4);
        if !matches!(spec, GroupSpec::BaumslagSolitar { .. } | GroupSpec::FreeAbelian { .. }) {
            let extended: Vec<Cut> = (1..=3).map(|n| standard_cut(&spec, n, true, &opts).unwrap()).collect();
            assert_monotone(&g, &extended, 4);
        }
    }
    let z = Group::new(GroupSpec::FreeAbelian { d: 1 }).unwrap();
    let logs: Vec<Cut> = (1..=6).map(|n| cut_log_length_z(n, 1e-9).unwrap()).collect();
    assert_monotone(&z, &logs, 60);
}

#[test]
fn standard_cuts_cover_and_bound_consistently() {
    let opts = BuildOptions::default();
    let vopts = VerifyOptions { probes: 2, ..VerifyOptions::default() };
    for (spec, _) in families() {
        for n in 1..=3 {
            for extend in [false, true] {
                if extend && matches!(spec, GroupSpec::BaumslagSolitar { .. }) {
                    continue;
                }
                let cut = standard_cut(&spec, n, extend, &opts).unwrap();
                let report = verify_cut(&cut, &vopts).unwrap();
                assert!(report.covers_ball, "{spec} n = {n}: witness {:?}", report.witness);
                assert!(report.consistency, "{spec} n = {n}: {} > {:?}", report.norm_lower, report.norm_upper);
            }
        }
    }
}

#[test]
fn bs11_product_cut_matches_z2() {
    let bs = Group::new(GroupSpec::BaumslagSolitar { p: 1, q: 1 }).unwrap();
    let target = bs.j2_target().unwrap();
    let z2 = GroupSpec::FreeAbelian { d: 2 };
    let opts = BuildOptions::default();
    for n in 0..=5u32 {
        let cut = cut_bs(1, 1, n, &opts).unwrap();
        let b = ball(&bs, n, DEFAULT_BUDGET, None).unwrap();
        let mut image = BTreeSet::new();
        for x in b.members() {
            assert!(cut.contains(&bs, x).unwrap(), "n = {n}: {x}");
            let Element::Pq(e) = bs.embed_j2(x, &target).unwrap() else { panic!() };
            assert_eq!(e.e, 0);
            image.insert((i64::try_from(&e.m).unwrap(), e.k));
        }
        let ni = n as i64;
        let diamond: BTreeSet<(i64, i64)> =
            (-ni..=ni).flat_map(|a| (-ni..=ni).map(move |b| (a, b))).filter(|(a, b)| a.abs() + b.abs() <= ni).collect();
        assert_eq!(image, diamond, "n = {n}");
        let z2_cut = cut_ball(&z2, n, &opts).unwrap();
        let zg = Group::new(z2.clone()).unwrap();
        for &(a, b) in &diamond {
            assert!(z2_cut.contains(&zg, &Element::FreeAbelian { v: vec![a, b] }).unwrap());
        }
    }
}

#[test]
fn lamplighter_windows_match_bfs() {
    for p in [2u32, 3] {
        let g = Group::new(GroupSpec::Lamplighter { p }).unwrap();
        let big = ball(&g, 7, DEFAULT_BUDGET, None).unwrap();
        for n in 0..=7u32 {
            let h_n: Vec<&Element> = big.iter().filter(|(x, l)| *l <= n && g.in_subgroup(x)).map(|(x, _)| x).collect();
            // Single lamps generate the window; find which positions the ball reaches.
            let singles: BTreeSet<i64> = h_n
                .iter()
                .filter_map(|x| match x {
                    Element::Lamplighter(c) if c.lamps.len() == 1 => c.lamps.keys().next().copied(),
                    _ => None,
                })
                .collect();
            let cut = standard_cut(&GroupSpec::Lamplighter { p }, n, false, &BuildOptions::default()).unwrap();
            let Support::LamplighterWindow { half_width, .. } = cut.support else { panic!("{:?}", cut.support) };
            let window: BTreeSet<i64> = match half_width {
                Some(w) => (-(w as i64)..=w as i64).collect(),
                None => BTreeSet::new(),
            };
            assert_eq!(singles, window, "p = {p}, n = {n}");
            for x in &h_n {
                assert!(cut.contains(&g, x).unwrap());
                if let Element::Lamplighter(c) = x {
                    assert!(c.lamps.keys().all(|j| window.contains(j)));
                }
            }
            for j in &singles {
                let x = Element::Lamplighter(tamecut::groups::LampConfig {
                    lamps: [(*j, 1)].into_iter().collect(),
                    shift: 0,
                });
                assert_eq!(big.length(&x), Some(2 * j.unsigned_abs() as u32 + 1));
            }
            let expect = BigUint::from(p).pow(window.len() as u32);
            assert_eq!(cut.support.cardinality(), Some(expect));
            assert_eq!((cut.norm_cert.lower, cut.norm_cert.upper), (1.0, 1.0));
        }
    }
}

#[test]
fn pq_cut_covers_by_exact_arithmetic() {
    let (p, q) = (2u64, 3u64);
    let pq = p * q;
    let g = Group::new(GroupSpec::Pq { p, q }).unwrap();
    let big = ball(&g, 5, DEFAULT_BUDGET, None).unwrap();
    for n in 1..=5u32 {
        let cut = cut_pq(p, q, n, 1e-9).unwrap();
        let scale = BigInt::from(pq).pow(n);
        let bound = BigInt::from(n) * BigInt::from(pq).pow(2 * n);
        for (x, l) in big.iter().filter(|(x, l)| *l <= n && g.in_subgroup(x)) {
            let Element::Pq(e) = x else { panic!() };
            let (num, den) = e.entry(pq);
            assert!((&scale % &den).is_zero(), "{x}: denominator {den} does not divide {scale}");
            let scaled = &num * (&scale / &den);
            assert!(scaled.abs() <= bound, "{x} at length {l} is outside the cut bound");
            assert!(cut.contains(&g, x).unwrap());
        }
        let outside = tamecut::groups::PqElement::normalized(&bound + 1, n, 0, pq);
        assert!(!cut.contains(&g, &Element::Pq(outside)).unwrap());
    }
}

#[test]
fn extended_support_sizes_multiply() {
    let opts = BuildOptions::default();
    for spec in [GroupSpec::Lamplighter { p: 2 }, GroupSpec::Pq { p: 2, q: 3 }, shear()] {
        let g = Group::new(spec.clone()).unwrap();
        for n in 1..=3 {
            let inner = standard_cut(&spec, 2 * n, false, &opts).unwrap();
            let cut = standard_cut(&spec, n, true, &opts).unwrap();
            let reps = coset_section(&g, &ball(&g, n, DEFAULT_BUDGET, None).unwrap()).len();
            let want = inner.support.cardinality().unwrap() * BigUint::from(reps);
            assert_eq!(cut.support.cardinality(), Some(want), "{spec} n = {n}");
            assert!(cut.norm_cert.lower >= inner.norm_cert.lower - 1e-12);
            assert!(cut.norm_cert.upper <= reps as f64 * inner.norm_cert.upper * (1.0 + 1e-12));
        }
    }
}

#[test]
fn log_balls_use_the_largest_radius() {
    for n in 0..=12u32 {
        let r = log_ball_radius(n).unwrap();
        assert!((1.0 + r as f64).ln() <= n as f64 + 1e-12);
        assert!((2.0 + r as f64).ln() > n as f64);
    }
}
