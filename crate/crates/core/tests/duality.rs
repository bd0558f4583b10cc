mod common;

use fiberot::disint::{conjugate, lq_norm, tighten};
use fiberot::{c_transform, certify, cp_cost, dual_value, ot_1d, ot_lp, scrmk, DualCertificate, Error, Point};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lp_duals_are_admissible_and_tight(seed in any::<u64>(), p in prop::sample::select(vec![1.0, 2.0, 3.0])) {
        let mut rng = common::rng(seed);
        for space in [common::line(), common::plane(), common::cycle()] {
            let mu = common::measure(&mut rng, &space, 6);
            let nu = common::measure(&mut rng, &space, 6);
            let (cost, plan, duals) = ot_lp(&mu, &nu, &space, p).unwrap();
            let (excess, _, _) = duals.max_violation(&mu, &nu, &space, p);
            prop_assert!(excess <= 1e-12 * (1.0 + cost), "excess {excess}");
            prop_assert!((duals.value(&mu, &nu) - cost).abs() <= 1e-9);
            for (s, w) in plan.row_sums().iter().zip(mu.weights()) {
                prop_assert!((s - w).abs() <= 1e-12);
            }
            for (s, w) in plan.col_sums().iter().zip(nu.weights()) {
                prop_assert!((s - w).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn lp_agrees_with_monotone_coupling(seed in any::<u64>(), p in prop::sample::select(vec![1.0, 1.5, 2.0])) {
        let mut rng = common::rng(seed);
        let space = common::line();
        let mu = common::measure(&mut rng, &space, 8);
        let nu = common::measure(&mut rng, &space, 8);
        let (lp, _, _) = ot_lp(&mu, &nu, &space, p).unwrap();
        let (exact, _) = ot_1d(&mu, &nu, p).unwrap();
        prop_assert!((lp - exact).abs() <= 1e-10 * (1.0 + exact));
    }

    #[test]
    fn transform_of_optimal_psi_keeps_the_value(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let space = common::plane();
        let mu = common::measure(&mut rng, &space, 5);
        let nu = common::measure(&mut rng, &space, 5);
        let (cost, _, duals) = ot_lp(&mu, &nu, &space, 2.0).unwrap();
        let phi = c_transform(&duals.psi, nu.points(), mu.points(), &space, 2.0, 1.0);
        let pair = fiberot::FiberDualPair { phi, psi: duals.psi.clone() };
        prop_assert!(pair.max_violation(&mu, &nu, &space, 2.0).0 <= 1e-12);
        prop_assert!((pair.value(&mu, &nu) - cost).abs() <= 1e-9);
    }

    #[test]
    fn triple_transform_equals_single(seed in any::<u64>(), lambda in 0.1f64..1.0) {
        let mut rng = common::rng(seed);
        let space = common::plane();
        let xs: Vec<Point> = (0..5).map(|_| common::point(&mut rng, &space)).collect();
        let ys: Vec<Point> = (0..4).map(|_| common::point(&mut rng, &space)).collect();
        let phi: Vec<f64> = (0..5).map(|_| rng.random_range(-2.0..2.0)).collect();
        let once = c_transform(&phi, &xs, &ys, &space, 2.0, lambda);
        let twice = c_transform(&once, &ys, &xs, &space, 2.0, lambda);
        let thrice = c_transform(&twice, &xs, &ys, &space, 2.0, lambda);
        for (a, b) in once.iter().zip(&thrice) {
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
        }
        for (a, b) in phi.iter().zip(&twice) {
            prop_assert!(*b <= a + 1e-12, "double transform must not exceed φ");
        }
    }
}

#[test]
fn strong_duality_on_seeded_instances() {
    for seed in 0..50u64 {
        let mut rng = common::rng(seed);
        let space = if seed % 2 == 0 { common::line() } else { common::plane() };
        let [m, n, _] = common::triple(&mut rng, &space, 5, 5);
        let p = [1.0, 2.0][seed as usize % 2];
        let q = p * [1.0, 1.5, 2.0, 3.0][(seed / 2) as usize % 4];
        let (cert, report) = certify(&m, &n, p, q).unwrap();
        let primal = scrmk(&m, &n, p, q).unwrap().value.powf(p);
        assert!((report.dual - primal).abs() <= 1e-8, "seed {seed}: {} vs {primal}", report.dual);
        assert!((dual_value(&m, &n, &cert, p, q).unwrap() - report.dual).abs() <= 1e-15);
    }
}

#[test]
fn weak_duality_on_random_certificates() {
    let mut checked = 0;
    for seed in 0..500u64 {
        let mut rng = common::rng(1000 + seed);
        let space = [common::line(), common::plane(), common::cycle()][seed as usize % 3].clone();
        let [m, n, _] = common::triple(&mut rng, &space, 4, 4);
        let p = [1.0, 2.0][seed as usize % 2];
        let q = p * [1.0, 2.0, 3.0][(seed / 2) as usize % 3];
        let psi: Vec<Vec<f64>> = n
            .fibers()
            .iter()
            .map(|f| (0..f.len()).map(|_| rng.random_range(-3.0..3.0)).collect())
            .collect();
        let phi = tighten(&m, &n, &psi, p);
        let sigma = m.sigma();
        let raw: Vec<f64> = (0..sigma.len()).map(|_| rng.random_range(0.0..2.0)).collect();
        let norm = lq_norm(&raw, sigma, conjugate(q / p));
        let zeta = raw.iter().map(|z| z / norm.max(1e-300)).collect();
        let cert = DualCertificate { zeta, phi, psi };
        let dual = dual_value(&m, &n, &cert, p, q).unwrap();
        let primal = scrmk(&m, &n, p, q).unwrap().value.powf(p);
        assert!(dual <= primal + 1e-9, "seed {seed}: dual {dual} > primal {primal}");
        checked += 1;
    }
    assert_eq!(checked, 500);
}

#[test]
fn inadmissible_and_oversized_certificates_are_rejected() {
    let mut rng = common::rng(3);
    let [m, n, _] = common::triple(&mut rng, &common::line(), 3, 3);
    let (mut cert, _) = certify(&m, &n, 2.0, 4.0).unwrap();
    let mut big = cert.clone();
    big.zeta.iter_mut().for_each(|z| *z *= 2.0);
    assert!(matches!(dual_value(&m, &n, &big, 2.0, 4.0), Err(Error::InvalidZeta(_))));
    cert.phi[0][0] -= 1.0;
    assert!(matches!(
        dual_value(&m, &n, &cert, 2.0, 4.0),
        Err(Error::InadmissibleCertificate { fiber: 0, row: 0, .. })
    ));
}

#[test]
fn constrained_coupling_equals_disintegrated_cost() {
    for seed in 0..50u64 {
        let mut rng = common::rng(2000 + seed);
        let space = [common::line(), common::plane(), common::cycle()][seed as usize % 3].clone();
        let [m, n, _] = common::triple(&mut rng, &space, 3, 5);
        for p in [1.0, 2.0] {
            let (cp, plan) = cp_cost(&m, &n, p).unwrap();
            let target = scrmk(&m, &n, p, p).unwrap().value.powf(p);
            assert!((cp - target).abs() <= 1e-8, "seed {seed}, p {p}: {cp} vs {target}");
            for &(r, c, _) in &plan.plan.entries {
                assert_eq!(plan.row_fiber[r], plan.col_fiber[c]);
            }
        }
    }
}
