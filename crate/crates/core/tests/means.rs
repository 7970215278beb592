mod common;

use common::*;
use proptest::prelude::*;
use sectorlab::means::{
    adjoint_mean, mean_eval, mean_eval_pd, sandwich_check, scalar_order, MeanOrder, MeanSpec, OpMonotone,
};
use sectorlab::numkernel::{c64, inverse, loewner_leq, CMatrix, Herm, ToleranceSpec};
use sectorlab::sector::{random_pd, real_part, sample_sector, SamplerOptions};

fn catalog() -> Vec<MeanSpec> {
    let mut out = Vec::new();
    for v in [0.0, 0.25, 0.5, 0.9, 1.0] {
        out.push(MeanSpec::arithmetic(v).unwrap());
        out.push(MeanSpec::geometric(v).unwrap());
        out.push(MeanSpec::harmonic(v).unwrap());
        out.push(OpMonotone::heinz(v).unwrap().into());
        for r in [-1.0, -0.5, 0.5, 1.0] {
            out.push(MeanSpec::power(r, v).unwrap());
        }
    }
    out
}

#[test]
fn sandwich_holds_on_random_samples() {
    let mut r = rng(10);
    let tol = ToleranceSpec::default();
    let opts = SamplerOptions::default();
    let cat = catalog();
    for k in 0..2000 {
        let sigma = &cat[k % cat.len()];
        let n = 1 + k % 4;
        let theta = [0.0, 0.5, 1.0, 1.4][k % 4];
        let a = sample_sector(n, theta, 0.2, 5.0, &mut r, &opts).unwrap();
        let b = sample_sector(n, theta, 0.2, 5.0, &mut r, &opts).unwrap();
        let (lower, upper) = sandwich_check(sigma, &a, &b, &tol).unwrap();
        assert!(lower.pass && upper.pass, "{sigma} n={n} theta={theta}: {lower:?} {upper:?}");
    }
}

#[test]
fn geometric_mean_of_2x2_matches_closed_form() {
    // For positive definite 2x2: A # B = sqrt(ab) (A/a + B/b) / sqrt(det(A/a + B/b)), a^2 = det A, b^2 = det B.
    let mut r = rng(11);
    let det = |x: &CMatrix| (x[(0, 0)] * x[(1, 1)] - x[(0, 1)] * x[(1, 0)]).re;
    for _ in 0..50 {
        let a = random_pd(2, 0.1, 10.0, &mut r).into_matrix();
        let b = random_pd(2, 0.1, 10.0, &mut r).into_matrix();
        let (sa, sb) = (det(&a).sqrt(), det(&b).sqrt());
        let s = &a / c64(sa, 0.0) + &b / c64(sb, 0.0);
        let expected = &s * c64((sa * sb).sqrt() / det(&s).sqrt(), 0.0);
        let got = mean_eval(&MeanSpec::geometric(0.5).unwrap(), &a, &b).unwrap();
        assert!(rel_err(&got, &expected) < 1e-11);
    }
}

#[test]
fn geometric_mean_solves_the_riccati_equation() {
    let mut r = rng(12);
    for theta in [0.0, 0.7, 1.3] {
        for n in [2, 4] {
            let a = sample_sector(n, theta, 0.5, 4.0, &mut r, &SamplerOptions::default()).unwrap().a;
            let b = sample_sector(n, theta, 0.5, 4.0, &mut r, &SamplerOptions::default()).unwrap().a;
            let x = mean_eval(&MeanSpec::geometric(0.5).unwrap(), &a, &b).unwrap();
            assert!(rel_err(&(&x * inverse(&a).unwrap() * &x), &b) < 1e-10);
        }
    }
}

#[test]
fn commuting_arguments_reduce_to_scalar_means() {
    let cat = catalog();
    let a = [0.3, 2.0, 7.0];
    let b = [5.0, 2.0, 0.1];
    let da = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(3, a.iter().map(|&x| c64(x, 0.0))));
    let db = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(3, b.iter().map(|&x| c64(x, 0.0))));
    for s in &cat {
        let m = mean_eval(s, &da, &db).unwrap();
        for i in 0..3 {
            let expected = s.f.scalar_mean(a[i], b[i]);
            assert!((m[(i, i)] - c64(expected, 0.0)).norm() < 1e-12 * expected.max(1.0), "{s}");
        }
    }
}

#[test]
fn transposed_weight_swaps_arguments() {
    let mut r = rng(13);
    for v in [0.2, 0.5, 0.8] {
        let a = sample_sector(3, 1.0, 0.5, 4.0, &mut r, &SamplerOptions::default()).unwrap().a;
        let b = sample_sector(3, 1.0, 0.5, 4.0, &mut r, &SamplerOptions::default()).unwrap().a;
        for (x, y) in [
            (MeanSpec::geometric(v).unwrap(), MeanSpec::geometric(1.0 - v).unwrap()),
            (MeanSpec::harmonic(v).unwrap(), MeanSpec::harmonic(1.0 - v).unwrap()),
        ] {
            let ab = mean_eval(&x, &a, &b).unwrap();
            let ba = mean_eval(&y, &b, &a).unwrap();
            assert!(rel_err(&ab, &ba) < 1e-10, "{x}");
        }
    }
}

#[test]
fn weighted_chain_harmonic_geometric_arithmetic() {
    let mut r = rng(14);
    let tol = ToleranceSpec::default();
    for v in [0.1, 0.5, 0.7] {
        let a = random_pd(4, 0.1, 10.0, &mut r);
        let b = random_pd(4, 0.1, 10.0, &mut r);
        let h = mean_eval_pd(&OpMonotone::harmonic(v).unwrap(), &a, &b).unwrap();
        let g = mean_eval_pd(&OpMonotone::geometric(v).unwrap(), &a, &b).unwrap();
        let n = mean_eval_pd(&OpMonotone::arithmetic(v).unwrap(), &a, &b).unwrap();
        assert!(loewner_leq(&h, &g, &tol).unwrap().pass);
        assert!(loewner_leq(&g, &n, &tol).unwrap().pass);
    }
    let s = |f: OpMonotone| MeanSpec::from(f);
    assert_eq!(scalar_order(&s(OpMonotone::harmonic(0.3).unwrap()), &s(OpMonotone::geometric(0.3).unwrap())), MeanOrder::Leq);
    assert_eq!(scalar_order(&s(OpMonotone::arithmetic(0.3).unwrap()), &s(OpMonotone::geometric(0.3).unwrap())), MeanOrder::Geq);
    assert_eq!(
        scalar_order(&s(OpMonotone::geometric(0.2).unwrap()), &s(OpMonotone::geometric(0.8).unwrap())),
        MeanOrder::Incomparable
    );
}

#[test]
fn adjoint_of_the_catalog() {
    let cat = catalog();
    for s in &cat {
        let adj = adjoint_mean(s);
        for t in [0.01, 0.5, 3.0, 100.0] {
            assert!((adj.f.eval_real(t) - 1.0 / s.f.eval_real(1.0 / t)).abs() < 1e-12 * adj.f.eval_real(t).max(1.0));
        }
        let back = adjoint_mean(&adj);
        assert!((back.f.eval_real(2.5) - s.f.eval_real(2.5)).abs() < 1e-12);
    }
    assert_eq!(adjoint_mean(&MeanSpec::arithmetic(0.3).unwrap()).f, OpMonotone::harmonic(0.3).unwrap());
}

#[test]
fn accretive_and_positive_definite_paths_agree_on_hermitian_input() {
    let mut r = rng(15);
    for s in catalog() {
        let a = random_pd(3, 0.2, 6.0, &mut r);
        let b = random_pd(3, 0.2, 6.0, &mut r);
        let pd = mean_eval_pd(&s.f, &a, &b).unwrap();
        let general = mean_eval(&s, a.as_matrix(), b.as_matrix()).unwrap();
        assert!(rel_err(&general, pd.as_matrix()) < 1e-10, "{s}");
    }
}

#[test]
fn malformed_mean_ids_are_rejected() {
    assert!("geometric:v=2".parse::<MeanSpec>().is_err());
    assert!("nope".parse::<MeanSpec>().is_err());
    let s: MeanSpec = "power:r=0.5,v=0.3".parse().unwrap();
    assert_eq!(s.to_string(), "power:r=0.5,v=0.3");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn monotone_in_the_first_argument(seed in any::<u64>(), n in 1usize..5, idx in 0usize..40) {
        let s = &catalog()[idx];
        let mut r = rng(seed);
        let a = random_pd(n, 0.2, 5.0, &mut r);
        let g = gaussian(n, &mut r);
        let bigger = a.add(&Herm::from_matrix(&(g.adjoint() * &g)));
        let b = random_pd(n, 0.2, 5.0, &mut r);
        let lo = mean_eval_pd(&s.f, &a, &b).unwrap();
        let hi = mean_eval_pd(&s.f, &bigger, &b).unwrap();
        prop_assert!(loewner_leq(&lo, &hi, &ToleranceSpec::default()).unwrap().pass);
    }

    #[test]
    fn congruence_invariance(seed in any::<u64>(), n in 1usize..5, theta in 0.0f64..1.3, idx in 0usize..40) {
        let s = &catalog()[idx];
        let mut r = rng(seed);
        let a = sample_sector(n, theta, 0.5, 3.0, &mut r, &SamplerOptions::default()).unwrap().a;
        let b = sample_sector(n, theta, 0.5, 3.0, &mut r, &SamplerOptions::default()).unwrap().a;
        let x = gaussian(n, &mut r) + CMatrix::identity(n, n) * c64(2.0, 0.0);
        let xs = x.adjoint();
        let lhs = &xs * mean_eval(s, &a, &b).unwrap() * &x;
        let rhs = mean_eval(s, &(&xs * &a * &x), &(&xs * &b * &x)).unwrap();
        prop_assert!(rel_err(&lhs, &rhs) < 1e-8);
    }

    #[test]
    fn mean_of_accretive_pair_is_accretive_with_bounded_angle(seed in any::<u64>(), n in 1usize..5, theta in 0.0f64..1.4, idx in 0usize..40) {
        let s = &catalog()[idx];
        let mut r = rng(seed);
        let a = sample_sector(n, theta, 0.5, 3.0, &mut r, &SamplerOptions::default()).unwrap().a;
        let b = sample_sector(n, theta, 0.5, 3.0, &mut r, &SamplerOptions::default()).unwrap().a;
        let m = mean_eval(s, &a, &b).unwrap();
        prop_assert!(real_part(&m).min_eig().unwrap() > 0.0);
        prop_assert!(sectorlab::sector::sector_angle(&m).unwrap() <= theta + 1e-8);
    }
}
