mod common;

use common::*;
use proptest::prelude::*;
use sectorlab::numkernel::{c64, identity, loewner_leq, CMatrix, Herm, ToleranceSpec};
use sectorlab::pulm::{choi_check, choi_inequality_check, MapSpec, PULMap};
use sectorlab::sector::{random_hermitian, random_pd, real_part, sample_sector, SamplerOptions};

fn all_maps(n: usize, seed: u64) -> Vec<PULMap> {
    let mut r = rng(seed);
    MapSpec::catalog().iter().map(|s| s.instantiate(n, &mut r).unwrap()).collect()
}

#[test]
fn catalog_maps_send_psd_to_psd() {
    let mut r = rng(20);
    for n in [2, 3, 5] {
        for phi in all_maps(n, n as u64) {
            for _ in 0..100 {
                let g = gaussian(n, &mut r);
                let psd = Herm::from_matrix(&(&g * g.adjoint()));
                let out = phi.apply_herm(&psd).unwrap();
                assert!(out.min_eig().unwrap() >= -1e-12 * psd.as_matrix().norm(), "{phi}");
            }
            assert!(phi.unitality_defect() < 1e-12, "{phi}");
            assert!(choi_check(&phi).unwrap() >= -1e-10, "{phi}");
        }
    }
}

#[test]
fn catalog_maps_are_linear() {
    let mut r = rng(21);
    for phi in all_maps(4, 1) {
        let x = gaussian(4, &mut r);
        let y = gaussian(4, &mut r);
        let (alpha, beta) = (c64(0.3, -1.2), c64(-2.0, 0.5));
        let lhs = phi.apply(&(&x * alpha + &y * beta)).unwrap();
        let rhs = phi.apply(&x).unwrap() * alpha + phi.apply(&y).unwrap() * beta;
        assert!(rel_err(&lhs, &rhs) < 1e-13, "{phi}");
    }
}

#[test]
fn real_part_commutes_with_the_map() {
    let mut r = rng(22);
    for phi in all_maps(3, 2) {
        let a = sample_sector(3, 1.2, 0.5, 2.0, &mut r, &SamplerOptions::default()).unwrap().a;
        let lhs = phi.apply_herm(&real_part(&a)).unwrap();
        let rhs = real_part(&phi.apply(&a).unwrap());
        assert!(rel_err(rhs.as_matrix(), lhs.as_matrix()) < 1e-13, "{phi}");
    }
}

#[test]
fn kadison_and_choi_inequalities() {
    let mut r = rng(23);
    let tol = ToleranceSpec::default();
    for phi in all_maps(4, 3) {
        for _ in 0..20 {
            let h = random_hermitian(4, &mut r);
            let ph = phi.apply_herm(&h).unwrap();
            let sq = Herm::from_matrix(&(ph.as_matrix() * ph.as_matrix()));
            let h2 = phi.apply_herm(&Herm::from_matrix(&(h.as_matrix() * h.as_matrix()))).unwrap();
            assert!(loewner_leq(&sq, &h2, &tol).unwrap().pass, "{phi}");
            let a = random_pd(4, 0.1, 10.0, &mut r);
            assert!(choi_inequality_check(&phi, &a, &tol).unwrap().pass, "{phi}");
        }
    }
}

#[test]
fn explicit_forms() {
    let mut r = rng(24);
    let x = gaussian(4, &mut r);
    let t = PULMap::normalized_trace(4, 2).apply(&x).unwrap();
    assert!(rel_err(&t, &(identity(2) * (x.trace() / c64(4.0, 0.0)))) < 1e-15);

    let p = PULMap::pinching(vec![1, 3]).unwrap().apply(&x).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            let same = (i == 0) == (j == 0);
            assert_eq!(p[(i, j)], if same { x[(i, j)] } else { c64(0.0, 0.0) });
        }
    }

    let u = sectorlab::sector::haar_unitary(4, &mut r);
    let c = PULMap::unitary_conj(u.clone()).unwrap().apply(&x).unwrap();
    assert!(rel_err(&c, &(&u * &x * u.adjoint())) < 1e-14);
}

#[test]
fn invalid_maps_are_rejected() {
    let not_unitary = CMatrix::from_diagonal_element(2, 2, c64(2.0, 0.0));
    assert!(PULMap::unitary_conj(not_unitary).is_err());
    let not_correlation = CMatrix::from_diagonal_element(2, 2, c64(2.0, 0.0));
    assert!(PULMap::schur_hadamard(not_correlation).is_err());
    assert!(PULMap::pinching(vec![]).is_err());
    assert!(PULMap::convex_combo(vec![(0.5, PULMap::identity(2)), (0.6, PULMap::identity(2))]).is_err());
    assert!(PULMap::identity(3).apply(&identity(2)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_catalog_maps_are_positive_and_unital(seed in any::<u64>(), n in 1usize..6, which in 0usize..7) {
        let mut r = rng(seed);
        let spec = &MapSpec::catalog()[which];
        let phi = spec.instantiate(n, &mut r).unwrap();
        prop_assert!(phi.unitality_defect() < 1e-12);
        prop_assert!(choi_check(&phi).unwrap() >= -1e-10);
        prop_assert!(phi.positivity_probe(20, &mut r).unwrap() >= -1e-10);
        let id: MapSpec = spec.to_string().parse().unwrap();
        prop_assert_eq!(id.to_string(), spec.to_string());
    }
}
