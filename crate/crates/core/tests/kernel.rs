mod common;

use common::*;
use nalgebra::DMatrix;
use proptest::prelude::*;
use sectorlab::numkernel::{
    c64, det_abs, diag_real, eigenvalues, expm, from_real_rows, herm_eig, identity, inverse, log_det_abs, logm,
    loewner_leq, powm, singular_values, sqrtm, ui_norm, CMatrix, Herm, ToleranceSpec, UiNorm, C64,
};
use sectorlab::sector::{haar_unitary, random_hermitian, sample_sector, SamplerOptions};

/// Coefficients `c_0..c_n` of `det(zI - A)` by the Faddeev–LeVerrier recursion.
fn char_poly(a: &CMatrix) -> Vec<C64> {
    let n = a.nrows();
    let mut c = vec![c64(0.0, 0.0); n + 1];
    c[n] = c64(1.0, 0.0);
    let mut m = CMatrix::zeros(n, n);
    for k in 1..=n {
        m = a * &m + identity(n) * c[n - k + 1];
        c[n - k] = -(a * &m).trace() / c64(k as f64, 0.0);
    }
    c
}

#[test]
fn eigenvalues_are_roots_of_the_characteristic_polynomial() {
    let mut r = rng(1);
    for _ in 0..20 {
        let a = gaussian(5, &mut r);
        let c = char_poly(&a);
        let lambdas = eigenvalues(&a).unwrap();
        assert_eq!(lambdas.len(), 5);
        for z in lambdas {
            let value = c.iter().rev().fold(c64(0.0, 0.0), |acc, ck| acc * z + ck);
            let scale: f64 = c.iter().enumerate().map(|(k, ck)| ck.norm() * z.norm().powi(k as i32)).sum();
            assert!(value.norm() / scale < 1e-12, "{}", value.norm() / scale);
        }
    }
}

#[test]
fn eigenvalues_appear_in_the_real_embedding() {
    let mut r = rng(2);
    for _ in 0..20 {
        let a = gaussian(4, &mut r);
        let n = a.nrows();
        let emb = DMatrix::<f64>::from_fn(2 * n, 2 * n, |i, j| {
            let z = a[(i % n, j % n)];
            match (i < n, j < n) {
                (true, true) | (false, false) => z.re,
                (true, false) => -z.im,
                (false, true) => z.im,
            }
        });
        let real_eigs = emb.complex_eigenvalues();
        for z in eigenvalues(&a).unwrap() {
            let d = real_eigs.iter().map(|w| (w - z).norm()).fold(f64::INFINITY, f64::min);
            assert!(d < 1e-9 * a.norm(), "{z} missing, distance {d}");
        }
    }
}

#[test]
fn determinant_matches_cofactor_expansion() {
    let mut r = rng(3);
    for _ in 0..20 {
        let a = gaussian(4, &mut r);
        let d = cofactor_det(&a).norm();
        assert!((det_abs(&a).unwrap() - d).abs() < 1e-11 * d);
        assert!((log_det_abs(&a).unwrap() - d.ln()).abs() < 1e-11);
    }
}

#[test]
fn inverse_times_matrix_is_identity() {
    let mut r = rng(4);
    for n in 1..8 {
        let a = gaussian(n, &mut r);
        assert!(rel_err(&(&a * inverse(&a).unwrap()), &identity(n)) < 1e-10);
    }
}

#[test]
fn sqrt_of_2x2_matches_closed_form() {
    // sqrt(A) = (A + s I) / t with s = sqrt(det A), t = sqrt(tr A + 2 s), principal branches.
    let mut r = rng(5);
    for _ in 0..50 {
        let a = sample_sector(2, 1.3, 0.1, 10.0, &mut r, &SamplerOptions::default()).unwrap().a;
        let s = (a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)]).sqrt();
        let t = (a.trace() + s * 2.0).sqrt();
        let expected = (&a + identity(2) * s) / t;
        assert!(rel_err(&sqrtm(&a).unwrap(), &expected) < 1e-12);
    }
}

#[test]
fn functions_of_diagonalizable_matrices() {
    let mut r = rng(6);
    for n in [2, 3, 5] {
        let v = gaussian(n, &mut r);
        let v_inv = inverse(&v).unwrap();
        let eigs: Vec<C64> = (0..n).map(|k| c64(0.5 + k as f64, 0.7 * (k as f64 - 1.0))).collect();
        let with = |g: &dyn Fn(C64) -> C64| {
            let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(n, eigs.iter().map(|z| g(*z))));
            &v * d * &v_inv
        };
        let a = with(&|z| z);
        let cond = v.norm() * v_inv.norm();
        let tol = 1e-12 * cond * cond;
        assert!(rel_err(&sqrtm(&a).unwrap(), &with(&|z| z.sqrt())) < tol);
        assert!(rel_err(&logm(&a).unwrap(), &with(&|z| z.ln())) < tol);
        assert!(rel_err(&expm(&a).unwrap(), &with(&|z| z.exp())) < tol);
        assert!(rel_err(&powm(&a, 0.3).unwrap(), &with(&|z| z.powf(0.3))) < tol);
    }
}

#[test]
fn exp_matches_taylor_series() {
    let mut r = rng(7);
    for n in [1, 2, 4, 7] {
        for scale in [0.1, 1.0, 4.0] {
            let x = gaussian(n, &mut r) * c64(scale / (n as f64).sqrt(), 0.0);
            assert!(rel_err(&expm(&x).unwrap(), &taylor_exp(&x)) < 1e-11);
        }
    }
}

#[test]
fn functions_of_a_jordan_block() {
    let lambda = c64(2.0, 0.5);
    let j = CMatrix::from_row_slice(2, 2, &[lambda, c64(1.0, 0.0), c64(0.0, 0.0), lambda]);
    let e = expm(&j).unwrap();
    assert!((e[(0, 0)] - lambda.exp()).norm() < 1e-13 * lambda.exp().norm());
    assert!((e[(0, 1)] - lambda.exp()).norm() < 1e-13 * lambda.exp().norm());
    let s = sqrtm(&j).unwrap();
    assert!((s[(0, 1)] - c64(0.5, 0.0) / lambda.sqrt()).norm() < 1e-13);
    let l = logm(&j).unwrap();
    assert!((l[(0, 1)] - c64(1.0, 0.0) / lambda).norm() < 1e-13);

    let near = from_real_rows(2, &[1.0, 1.0, 0.0, 1.0 + 1e-10]);
    let e = expm(&near).unwrap();
    assert!((e[(0, 1)].re - std::f64::consts::E).abs() < 1e-8);
}

#[test]
fn log_rejects_the_branch_cut() {
    assert!(logm(&diag_real(&[1.0, -1.0])).is_err());
    assert!(sqrtm(&diag_real(&[0.0, 1.0])).is_err());
}

#[test]
fn norms_from_the_gram_matrix() {
    let mut r = rng(8);
    for n in [1, 3, 6] {
        let a = gaussian(n, &mut r);
        let gram = Herm::from_matrix(&(a.adjoint() * &a));
        let mut s: Vec<f64> = gram.eigenvalues().unwrap().iter().map(|x| x.max(0.0).sqrt()).collect();
        s.reverse();
        let sv = singular_values(&a);
        for (x, y) in s.iter().zip(&sv) {
            assert!((x - y).abs() < 1e-10 * s[0]);
        }
        let close = |x: f64, y: f64| (x - y).abs() < 1e-10 * y.abs().max(1.0);
        assert!(close(ui_norm(&a, UiNorm::Operator).unwrap(), s[0]));
        assert!(close(ui_norm(&a, UiNorm::Frobenius).unwrap(), a.norm()));
        assert!(close(ui_norm(&a, UiNorm::Trace).unwrap(), s.iter().sum()));
        assert!(close(ui_norm(&a, UiNorm::Schatten(2.0)).unwrap(), a.norm()));
        if n >= 2 {
            assert!(close(ui_norm(&a, UiNorm::KyFan(2)).unwrap(), s[0] + s[1]));
        }
    }
}

#[test]
fn loewner_order_on_diagonals() {
    let tol = ToleranceSpec::default();
    let a = Herm::from_diag(&[1.0, 2.0]);
    let b = Herm::from_diag(&[1.5, 2.0]);
    assert!(loewner_leq(&a, &b, &tol).unwrap().pass);
    assert!(!loewner_leq(&b, &a, &tol).unwrap().pass);
    assert!((loewner_leq(&b, &a, &tol).unwrap().slack + 0.5).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hermitian_eigendecomposition_reassembles(seed in any::<u64>(), n in 1usize..10) {
        let h = random_hermitian(n, &mut rng(seed));
        let e = herm_eig(&h).unwrap();
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        let back = e.reassemble(|x| x);
        prop_assert!((back.as_matrix() - h.as_matrix()).norm() <= 1e-10 * n as f64 * h.as_matrix().norm());
    }

    #[test]
    fn unitarily_invariant_norms_are_invariant(seed in any::<u64>(), n in 1usize..8) {
        let mut r = rng(seed);
        let a = gaussian(n, &mut r);
        let u = haar_unitary(n, &mut r);
        let w = haar_unitary(n, &mut r);
        let b = &u * &a * &w;
        for which in UiNorm::standard_set(n) {
            let x = ui_norm(&a, which).unwrap();
            let y = ui_norm(&b, which).unwrap();
            prop_assert!((x - y).abs() <= 1e-9 * x);
        }
    }

    #[test]
    fn sqrt_squares_back(seed in any::<u64>(), n in 1usize..7, theta in 0.0f64..1.5) {
        let a = sample_sector(n, theta, 0.05, 20.0, &mut rng(seed), &SamplerOptions::default()).unwrap().a;
        let s = sqrtm(&a).unwrap();
        prop_assert!(rel_err(&(&s * &s), &a) < 1e-10);
        prop_assert!(rel_err(&expm(&logm(&a).unwrap()).unwrap(), &a) < 1e-10);
    }

    #[test]
    fn loewner_order_is_reflexive_and_monotone(seed in any::<u64>(), n in 1usize..6) {
        let mut r = rng(seed);
        let h = random_hermitian(n, &mut r);
        let g = gaussian(n, &mut r);
        let psd = Herm::from_matrix(&(g.adjoint() * &g));
        let tol = ToleranceSpec::default();
        prop_assert!(loewner_leq(&h, &h, &tol).unwrap().pass);
        prop_assert!(loewner_leq(&h, &h.add(&psd), &tol).unwrap().pass);
    }
}
