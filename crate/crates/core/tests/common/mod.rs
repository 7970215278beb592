#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use sectorlab::numkernel::{c64, CMatrix, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c64(re, im)
    })
}

pub fn unit_vector(n: usize, rng: &mut ChaCha8Rng) -> nalgebra::DVector<C64> {
    let x = nalgebra::DVector::from_fn(n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c64(re, im)
    });
    let norm = x.norm();
    x / c64(norm, 0.0)
}

pub fn quad_form(a: &CMatrix, x: &nalgebra::DVector<C64>) -> C64 {
    (x.adjoint() * a * x)[(0, 0)]
}

pub fn rel_err(x: &CMatrix, y: &CMatrix) -> f64 {
    (x - y).norm() / y.norm().max(f64::MIN_POSITIVE)
}

/// Determinant by Laplace expansion along the first row.
pub fn cofactor_det(a: &CMatrix) -> C64 {
    let n = a.nrows();
    if n == 1 {
        return a[(0, 0)];
    }
    let mut det = c64(0.0, 0.0);
    for j in 0..n {
        let minor = a.clone().remove_row(0).remove_column(j);
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        det += a[(0, j)] * cofactor_det(&minor) * sign;
    }
    det
}

/// `exp` by scaling and squaring around a Taylor series.
pub fn taylor_exp(x: &CMatrix) -> CMatrix {
    let n = x.nrows();
    let mut s = 0;
    while x.norm() / 2f64.powi(s) > 0.25 {
        s += 1;
    }
    let y = x / c64(2f64.powi(s), 0.0);
    let mut term = CMatrix::identity(n, n);
    let mut sum = CMatrix::identity(n, n);
    for k in 1..30 {
        term = &term * &y / c64(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}
