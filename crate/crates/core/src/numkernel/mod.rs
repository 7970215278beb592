//! Dense complex linear algebra on small square matrices.
//!
//! Storage, LU and the Hermitian / Schur eigensolvers come from `nalgebra`;
//! principal matrix functions live in [`matfn`].

use std::hash::{Hash, Hasher};

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

mod matfn;
mod norm;
mod order;

pub use matfn::{
    expm, logm, mat_fn, mat_fn_with, powm, sqrtm, MatFnOptions, Principal, ScalarFn,
};
pub use norm::{singular_values, ui_norm, UiNorm};
pub use order::{loewner_leq, ToleranceSpec, Verdict};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Builds a complex matrix from real row-major entries.
pub fn from_real_rows(n: usize, rows: &[f64]) -> CMatrix {
    assert_eq!(rows.len(), n * n);
    CMatrix::from_fn(n, n, |i, j| c64(rows[i * n + j], 0.0))
}

pub fn diag_real(values: &[f64]) -> CMatrix {
    let n = values.len();
    CMatrix::from_fn(n, n, |i, j| if i == j { c64(values[i], 0.0) } else { ZERO })
}

pub fn is_finite(x: &CMatrix) -> bool {
    x.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub(crate) fn ensure_square(x: &CMatrix) -> Result<usize> {
    if x.nrows() != x.ncols() {
        return Err(Error::DimensionMismatch {
            expected: x.nrows(),
            got: x.ncols(),
        });
    }
    if x.nrows() == 0 {
        return Err(Error::domain("empty matrix"));
    }
    Ok(x.nrows())
}

pub(crate) fn ensure_same_dim(x: &CMatrix, y: &CMatrix) -> Result<()> {
    if x.shape() != y.shape() {
        return Err(Error::DimensionMismatch {
            expected: x.nrows(),
            got: y.nrows(),
        });
    }
    Ok(())
}

/// Hash of the exact bit pattern of a matrix, used in convergence diagnostics.
pub fn matrix_hash(x: &CMatrix) -> u64 {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    x.nrows().hash(&mut h);
    for z in x.iter() {
        z.re.to_bits().hash(&mut h);
        z.im.to_bits().hash(&mut h);
    }
    h.finish()
}

/// A Hermitian matrix whose symmetry holds bit-for-bit.
#[derive(Clone, Debug, PartialEq)]
pub struct Herm(CMatrix);

impl Herm {
    /// Stores `(X + X*)/2`, written so that entry `(j, i)` is the exact conjugate of `(i, j)`.
    pub fn from_matrix(x: &CMatrix) -> Herm {
        let n = x.nrows();
        assert_eq!(n, x.ncols(), "Hermitian part of a non-square matrix");
        let mut h = CMatrix::zeros(n, n);
        for i in 0..n {
            h[(i, i)] = c64(x[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let z = (x[(i, j)] + x[(j, i)].conj()) * 0.5;
                h[(i, j)] = z;
                h[(j, i)] = z.conj();
            }
        }
        Herm(h)
    }

    pub fn identity(n: usize) -> Herm {
        Herm(identity(n))
    }

    pub fn from_diag(values: &[f64]) -> Herm {
        Herm(diag_real(values))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn scale(&self, s: f64) -> Herm {
        Herm(self.0.map(|z| z * s))
    }

    pub fn add(&self, other: &Herm) -> Herm {
        Herm(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Herm) -> Herm {
        Herm(&self.0 - &other.0)
    }

    pub fn eig(&self) -> Result<HermEig> {
        herm_eig(self)
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        herm_eigenvalues(self)
    }

    pub fn min_eig(&self) -> Result<f64> {
        Ok(self.eigenvalues()?[0])
    }

    pub fn max_eig(&self) -> Result<f64> {
        Ok(*self.eigenvalues()?.last().expect("non-empty"))
    }

    /// Spectral norm, `max |λ|`.
    pub fn op_norm(&self) -> Result<f64> {
        let ev = self.eigenvalues()?;
        Ok(ev[0].abs().max(ev[ev.len() - 1].abs()))
    }

    /// Real functional calculus `U g(Λ) U*`.
    pub fn map_spectrum(&self, g: impl Fn(f64) -> f64) -> Result<Herm> {
        let e = self.eig()?;
        Ok(e.reassemble(g))
    }

    /// Real power of a positive definite matrix.
    pub fn pow(&self, p: f64) -> Result<Herm> {
        let e = self.eig()?;
        if e.values[0] <= 0.0 {
            return Err(Error::NotAccretive {
                min_eig: e.values[0],
            });
        }
        Ok(e.reassemble(|lambda| lambda.powf(p)))
    }

    /// Inverse via the spectral decomposition; requires positive definiteness.
    pub fn inverse_pd(&self) -> Result<Herm> {
        self.pow(-1.0)
    }
}

#[derive(Clone, Debug)]
pub struct HermEig {
    /// Ascending.
    pub values: Vec<f64>,
    /// Columns are the matching orthonormal eigenvectors.
    pub vectors: CMatrix,
}

impl HermEig {
    pub fn reassemble(&self, g: impl Fn(f64) -> f64) -> Herm {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (j, &lambda) in self.values.iter().enumerate() {
            let s = g(lambda);
            for i in 0..n {
                scaled[(i, j)] *= s;
            }
        }
        Herm::from_matrix(&(scaled * self.vectors.adjoint()))
    }
}

const EIG_MAX_SWEEPS: usize = 200;

fn symmetric_eigen(h: &Herm) -> Result<nalgebra::SymmetricEigen<C64, nalgebra::Dyn>> {
    let n = h.dim();
    let max_iter = EIG_MAX_SWEEPS * n.max(1);
    nalgebra::SymmetricEigen::try_new(h.0.clone(), f64::EPSILON, max_iter).ok_or_else(|| {
        Error::NoConvergence {
            routine: "hermitian eigensolver",
            hash: matrix_hash(&h.0),
            iterations: max_iter,
        }
    })
}

pub fn herm_eig(h: &Herm) -> Result<HermEig> {
    let n = h.dim();
    let e = symmetric_eigen(h)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
    let values = order.iter().map(|&k| e.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| e.eigenvectors[(i, order[j])]);
    Ok(HermEig { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn herm_eigenvalues(h: &Herm) -> Result<Vec<f64>> {
    let n = h.dim();
    if n == 1 {
        return Ok(vec![h.0[(0, 0)].re]);
    }
    if n == 2 {
        // closed form keeps the hot numerical-radius loop cheap
        let a = h.0[(0, 0)].re;
        let d = h.0[(1, 1)].re;
        let b = h.0[(0, 1)].norm();
        let mid = 0.5 * (a + d);
        let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        return Ok(vec![mid - rad, mid + rad]);
    }
    let max_iter = EIG_MAX_SWEEPS * n;
    let ev: DVector<f64> = nalgebra::SymmetricEigen::try_new(h.0.clone(), f64::EPSILON, max_iter)
        .ok_or_else(|| Error::NoConvergence {
            routine: "hermitian eigensolver",
            hash: matrix_hash(&h.0),
            iterations: max_iter,
        })?
        .eigenvalues;
    let mut v: Vec<f64> = ev.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Complex Schur form `X = Q T Q*`.
#[derive(Clone, Debug)]
pub struct Schur {
    pub q: CMatrix,
    pub t: CMatrix,
}

impl Schur {
    pub fn eigenvalues(&self) -> Vec<C64> {
        (0..self.t.nrows()).map(|i| self.t[(i, i)]).collect()
    }

    pub fn reassemble(&self, f_t: &CMatrix) -> CMatrix {
        &self.q * f_t * self.q.adjoint()
    }
}

fn is_upper_triangular(x: &CMatrix) -> bool {
    let n = x.nrows();
    (0..n).all(|i| (0..i).all(|j| x[(i, j)] == ZERO))
}

pub fn schur(x: &CMatrix) -> Result<Schur> {
    let n = ensure_square(x)?;
    if !is_finite(x) {
        return Err(Error::domain("non-finite matrix entry"));
    }
    if is_upper_triangular(x) {
        return Ok(Schur {
            q: identity(n),
            t: x.clone(),
        });
    }
    let max_iter = 100 * n;
    let s = nalgebra::Schur::try_new(x.clone(), f64::EPSILON, max_iter).ok_or_else(|| {
        Error::NoConvergence {
            routine: "complex Schur QR iteration",
            hash: matrix_hash(x),
            iterations: max_iter,
        }
    })?;
    let (q, mut t) = s.unpack();
    for i in 0..n {
        for j in 0..i {
            t[(i, j)] = ZERO;
        }
    }
    Ok(Schur { q, t })
}

/// General eigenvalues (from the Schur form).
pub fn eigenvalues(x: &CMatrix) -> Result<Vec<C64>> {
    Ok(schur(x)?.eigenvalues())
}

pub(crate) fn norm1(x: &CMatrix) -> f64 {
    (0..x.ncols())
        .map(|j| x.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Inverse through LU with partial pivoting; rejects condition estimates above `1e12`.
pub fn inverse(x: &CMatrix) -> Result<CMatrix> {
    const COND_MAX: f64 = 1e12;
    ensure_square(x)?;
    let inv = x
        .clone()
        .lu()
        .try_inverse()
        .ok_or(Error::NearSingular { cond: f64::INFINITY })?;
    let cond = norm1(x) * norm1(&inv);
    if !cond.is_finite() || cond > COND_MAX {
        return Err(Error::NearSingular { cond });
    }
    Ok(inv)
}

/// `log |det X|`, `-inf` for a singular matrix.
pub fn log_det_abs(x: &CMatrix) -> Result<f64> {
    let n = ensure_square(x)?;
    let lu = x.clone().lu();
    let u = lu.u();
    let mut acc = 0.0;
    for i in 0..n {
        let d = u[(i, i)].norm();
        if d == 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        acc += d.ln();
    }
    Ok(acc)
}

pub fn det_abs(x: &CMatrix) -> Result<f64> {
    Ok(log_det_abs(x)?.exp())
}

/// Frobenius norm of `x - y`.
pub fn dist_f(x: &CMatrix, y: &CMatrix) -> f64 {
    (x - y).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn herm_eig_diagonal_sorted() {
        let e = herm_eig(&Herm::from_diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn herm_eig_classic_two_by_two() {
        let h = Herm::from_matrix(&from_real_rows(2, &[2.0, 1.0, 1.0, 2.0]));
        let e = herm_eig(&h).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] - 3.0).abs() < 1e-14);
        let fast = herm_eigenvalues(&h).unwrap();
        assert!((fast[0] - 1.0).abs() < 1e-14 && (fast[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn herm_symmetrization_is_exact() {
        let x = CMatrix::from_fn(3, 3, |i, j| c64(i as f64 + 0.1 * j as f64, j as f64 - 0.3 * i as f64));
        let h = Herm::from_matrix(&x);
        let m = h.as_matrix();
        for i in 0..3 {
            assert_eq!(m[(i, i)].im, 0.0);
            for j in 0..3 {
                assert_eq!(m[(i, j)], m[(j, i)].conj());
            }
        }
    }

    #[test]
    fn schur_of_triangular_is_trivial() {
        let x = CMatrix::from_fn(3, 3, |i, j| if j >= i { c64(1.0 + i as f64, j as f64) } else { ZERO });
        let s = schur(&x).unwrap();
        assert_eq!(s.q, identity(3));
        assert_eq!(s.t, x);
    }

    #[test]
    fn schur_of_rotation_has_plus_minus_i() {
        let x = from_real_rows(2, &[0.0, 1.0, -1.0, 0.0]);
        let s = schur(&x).unwrap();
        let mut ev = s.eigenvalues();
        ev.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((ev[0] - c64(0.0, -1.0)).norm() < 1e-14);
        assert!((ev[1] - c64(0.0, 1.0)).norm() < 1e-14);
        assert!(s.t[(1, 0)].norm() == 0.0);
    }

    #[test]
    fn inverse_of_diagonal() {
        let inv = inverse(&diag_real(&[2.0, 4.0])).unwrap();
        assert!(dist_f(&inv, &diag_real(&[0.5, 0.25])) < 1e-16);
    }

    #[test]
    fn inverse_rejects_singular() {
        let x = from_real_rows(2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(inverse(&x), Err(Error::NearSingular { .. })));
    }

    #[test]
    fn det_of_diagonal_and_singular() {
        assert!((det_abs(&diag_real(&[2.0, 3.0])).unwrap() - 6.0).abs() < 1e-14);
        let s = from_real_rows(2, &[1.0, 2.0, 2.0, 4.0]);
        assert_eq!(det_abs(&s).unwrap(), 0.0);
    }

    #[test]
    fn dimension_errors() {
        let x = CMatrix::zeros(2, 3);
        assert!(matches!(schur(&x), Err(Error::DimensionMismatch { .. })));
    }
}
