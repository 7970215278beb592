//! Principal matrix functions.
//!
//! Every evaluation starts from the complex Schur form `X = Q T Q*`.
//! `sqrt`, `log`, `exp` and real powers have dedicated triangular algorithms
//! (Björck–Hammarling square root, inverse scaling-and-squaring logarithm,
//! scaling-and-squaring Taylor exponential, `exp(v log T)` for powers).
//! Any other [`ScalarFn`] goes through the eigenvector path when the
//! eigenvector matrix is well conditioned and through a blocked
//! Schur–Parlett recurrence otherwise, with diagonal blocks evaluated by a
//! trapezoidal Cauchy integral.

use super::{ensure_square, identity, is_finite, schur, singular_values, CMatrix, Schur, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// A scalar function with a principal branch, lifted to matrices by [`mat_fn`].
pub trait ScalarFn: Sync {
    fn eval(&self, z: C64) -> C64;

    /// Whether the function is only analytic off the closed ray `(-inf, 0]`.
    fn has_branch_cut(&self) -> bool {
        true
    }

    /// A dedicated algorithm on an upper triangular argument, if one exists.
    fn on_triangular(&self, _t: &CMatrix) -> Option<Result<CMatrix>> {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Principal {
    Sqrt,
    Log,
    Exp,
    /// `X^v = exp(v log X)`.
    Pow(f64),
}

impl ScalarFn for Principal {
    fn eval(&self, z: C64) -> C64 {
        match *self {
            Principal::Sqrt => z.sqrt(),
            Principal::Log => z.ln(),
            Principal::Exp => z.exp(),
            Principal::Pow(v) => cpow(z, v),
        }
    }

    fn has_branch_cut(&self) -> bool {
        !matches!(self, Principal::Exp)
    }

    fn on_triangular(&self, t: &CMatrix) -> Option<Result<CMatrix>> {
        Some(match *self {
            Principal::Sqrt => sqrt_tri(t),
            Principal::Log => log_tri(t),
            Principal::Exp => Ok(exp_tri(t)),
            Principal::Pow(v) => pow_tri(t, v),
        })
    }
}

pub(crate) fn cpow(z: C64, v: f64) -> C64 {
    if v == 0.0 {
        ONE
    } else if z == ZERO {
        ZERO
    } else {
        (z.ln() * v).exp()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatFnOptions {
    /// Largest 2-norm condition number of the eigenvector matrix accepted by the
    /// eigendecomposition path.
    pub eig_cond_max: f64,
    /// Eigenvalues closer than `block_gap_rel * max|λ|` share a Parlett block.
    pub block_gap_rel: f64,
    /// Eigenvalues within `cut_tol * max(1, max|λ|)` of `(-inf, 0]` are rejected.
    pub cut_tol: f64,
}

impl Default for MatFnOptions {
    fn default() -> Self {
        MatFnOptions {
            eig_cond_max: 1e8,
            block_gap_rel: 0.1,
            cut_tol: 1e-12,
        }
    }
}

impl MatFnOptions {
    /// Stricter settings used to re-evaluate a suspected failure.
    pub fn tight() -> Self {
        MatFnOptions {
            eig_cond_max: 1e4,
            ..Self::default()
        }
    }

    /// Always take the Schur–Parlett route.
    pub fn parlett_only() -> Self {
        MatFnOptions {
            eig_cond_max: 0.0,
            ..Self::default()
        }
    }
}

pub fn mat_fn(x: &CMatrix, f: &dyn ScalarFn) -> Result<CMatrix> {
    mat_fn_with(x, f, &MatFnOptions::default())
}

pub fn mat_fn_with(x: &CMatrix, f: &dyn ScalarFn, opts: &MatFnOptions) -> Result<CMatrix> {
    ensure_square(x)?;
    if !is_finite(x) {
        return Err(Error::domain("non-finite matrix entry"));
    }
    let s = schur(x)?;
    if f.has_branch_cut() {
        check_cut(&s.t, opts)?;
    }
    if let Some(ft) = f.on_triangular(&s.t) {
        return Ok(s.reassemble(&ft?));
    }
    if let Some(ft) = eigenvector_path(&s.t, f, opts)? {
        return Ok(s.reassemble(&ft));
    }
    schur_parlett(s, f, opts)
}

pub fn sqrtm(x: &CMatrix) -> Result<CMatrix> {
    mat_fn(x, &Principal::Sqrt)
}

pub fn logm(x: &CMatrix) -> Result<CMatrix> {
    mat_fn(x, &Principal::Log)
}

pub fn expm(x: &CMatrix) -> Result<CMatrix> {
    mat_fn(x, &Principal::Exp)
}

pub fn powm(x: &CMatrix, v: f64) -> Result<CMatrix> {
    mat_fn(x, &Principal::Pow(v))
}

fn spectral_scale(t: &CMatrix) -> f64 {
    (0..t.nrows()).map(|i| t[(i, i)].norm()).fold(0.0, f64::max)
}

fn cut_distance(z: C64) -> f64 {
    if z.re <= 0.0 {
        z.im.abs()
    } else {
        z.norm()
    }
}

fn check_cut(t: &CMatrix, opts: &MatFnOptions) -> Result<()> {
    let tol = opts.cut_tol * spectral_scale(t).max(1.0);
    for i in 0..t.nrows() {
        let z = t[(i, i)];
        if cut_distance(z) <= tol {
            return Err(Error::SpectrumOnCut { eigenvalue: z });
        }
    }
    Ok(())
}

fn solve_upper(t: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    t.solve_upper_triangular(b).ok_or_else(|| Error::IllConditioned {
        detail: "singular triangular factor".into(),
    })
}

/// Eigenvectors of an upper triangular matrix by back substitution, columns normalised.
fn triangular_eigenvectors(t: &CMatrix) -> CMatrix {
    let n = t.nrows();
    let smin = (f64::EPSILON * t.norm()).max(f64::MIN_POSITIVE);
    let mut y = CMatrix::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        y[(k, k)] = ONE;
        for i in (0..k).rev() {
            let mut acc = t[(i, k)];
            for l in (i + 1)..k {
                acc += t[(i, l)] * y[(l, k)];
            }
            let mut d = t[(i, i)] - lambda;
            if d.norm() < smin {
                d = C64::new(smin, 0.0);
            }
            y[(i, k)] = -acc / d;
        }
        let norm = y.column(k).norm();
        y.column_mut(k).unscale_mut(norm);
    }
    y
}

fn eigenvector_path(t: &CMatrix, f: &dyn ScalarFn, opts: &MatFnOptions) -> Result<Option<CMatrix>> {
    let n = t.nrows();
    if opts.eig_cond_max <= 0.0 {
        return Ok(None);
    }
    let y = triangular_eigenvectors(t);
    let sv = singular_values(&y);
    let cond = sv[0] / sv[n - 1];
    if !cond.is_finite() || cond > opts.eig_cond_max {
        return Ok(None);
    }
    let y_inv = solve_upper(&y, &identity(n))?;
    let mut scaled = y;
    for k in 0..n {
        let fk = f.eval(t[(k, k)]);
        for i in 0..n {
            scaled[(i, k)] *= fk;
        }
    }
    Ok(Some(scaled * y_inv))
}

/// Björck–Hammarling recurrence for the principal square root.
fn sqrt_tri(t: &CMatrix) -> Result<CMatrix> {
    let n = t.nrows();
    let mut r = CMatrix::zeros(n, n);
    for j in 0..n {
        r[(j, j)] = t[(j, j)].sqrt();
        for i in (0..j).rev() {
            let mut s = ZERO;
            for k in (i + 1)..j {
                s += r[(i, k)] * r[(k, j)];
            }
            let d = r[(i, i)] + r[(j, j)];
            if d == ZERO {
                return Err(Error::IllConditioned {
                    detail: "square root of a singular matrix".into(),
                });
            }
            r[(i, j)] = (t[(i, j)] - s) / d;
        }
    }
    Ok(r)
}

// 8-point Gauss–Legendre rule on [-1, 1]
const GL_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// `log(I + X) = ∫_0^1 X (I + sX)^{-1} ds`, i.e. the diagonal Padé approximant.
fn log1p_quadrature(x: &CMatrix) -> Result<CMatrix> {
    let n = x.nrows();
    let mut acc = CMatrix::zeros(n, n);
    for (node, weight) in GL_NODES.iter().zip(GL_WEIGHTS.iter()) {
        for s in [0.5 * (1.0 - node), 0.5 * (1.0 + node)] {
            let m = identity(n) + x.scale(s);
            let sol = solve_upper(&m, x)?;
            acc += sol.scale(0.5 * weight);
        }
    }
    Ok(acc)
}

/// Inverse scaling and squaring: take square roots until `‖T^{1/2^k} - I‖_1 ≤ 0.25`.
fn log_tri(t: &CMatrix) -> Result<CMatrix> {
    const MAX_ROOTS: usize = 64;
    let n = t.nrows();
    let mut r = t.clone();
    let mut k = 0;
    while super::norm1(&(&r - identity(n))) > 0.25 {
        if k == MAX_ROOTS {
            return Err(Error::NoConvergence {
                routine: "inverse scaling and squaring",
                hash: super::matrix_hash(t),
                iterations: k,
            });
        }
        r = sqrt_tri(&r)?;
        k += 1;
    }
    let mut l = log1p_quadrature(&(r - identity(n)))?.scale((k as f64).exp2());
    for i in 0..n {
        l[(i, i)] = t[(i, i)].ln();
    }
    Ok(l)
}

/// Scaling and squaring with a degree-18 Taylor polynomial at `‖X/2^s‖_1 ≤ 1/2`.
fn exp_general(x: &CMatrix) -> CMatrix {
    const DEGREE: usize = 18;
    let n = x.nrows();
    let norm = super::norm1(x);
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let y = x.scale((-s as f64).exp2());
    let mut e = identity(n);
    for k in (1..=DEGREE).rev() {
        e = identity(n) + (&y * e).scale(1.0 / k as f64);
    }
    for _ in 0..s {
        e = &e * &e;
    }
    e
}

fn exp_tri(t: &CMatrix) -> CMatrix {
    let mut e = exp_general(t);
    for i in 0..t.nrows() {
        e[(i, i)] = t[(i, i)].exp();
    }
    e
}

fn pow_tri(t: &CMatrix, v: f64) -> Result<CMatrix> {
    let n = t.nrows();
    if v == 0.0 {
        return Ok(identity(n));
    }
    if v == 1.0 {
        return Ok(t.clone());
    }
    let mut p = exp_general(&log_tri(t)?.scale(v));
    for i in 0..n {
        p[(i, i)] = cpow(t[(i, i)], v);
    }
    Ok(p)
}

/// Swaps the adjacent diagonal entries `k`, `k+1` of the Schur form with a Givens rotation.
fn swap_adjacent(s: &mut Schur, k: usize) {
    let n = s.t.nrows();
    let t11 = s.t[(k, k)];
    let t22 = s.t[(k + 1, k + 1)];
    let x0 = s.t[(k, k + 1)];
    let x1 = t22 - t11;
    let r = (x0.norm_sqr() + x1.norm_sqr()).sqrt();
    if r == 0.0 {
        return;
    }
    let a = x0 / r;
    let b = x1 / r;
    for j in k..n {
        let r0 = s.t[(k, j)];
        let r1 = s.t[(k + 1, j)];
        s.t[(k, j)] = a.conj() * r0 + b.conj() * r1;
        s.t[(k + 1, j)] = -b * r0 + a * r1;
    }
    for i in 0..(k + 2) {
        let c0 = s.t[(i, k)];
        let c1 = s.t[(i, k + 1)];
        s.t[(i, k)] = c0 * a + c1 * b;
        s.t[(i, k + 1)] = -c0 * b.conj() + c1 * a.conj();
    }
    for i in 0..n {
        let c0 = s.q[(i, k)];
        let c1 = s.q[(i, k + 1)];
        s.q[(i, k)] = c0 * a + c1 * b;
        s.q[(i, k + 1)] = -c0 * b.conj() + c1 * a.conj();
    }
    s.t[(k + 1, k)] = ZERO;
    s.t[(k, k)] = t22;
    s.t[(k + 1, k + 1)] = t11;
}

/// Groups eigenvalues linked by chains of gaps `≤ gap`; returns a cluster index per position,
/// numbered by first appearance.
fn cluster_eigenvalues(ev: &[C64], gap: f64) -> Vec<usize> {
    let n = ev.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (ev[i] - ev[j]).norm() <= gap {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut ids = Vec::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        let id = match ids.iter().position(|&r| r == root) {
            Some(p) => p,
            None => {
                ids.push(root);
                ids.len() - 1
            }
        };
        label[i] = id;
    }
    label
}

/// `f(T)` for a triangular block with clustered spectrum, by the trapezoidal rule on
/// `(1/2πi) ∮ f(z) (zI - T)^{-1} dz` around a circle that stays clear of the branch cut.
fn cauchy_block(t: &CMatrix, f: &dyn ScalarFn) -> Result<CMatrix> {
    let s = t.nrows();
    if s == 1 {
        return Ok(CMatrix::from_element(1, 1, f.eval(t[(0, 0)])));
    }
    let center = (0..s).map(|i| t[(i, i)]).sum::<C64>() / s as f64;
    let spread = (0..s).map(|i| (t[(i, i)] - center).norm()).fold(0.0, f64::max);
    let radius = if f.has_branch_cut() {
        let d = cut_distance(center);
        if spread >= 0.9 * d {
            return Err(Error::IllConditioned {
                detail: format!(
                    "Parlett block of size {s} centred at {center} has spread {spread:.3e} \
                     within {d:.3e} of the branch cut"
                ),
            });
        }
        0.5 * (spread + d)
    } else {
        (2.0 * spread).max(0.5 * center.norm().max(1.0))
    };

    let quad = |points: usize| -> Result<CMatrix> {
        let mut acc = CMatrix::zeros(s, s);
        for k in 0..points {
            let angle = std::f64::consts::TAU * k as f64 / points as f64;
            let offset = C64::from_polar(radius, angle);
            let z = center + offset;
            let shifted = identity(s) * z - t;
            let resolvent = solve_upper(&shifted, &identity(s))?;
            acc += resolvent * (f.eval(z) * offset);
        }
        Ok(acc / C64::new(points as f64, 0.0))
    };

    let mut points = 32;
    let mut prev = quad(points)?;
    while points < 4096 {
        points *= 2;
        let next = quad(points)?;
        let change = (&next - &prev).norm();
        if change <= 1e-14 * next.norm().max(f64::MIN_POSITIVE) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::IllConditioned {
        detail: format!(
            "Cauchy integral for a Parlett block of size {s} centred at {center} \
             (radius {radius:.3e}) did not converge"
        ),
    })
}

/// Solves `A X - X B = C` for upper triangular `A`, `B`.
fn sylvester_triangular(a: &CMatrix, b: &CMatrix, c: &CMatrix) -> Result<CMatrix> {
    let p = a.nrows();
    let q = b.nrows();
    let mut x = CMatrix::zeros(p, q);
    for col in 0..q {
        let mut rhs = c.column(col).clone_owned();
        for l in 0..col {
            rhs += x.column(l) * b[(l, col)];
        }
        let shift = b[(col, col)];
        for i in (0..p).rev() {
            let mut acc = rhs[i];
            for k in (i + 1)..p {
                acc -= a[(i, k)] * x[(k, col)];
            }
            let d = a[(i, i)] - shift;
            if d == ZERO {
                return Err(Error::IllConditioned {
                    detail: "Parlett blocks share an eigenvalue".into(),
                });
            }
            x[(i, col)] = acc / d;
        }
    }
    Ok(x)
}

fn schur_parlett(mut s: Schur, f: &dyn ScalarFn, opts: &MatFnOptions) -> Result<CMatrix> {
    let n = s.t.nrows();
    let gap = opts.block_gap_rel * spectral_scale(&s.t);
    let mut label = cluster_eigenvalues(&s.eigenvalues(), gap);

    // bubble clusters into contiguous runs, preserving first-appearance order
    loop {
        let mut swapped = false;
        for k in 0..n.saturating_sub(1) {
            if label[k] > label[k + 1] {
                swap_adjacent(&mut s, k);
                label.swap(k, k + 1);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }

    let mut blocks: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for k in 1..=n {
        if k == n || label[k] != label[start] {
            blocks.push((start, k));
            start = k;
        }
    }

    let t = &s.t;
    let sub = |m: &CMatrix, (r0, r1): (usize, usize), (c0, c1): (usize, usize)| -> CMatrix {
        m.view((r0, c0), (r1 - r0, c1 - c0)).clone_owned()
    };
    let mut ft = CMatrix::zeros(n, n);
    for &b in &blocks {
        let fb = cauchy_block(&sub(t, b, b), f)?;
        ft.view_mut((b.0, b.0), (b.1 - b.0, b.1 - b.0)).copy_from(&fb);
    }
    for j in 0..blocks.len() {
        let bj = blocks[j];
        for i in (0..j).rev() {
            let bi = blocks[i];
            let t_ij = sub(t, bi, bj);
            let mut rhs = sub(&ft, bi, bi) * &t_ij - &t_ij * sub(&ft, bj, bj);
            for &bk in &blocks[(i + 1)..j] {
                rhs += sub(&ft, bi, bk) * sub(t, bk, bj) - sub(t, bi, bk) * sub(&ft, bk, bj);
            }
            let x = sylvester_triangular(&sub(t, bi, bi), &sub(t, bj, bj), &rhs)?;
            ft.view_mut((bi.0, bj.0), (bi.1 - bi.0, bj.1 - bj.0)).copy_from(&x);
        }
    }
    Ok(s.reassemble(&ft))
}
