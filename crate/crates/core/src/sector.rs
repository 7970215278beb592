//! Sector matrices: real/imaginary parts, the sectorial angle, a certified
//! sampler, the numerical radius and the numerical-range boundary.

use std::io::Write;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::numkernel::{c64, ensure_square, herm_eig, inverse, CMatrix, Herm, C64};

pub fn real_part(a: &CMatrix) -> Herm {
    Herm::from_matrix(a)
}

/// `(A - A*) / 2i`.
pub fn imag_part(a: &CMatrix) -> Herm {
    Herm::from_matrix(&a.map(|z| c64(z.im, -z.re)))
}

/// `A - A*` scaled so that `A = Re A + i Im A`.
pub fn from_parts(re: &Herm, im: &Herm) -> CMatrix {
    re.as_matrix() + im.as_matrix().map(|z| c64(-z.im, z.re))
}

/// Least `θ` with `W(A) ⊆ S_θ`: `arctan ‖R^{-1/2} S R^{-1/2}‖` for `R = Re A`, `S = Im A`.
pub fn sector_angle(a: &CMatrix) -> Result<f64> {
    ensure_square(a)?;
    let r = real_part(a);
    let e = herm_eig(&r)?;
    if e.values[0] <= 0.0 {
        return Err(Error::NotAccretive {
            min_eig: e.values[0],
        });
    }
    let r_inv_sqrt = e.reassemble(|l| l.powf(-0.5));
    let s = imag_part(a);
    let m = Herm::from_matrix(&(r_inv_sqrt.as_matrix() * s.as_matrix() * r_inv_sqrt.as_matrix()));
    Ok(m.op_norm()?.atan())
}

/// A matrix with certified sectorial angle and real-part bounds `m I ⪯ Re A ⪯ M I`.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorSample {
    pub a: CMatrix,
    pub theta: f64,
    pub m: f64,
    pub big_m: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplerOptions {
    /// Fraction of samples placed exactly on the sector boundary.
    pub boundary_fraction: f64,
}

impl Default for SamplerOptions {
    fn default() -> Self {
        SamplerOptions {
            boundary_fraction: 0.25,
        }
    }
}

fn ginibre<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c64(re * s, im * s)
    })
}

/// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let qr = ginibre(n, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c64(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// GUE-distributed Hermitian matrix.
pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Herm {
    Herm::from_matrix(&ginibre(n, rng))
}

/// Positive definite matrix with spectrum in `[m, M]`, both endpoints attained when `n ≥ 2`.
pub fn random_pd<R: Rng + ?Sized>(n: usize, m: f64, big_m: f64, rng: &mut R) -> Herm {
    let q = haar_unitary(n, rng);
    let lambdas: Vec<f64> = (0..n)
        .map(|i| match i {
            0 => m,
            _ if i == n - 1 => big_m,
            _ => m + (big_m - m) * rng.random::<f64>(),
        })
        .collect();
    let mut scaled = q.clone();
    for (j, &l) in lambdas.iter().enumerate() {
        for i in 0..n {
            scaled[(i, j)] *= l;
        }
    }
    Herm::from_matrix(&(scaled * q.adjoint()))
}

fn check_sampler_domain(n: usize, theta: f64, m: f64, big_m: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("dimension must be positive"));
    }
    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&theta) {
        return Err(Error::domain(format!("theta = {theta} outside [0, pi/2)")));
    }
    if !(m > 0.0 && big_m >= m && big_m.is_finite()) {
        return Err(Error::domain(format!("bounds need 0 < m <= M, got m = {m}, M = {big_m}")));
    }
    Ok(())
}

/// `A = R + iS` with `R` having spectrum in `[m, M]` and `S = R^{1/2} H R^{1/2}`,
/// `‖H‖ = tan θ · u`, so that the sectorial angle of `A` is `arctan(tan θ · u) ≤ θ`.
pub fn sample_sector<R: Rng + ?Sized>(
    n: usize,
    theta: f64,
    m: f64,
    big_m: f64,
    rng: &mut R,
    opts: &SamplerOptions,
) -> Result<SectorSample> {
    check_sampler_domain(n, theta, m, big_m)?;
    let r = random_pd(n, m, big_m, rng);
    let h = random_hermitian(n, rng);
    let on_boundary = rng.random::<f64>() < opts.boundary_fraction;
    let u = if on_boundary { 1.0 } else { rng.random::<f64>() };
    let a = if theta == 0.0 {
        r.as_matrix().clone()
    } else {
        let h_norm = h.op_norm()?;
        let h = h.scale(theta.tan() * u / h_norm);
        let r_sqrt = r.map_spectrum(f64::sqrt)?;
        let s = Herm::from_matrix(&(r_sqrt.as_matrix() * h.as_matrix() * r_sqrt.as_matrix()));
        from_parts(&r, &s)
    };
    Ok(SectorSample { a, theta, m, big_m })
}

/// Sample with `m I ⪯ Re(A^{-1}) ⪯ M I`: a certified sample is drawn and inverted.
/// The returned bounds refer to `Re(A^{-1})`.
pub fn sample_sector_inverse_bounds<R: Rng + ?Sized>(
    n: usize,
    theta: f64,
    m: f64,
    big_m: f64,
    rng: &mut R,
    opts: &SamplerOptions,
) -> Result<SectorSample> {
    let g = sample_sector(n, theta, m, big_m, rng, opts)?;
    Ok(SectorSample {
        a: inverse(&g.a)?,
        ..g
    })
}

/// Hermitian part of `e^{iφ} A`, i.e. `cos φ Re A - sin φ Im A`.
fn rotated_real_part(re: &Herm, im: &Herm, phi: f64) -> Herm {
    let (s, c) = phi.sin_cos();
    Herm::from_matrix(&(re.as_matrix() * c64(c, 0.0) - im.as_matrix() * c64(s, 0.0)))
}

pub const RADIUS_GRID: usize = 256;

/// `ω(A) = max_φ λ_max(Re(e^{iφ} A))`: a uniform grid followed by golden-section
/// refinement on the best bracket.
pub fn numerical_radius(a: &CMatrix) -> Result<f64> {
    ensure_square(a)?;
    let re = real_part(a);
    let im = imag_part(a);
    let objective = |phi: f64| -> Result<f64> { rotated_real_part(&re, &im, phi).max_eig() };
    let step = std::f64::consts::TAU / RADIUS_GRID as f64;
    let mut best = (0usize, f64::NEG_INFINITY);
    for k in 0..RADIUS_GRID {
        let g = objective(k as f64 * step)?;
        if g > best.1 {
            best = (k, g);
        }
    }
    let center = best.0 as f64 * step;
    let (mut lo, mut hi) = (center - step, center + step);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut g1 = objective(x1)?;
    let mut g2 = objective(x2)?;
    let mut top = best.1.max(g1).max(g2);
    while hi - lo > 1e-10 {
        if g1 > g2 {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - inv_phi * (hi - lo);
            g1 = objective(x1)?;
            top = top.max(g1);
        } else {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + inv_phi * (hi - lo);
            g2 = objective(x2)?;
            top = top.max(g2);
        }
    }
    Ok(top.max(0.0))
}

/// Boundary of the numerical range traced by support points.
#[derive(Clone, Debug, PartialEq)]
pub struct RangeBoundary {
    pub points: Vec<C64>,
    pub angles: Vec<f64>,
}

impl RangeBoundary {
    /// CSV with header `phi,re,im`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "phi,re,im")?;
        for (phi, z) in self.angles.iter().zip(&self.points) {
            writeln!(w, "{phi:e},{:e},{:e}", z.re, z.im)?;
        }
        Ok(())
    }
}

/// Each point is `⟨A x, x⟩` for the top eigenvector `x` of `Re(e^{-iφ} A)`.
pub fn range_boundary(a: &CMatrix, resolution: usize) -> Result<RangeBoundary> {
    ensure_square(a)?;
    if resolution < 8 {
        return Err(Error::domain(format!("resolution {resolution} < 8")));
    }
    let re = real_part(a);
    let im = imag_part(a);
    let n = a.nrows();
    let mut points = Vec::with_capacity(resolution);
    let mut angles = Vec::with_capacity(resolution);
    for k in 0..resolution {
        let phi = std::f64::consts::TAU * k as f64 / resolution as f64;
        let e = herm_eig(&rotated_real_part(&re, &im, -phi))?;
        let x = e.vectors.column(n - 1).clone_owned();
        let z = (x.adjoint() * a * &x)[(0, 0)];
        points.push(z);
        angles.push(phi);
    }
    Ok(RangeBoundary { points, angles })
}
