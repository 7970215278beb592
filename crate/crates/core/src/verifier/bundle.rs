use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::means::{MeanSpec, OpMonotone};
use crate::numkernel::{c64, CMatrix};
use crate::pulm::{MapSpec, PULMap};
use crate::sector::{sample_sector, sample_sector_inverse_bounds, SamplerOptions};

use super::registry::CheckKind;

/// One grid point: dimension, sector angle and real-part bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Cell {
    pub n: usize,
    pub theta: f64,
    pub m: f64,
    #[serde(rename = "M")]
    pub big_m: f64,
}

impl Cell {
    pub fn sec(&self) -> f64 {
        1.0 / self.theta.cos()
    }
}

/// All inputs of one trial.
#[derive(Clone, Debug, PartialEq)]
pub struct Bundle {
    pub cell: Cell,
    /// `m I ⪯ Re A, Re B ⪯ M I`.
    pub a: CMatrix,
    pub b: CMatrix,
    /// `m I ⪯ Re A^{-1}, Re B^{-1} ⪯ M I`, drawn only where a statement needs it.
    pub inv_a: Option<CMatrix>,
    pub inv_b: Option<CMatrix>,
    pub v: f64,
    pub sigma1: MeanSpec,
    pub sigma2: MeanSpec,
    pub f: OpMonotone,
    pub phi: PULMap,
    pub p: f64,
}

/// `r` drawn from `[-1, 1]`, landing on one of `-1, 0, 1` a quarter of the time.
fn draw_r<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    if rng.random::<f64>() < 0.25 {
        [-1.0, 0.0, 1.0][rng.random_range(0..3)]
    } else {
        rng.random_range(-1.0..=1.0)
    }
}

fn draw_f<R: Rng + ?Sized>(rng: &mut R) -> Result<OpMonotone> {
    let v = rng.random::<f64>();
    match rng.random_range(0..5) {
        0 => OpMonotone::power(rng.random_range(-1.0..=1.0), v),
        1 => OpMonotone::arithmetic(v),
        2 => OpMonotone::geometric(v),
        3 => OpMonotone::harmonic(v),
        _ => OpMonotone::heinz(v),
    }
}

/// A mean below `∇_{1/2}`.
fn draw_below_nabla<R: Rng + ?Sized>(rng: &mut R) -> Result<OpMonotone> {
    if rng.random::<bool>() {
        OpMonotone::power(draw_r(rng), 0.5)
    } else {
        OpMonotone::heinz(rng.random::<f64>())
    }
}

impl Bundle {
    pub fn sample<R: Rng + ?Sized>(kind: CheckKind, cell: Cell, rng: &mut R, opts: &SamplerOptions) -> Result<Bundle> {
        let Cell { n, theta, m, big_m } = cell;
        let a = sample_sector(n, theta, m, big_m, rng, opts)?.a;
        let b = sample_sector(n, theta, m, big_m, rng, opts)?.a;
        let (inv_a, inv_b) = if kind.needs_inverse_bounds() {
            (
                Some(sample_sector_inverse_bounds(n, theta, m, big_m, rng, opts)?.a),
                Some(sample_sector_inverse_bounds(n, theta, m, big_m, rng, opts)?.a),
            )
        } else {
            (None, None)
        };
        let v = rng.random::<f64>();
        let mut sigma1 = OpMonotone::power(draw_r(rng), v)?;
        let sigma2 = OpMonotone::power(draw_r(rng), v)?;
        if kind == CheckKind::D5 {
            sigma1 = draw_below_nabla(rng)?;
        }
        let f = draw_f(rng)?;
        let phi = if kind.uses_phi() {
            let catalog = MapSpec::catalog();
            catalog[rng.random_range(0..catalog.len())].instantiate(n, rng)?
        } else {
            PULMap::identity(n)
        };
        let grid = kind.p_grid();
        let p = if grid.is_empty() { 1.0 } else { grid[rng.random_range(0..grid.len())] };
        Ok(Bundle {
            cell,
            a,
            b,
            inv_a,
            inv_b,
            v,
            sigma1: sigma1.into(),
            sigma2: sigma2.into(),
            f,
            phi,
            p,
        })
    }

    /// Parameters relevant to `kind`, as `key=value` pairs joined by `;`.
    pub fn params(&self, kind: CheckKind) -> String {
        let mut out = Vec::new();
        if !kind.p_grid().is_empty() {
            out.push(format!("p={}", self.p));
        }
        if kind.uses_means() {
            out.push(format!("sigma1={}", self.sigma1));
            out.push(format!("sigma2={}", self.sigma2));
        }
        if kind.uses_f() {
            out.push(format!("f={}", self.f));
        }
        if kind.uses_phi() {
            out.push(format!("phi={}", self.phi));
        }
        out.join(";")
    }

    /// Inverse-bounds pair, failing when the bundle was drawn without one.
    pub(crate) fn inverse_pair(&self) -> Result<(&CMatrix, &CMatrix)> {
        match (&self.inv_a, &self.inv_b) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(Error::domain("bundle has no inverse-bounds samples")),
        }
    }
}

fn scalar(x: f64) -> CMatrix {
    CMatrix::from_element(1, 1, c64(x, 0.0))
}

/// The `1 × 1`, `θ = 0` configurations where Kantorovich-type constants are attained:
/// `a, b ∈ {m, M}`, `σ1, σ2 ∈ {∇, ♯, !}` with weight `1/2`, `Φ = id`, and `f`
/// from the same trio when the statement has one. `p_values` overrides the p grid.
pub fn scalar_extremal_bundles(kind: CheckKind, m: f64, big_m: f64, p_values: Option<&[f64]>) -> Result<Vec<Bundle>> {
    if !(m > 0.0 && big_m >= m) {
        return Err(Error::domain(format!("bounds need 0 < m <= M, got m = {m}, M = {big_m}")));
    }
    let cell = Cell { n: 1, theta: 0.0, m, big_m };
    let trio: Vec<OpMonotone> = [1.0, 0.0, -1.0]
        .iter()
        .map(|&r| OpMonotone::power(r, 0.5))
        .collect::<Result<_>>()?;
    let fs: Vec<OpMonotone> = if kind.uses_f() {
        vec![OpMonotone::arithmetic(0.5)?, OpMonotone::geometric(0.5)?, OpMonotone::harmonic(0.5)?]
    } else {
        vec![OpMonotone::geometric(0.5)?]
    };
    let ps: Vec<f64> = match p_values {
        Some(ps) => ps.to_vec(),
        None if kind.p_grid().is_empty() => vec![1.0],
        None => kind.p_grid().to_vec(),
    };
    let ends = [m, big_m];
    let mut out = Vec::new();
    for &p in &ps {
        for f in &fs {
            for s1 in &trio {
                for s2 in &trio {
                    for &x in &ends {
                        for &y in &ends {
                            let (inv_a, inv_b) = if kind.needs_inverse_bounds() {
                                (Some(scalar(1.0 / x)), Some(scalar(1.0 / y)))
                            } else {
                                (None, None)
                            };
                            out.push(Bundle {
                                cell,
                                a: scalar(x),
                                b: scalar(y),
                                inv_a,
                                inv_b,
                                v: 0.5,
                                sigma1: s1.clone().into(),
                                sigma2: s2.clone().into(),
                                f: f.clone(),
                                phi: PULMap::identity(1),
                                p,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sector::{real_part, sector_angle};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sampled_bundles_meet_hypotheses() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cell = Cell { n: 3, theta: 0.9, m: 0.5, big_m: 2.0 };
        for kind in CheckKind::ALL {
            let b = Bundle::sample(kind, cell, &mut rng, &SamplerOptions::default()).unwrap();
            for x in [&b.a, &b.b] {
                let re = real_part(x).eigenvalues().unwrap();
                assert!(re[0] >= 0.5 - 1e-12 && re[2] <= 2.0 + 1e-12);
                assert!(sector_angle(x).unwrap() <= 0.9 + 1e-9);
            }
            assert_eq!(b.inv_a.is_some(), kind.needs_inverse_bounds());
            if !kind.p_grid().is_empty() {
                assert!(kind.p_grid().contains(&b.p));
            }
        }
    }

    #[test]
    fn extremal_enumeration_size() {
        assert_eq!(scalar_extremal_bundles(CheckKind::M2, 1.0, 4.0, Some(&[1.0])).unwrap().len(), 36);
        assert_eq!(scalar_extremal_bundles(CheckKind::M7, 1.0, 4.0, None).unwrap().len(), 108);
        assert!(scalar_extremal_bundles(CheckKind::M2, 4.0, 1.0, None).is_err());
    }
}
