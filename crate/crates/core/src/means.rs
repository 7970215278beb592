//! Operator monotone representing functions and Kubo–Ando means of accretive matrices.
//!
//! Weighting convention: `v` always weights the second argument, so
//! `A ∇_v B = (1-v) A + v B`, `A ♯_v B = A^{1/2} (A^{-1/2} B A^{-1/2})^v A^{1/2}`
//! and `A !_v B = ((1-v) A^{-1} + v B^{-1})^{-1}`. With this choice
//! `!_v ≤ ♯_v ≤ ∇_v` holds for every `v`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numkernel::{
    self, c64, ensure_same_dim, ensure_square, inverse, loewner_leq, mat_fn_with, sqrtm, CMatrix, Herm,
    MatFnOptions, Principal, ScalarFn, ToleranceSpec, Verdict, C64,
};
use crate::sector::{real_part, SectorSample};

/// Representing function `f` of an operator mean, `f(1) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub enum OpMonotone {
    /// `((1-v) + v t^r)^{1/r}`, `r ∈ [-1, 1]`; `r = 0` is `t^v`.
    Power { r: f64, v: f64 },
    /// `(1-v) + v t`.
    Arithmetic { v: f64 },
    /// `t^v`.
    Geometric { v: f64 },
    /// `t / ((1-v) t + v)`.
    Harmonic { v: f64 },
    /// `(t^v + t^{1-v}) / 2`.
    Heinz { v: f64 },
    /// `1 / f(1/t)`.
    Adjoint(Box<OpMonotone>),
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} = {x} outside [0, 1]")))
    }
}

impl OpMonotone {
    pub fn power(r: f64, v: f64) -> Result<Self> {
        check_unit("v", v)?;
        if !(-1.0..=1.0).contains(&r) {
            return Err(Error::domain(format!("r = {r} outside [-1, 1]")));
        }
        Ok(OpMonotone::Power { r, v })
    }

    pub fn arithmetic(v: f64) -> Result<Self> {
        check_unit("v", v)?;
        Ok(OpMonotone::Arithmetic { v })
    }

    pub fn geometric(v: f64) -> Result<Self> {
        check_unit("v", v)?;
        Ok(OpMonotone::Geometric { v })
    }

    pub fn harmonic(v: f64) -> Result<Self> {
        check_unit("v", v)?;
        Ok(OpMonotone::Harmonic { v })
    }

    pub fn heinz(v: f64) -> Result<Self> {
        check_unit("v", v)?;
        Ok(OpMonotone::Heinz { v })
    }

    /// Representing function of the adjoint mean, simplified inside the catalog where possible.
    pub fn adjoint(&self) -> OpMonotone {
        match self {
            OpMonotone::Power { r, v } => OpMonotone::Power { r: -r, v: *v },
            OpMonotone::Arithmetic { v } => OpMonotone::Harmonic { v: *v },
            OpMonotone::Harmonic { v } => OpMonotone::Arithmetic { v: *v },
            OpMonotone::Geometric { v } => OpMonotone::Geometric { v: *v },
            OpMonotone::Heinz { .. } => OpMonotone::Adjoint(Box::new(self.clone())),
            OpMonotone::Adjoint(inner) => (**inner).clone(),
        }
    }

    /// `Some(v)` when this is `∇_v` in disguise.
    fn as_arithmetic(&self) -> Option<f64> {
        match *self {
            OpMonotone::Arithmetic { v } | OpMonotone::Power { r: 1.0, v } => Some(v),
            _ => None,
        }
    }

    fn as_harmonic(&self) -> Option<f64> {
        match *self {
            OpMonotone::Harmonic { v } | OpMonotone::Power { r: -1.0, v } => Some(v),
            _ => None,
        }
    }

    fn as_geometric(&self) -> Option<f64> {
        match *self {
            OpMonotone::Geometric { v } | OpMonotone::Power { r: 0.0, v } => Some(v),
            _ => None,
        }
    }

    /// `f(t)` for `t > 0`.
    pub fn eval_real(&self, t: f64) -> f64 {
        match self {
            OpMonotone::Power { r, v } => {
                if *r == 0.0 {
                    t.powf(*v)
                } else {
                    ((1.0 - v) + v * t.powf(*r)).powf(1.0 / r)
                }
            }
            OpMonotone::Arithmetic { v } => (1.0 - v) + v * t,
            OpMonotone::Geometric { v } => t.powf(*v),
            OpMonotone::Harmonic { v } => t / ((1.0 - v) * t + v),
            OpMonotone::Heinz { v } => 0.5 * (t.powf(*v) + t.powf(1.0 - v)),
            OpMonotone::Adjoint(inner) => 1.0 / inner.eval_real(1.0 / t),
        }
    }

    /// Scalar mean `a σ b = a f(b/a)`.
    pub fn scalar_mean(&self, a: f64, b: f64) -> f64 {
        a * self.eval_real(b / a)
    }
}

impl ScalarFn for OpMonotone {
    /// Principal-branch continuation to `C \ (-inf, 0]`.
    fn eval(&self, z: C64) -> C64 {
        let one = c64(1.0, 0.0);
        match self {
            OpMonotone::Power { r, v } => {
                if *r == 0.0 {
                    numkernel::Principal::Pow(*v).eval(z)
                } else {
                    let w = one * (1.0 - v) + Principal::Pow(*r).eval(z) * *v;
                    Principal::Pow(1.0 / r).eval(w)
                }
            }
            OpMonotone::Arithmetic { v } => one * (1.0 - v) + z * *v,
            OpMonotone::Geometric { v } => Principal::Pow(*v).eval(z),
            OpMonotone::Harmonic { v } => z / (z * (1.0 - v) + *v),
            OpMonotone::Heinz { v } => (Principal::Pow(*v).eval(z) + Principal::Pow(1.0 - v).eval(z)) * 0.5,
            OpMonotone::Adjoint(inner) => inner.eval(z.inv()).inv(),
        }
    }

    fn has_branch_cut(&self) -> bool {
        !matches!(self, OpMonotone::Arithmetic { .. } | OpMonotone::Power { r: 1.0, .. })
    }

    fn on_triangular(&self, t: &CMatrix) -> Option<Result<CMatrix>> {
        self.as_geometric().and_then(|v| Principal::Pow(v).on_triangular(t))
    }
}

impl fmt::Display for OpMonotone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpMonotone::Power { r, v } => write!(f, "power:r={r},v={v}"),
            OpMonotone::Arithmetic { v } => write!(f, "arithmetic:v={v}"),
            OpMonotone::Geometric { v } => write!(f, "geometric:v={v}"),
            OpMonotone::Harmonic { v } => write!(f, "harmonic:v={v}"),
            OpMonotone::Heinz { v } => write!(f, "heinz:v={v}"),
            OpMonotone::Adjoint(inner) => write!(f, "adjoint({inner})"),
        }
    }
}

fn parse_params(s: &str) -> Result<Vec<(String, f64)>> {
    s.split(',')
        .filter(|p| !p.is_empty())
        .map(|p| {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("expected key=value, got '{p}'")))?;
            let x: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad number '{v}' in '{p}'")))?;
            Ok((k.trim().to_string(), x))
        })
        .collect()
}

fn param(params: &[(String, f64)], key: &str, default: Option<f64>) -> Result<f64> {
    params
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| *v)
        .or(default)
        .ok_or_else(|| Error::Config(format!("missing parameter '{key}'")))
}

impl FromStr for OpMonotone {
    type Err = Error;

    /// Parses catalog ids such as `arithmetic:v=0.5`, `power:r=0.3,v=0.25` or `adjoint(heinz:v=0.2)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("adjoint(").and_then(|r| r.strip_suffix(')')) {
            return Ok(OpMonotone::Adjoint(Box::new(inner.parse()?)));
        }
        let (family, rest) = s.split_once(':').unwrap_or((s, ""));
        let params = parse_params(rest)?;
        let v = param(&params, "v", Some(0.5))?;
        let f = match family {
            "power" => OpMonotone::power(param(&params, "r", None)?, v),
            "arithmetic" => OpMonotone::arithmetic(v),
            "geometric" => OpMonotone::geometric(v),
            "harmonic" => OpMonotone::harmonic(v),
            "heinz" => OpMonotone::heinz(v),
            other => return Err(Error::Config(format!("unknown mean family '{other}'"))),
        };
        f.map_err(|e| Error::Config(e.to_string()))
    }
}

/// An operator mean named by its representing function.
#[derive(Clone, Debug, PartialEq)]
pub struct MeanSpec {
    pub f: OpMonotone,
    pub name: String,
}

impl MeanSpec {
    pub fn new(f: OpMonotone) -> Self {
        let name = f.to_string();
        MeanSpec { f, name }
    }

    pub fn arithmetic(v: f64) -> Result<Self> {
        Ok(Self::new(OpMonotone::arithmetic(v)?))
    }

    pub fn geometric(v: f64) -> Result<Self> {
        Ok(Self::new(OpMonotone::geometric(v)?))
    }

    pub fn harmonic(v: f64) -> Result<Self> {
        Ok(Self::new(OpMonotone::harmonic(v)?))
    }

    pub fn power(r: f64, v: f64) -> Result<Self> {
        Ok(Self::new(OpMonotone::power(r, v)?))
    }
}

impl From<OpMonotone> for MeanSpec {
    fn from(f: OpMonotone) -> Self {
        MeanSpec::new(f)
    }
}

impl FromStr for MeanSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(MeanSpec::new(s.parse()?))
    }
}

impl fmt::Display for MeanSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

pub fn adjoint_mean(sigma: &MeanSpec) -> MeanSpec {
    MeanSpec::new(sigma.f.adjoint())
}

fn ensure_accretive(a: &CMatrix) -> Result<()> {
    let min = real_part(a).min_eig()?;
    if min <= 0.0 {
        return Err(Error::NotAccretive { min_eig: min });
    }
    Ok(())
}

pub fn mean_eval(sigma: &MeanSpec, a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    mean_eval_with(&sigma.f, a, b, &MatFnOptions::default())
}

/// `A σ B = A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}` with principal branches.
/// `∇_v` and `!_v` use their closed forms, which agree with the primal formula.
pub fn mean_eval_with(f: &OpMonotone, a: &CMatrix, b: &CMatrix, opts: &MatFnOptions) -> Result<CMatrix> {
    ensure_square(a)?;
    ensure_same_dim(a, b)?;
    ensure_accretive(a)?;
    ensure_accretive(b)?;
    if let Some(v) = f.as_arithmetic() {
        return Ok(a * c64(1.0 - v, 0.0) + b * c64(v, 0.0));
    }
    if let Some(v) = f.as_harmonic() {
        let s = inverse(a)? * c64(1.0 - v, 0.0) + inverse(b)? * c64(v, 0.0);
        return inverse(&s);
    }
    let a_half = sqrtm(a)?;
    let a_half_inv = inverse(&a_half)?;
    let c = &a_half_inv * b * &a_half_inv;
    let fc = mat_fn_with(&c, f, opts)?;
    Ok(&a_half * fc * &a_half)
}

/// Mean of two positive definite matrices through the Hermitian functional calculus.
pub fn mean_eval_pd(f: &OpMonotone, a: &Herm, b: &Herm) -> Result<Herm> {
    ensure_same_dim(a.as_matrix(), b.as_matrix())?;
    if let Some(v) = f.as_arithmetic() {
        return Ok(a.scale(1.0 - v).add(&b.scale(v)));
    }
    let eig = a.eig()?;
    if eig.values[0] <= 0.0 || b.min_eig()? <= 0.0 {
        return Err(Error::NotAccretive { min_eig: eig.values[0].min(b.min_eig()?) });
    }
    let a_half = eig.reassemble(f64::sqrt);
    let a_half_inv = eig.reassemble(|t| 1.0 / t.sqrt());
    let c = Herm::from_matrix(&(a_half_inv.as_matrix() * b.as_matrix() * a_half_inv.as_matrix()));
    let fc = c.map_spectrum(|t| f.eval_real(t))?;
    Ok(Herm::from_matrix(&(a_half.as_matrix() * fc.as_matrix() * a_half.as_matrix())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeanOrder {
    Leq,
    Geq,
    Incomparable,
}

pub const ORDER_GRID: usize = 10_000;

/// Grid-certified comparison of representing functions on `[1e-6, 1e6]`
/// (log-spaced, 10⁴ points, relative slack `1e-12`). Equal functions report `Leq`.
pub fn scalar_order(sigma1: &MeanSpec, sigma2: &MeanSpec) -> MeanOrder {
    let mut leq = true;
    let mut geq = true;
    for k in 0..ORDER_GRID {
        let t = 10f64.powf(-6.0 + 12.0 * k as f64 / (ORDER_GRID - 1) as f64);
        let a = sigma1.f.eval_real(t);
        let b = sigma2.f.eval_real(t);
        let tol = 1e-12 * a.abs().max(b.abs()).max(1.0);
        leq &= a <= b + tol;
        geq &= b <= a + tol;
    }
    match (leq, geq) {
        (true, _) => MeanOrder::Leq,
        (false, true) => MeanOrder::Geq,
        _ => MeanOrder::Incomparable,
    }
}

/// Both sides of `Re A σ Re B ⪯ Re(A σ B) ⪯ sec²θ (Re A σ Re B)`.
pub fn sandwich_check(
    sigma: &MeanSpec,
    a: &SectorSample,
    b: &SectorSample,
    tol: &ToleranceSpec,
) -> Result<(Verdict, Verdict)> {
    let opts = MatFnOptions::default();
    let theta = a.theta.max(b.theta);
    let sec2 = 1.0 / theta.cos().powi(2);
    let lower = mean_eval_pd(&sigma.f, &real_part(&a.a), &real_part(&b.a))?;
    let mid = real_part(&mean_eval_with(&sigma.f, &a.a, &b.a, &opts)?);
    Ok((
        loewner_leq(&lower, &mid, tol)?,
        loewner_leq(&mid, &lower.scale(sec2), tol)?,
    ))
}

/// Both sides of `f(Re A) ⪯ Re f(A) ⪯ sec²θ f(Re A)`.
pub fn fn_sandwich_check(f: &OpMonotone, a: &SectorSample, tol: &ToleranceSpec) -> Result<(Verdict, Verdict)> {
    let sec2 = 1.0 / a.theta.cos().powi(2);
    let re = real_part(&a.a);
    let lower = re.map_spectrum(|t| f.eval_real(t))?;
    let mid = real_part(&mat_fn_with(&a.a, f, &MatFnOptions::default())?);
    Ok((
        loewner_leq(&lower, &mid, tol)?,
        loewner_leq(&mid, &lower.scale(sec2), tol)?,
    ))
}
