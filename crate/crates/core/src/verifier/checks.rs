use serde::Serialize;

use crate::error::{Error, Result};
use crate::means::{mean_eval_pd, mean_eval_with, scalar_order, MeanOrder, OpMonotone};
use crate::numkernel::{
    c64, identity, inverse, log_det_abs, loewner_leq, mat_fn_with, singular_values, ui_norm, CMatrix, Herm,
    MatFnOptions, ToleranceSpec, UiNorm,
};
use crate::sector::{numerical_radius, real_part, sector_angle};

use super::bundle::Bundle;
use super::kantorovich;
use super::registry::{CheckKind, CheckTarget};

/// How constants are modified before comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct Policy {
    /// Multiplies the outer constant of every targeted part.
    pub factor: f64,
    /// Parts the factor applies to; `None` targets every check.
    pub target: Option<CheckTarget>,
    /// Replaces `sec θ` by 1 everywhere it appears.
    pub drop_sec: bool,
}

impl Default for Policy {
    fn default() -> Self {
        Policy { factor: 1.0, target: None, drop_sec: false }
    }
}

/// Outcome of one sub-statement `LHS ≤ c · RHS`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartResult {
    pub label: &'static str,
    /// Norm or index attaining the reported slack, for multi-valued parts.
    pub at: Option<String>,
    pub pass: bool,
    pub slack: f64,
    pub threshold: f64,
    /// `LHS / RHS` without the constant.
    pub ratio: f64,
    pub constant: f64,
}

impl PartResult {
    /// `ratio / constant`; at most 1 (up to tolerance) when the inequality holds.
    pub fn utilization(&self) -> f64 {
        self.ratio / self.constant
    }
}

enum Cmp {
    Loewner(Herm, Herm),
    Scalar(f64, f64),
    /// Elementwise, with element labels.
    Vector(Vec<f64>, Vec<f64>, Vec<String>),
    /// Logarithms of determinants.
    LogDet(f64, f64),
    /// Two-sided equality.
    Equal(f64, f64),
    /// Sector angle against the cell angle.
    Angle(f64, f64),
}

const ANGLE_TOL: f64 = 1e-8;

fn scalar_verdict(l: f64, r: f64, c: f64, tol: &ToleranceSpec) -> (f64, f64) {
    let slack = c * r - l;
    (slack, tol.threshold(l.abs().max((c * r).abs())))
}

fn compare(label: &'static str, cmp: Cmp, c: f64, tol: &ToleranceSpec) -> Result<PartResult> {
    let mut at = None;
    let (slack, threshold, ratio) = match cmp {
        Cmp::Loewner(l, r) => {
            let verdict = loewner_leq(&l, &r.scale(c), tol)?;
            let eig = r.eig()?;
            let ratio = if eig.values[0] > 0.0 {
                let r_isqrt = eig.reassemble(|t| 1.0 / t.sqrt());
                let m = r_isqrt.as_matrix() * l.as_matrix() * r_isqrt.as_matrix();
                Herm::from_matrix(&m).max_eig()?
            } else {
                f64::INFINITY
            };
            (verdict.slack, verdict.threshold, ratio)
        }
        Cmp::Scalar(l, r) => {
            let (slack, threshold) = scalar_verdict(l, r, c, tol);
            (slack, threshold, l / r)
        }
        Cmp::Vector(l, r, labels) => {
            let mut worst = (f64::INFINITY, 0.0, 0.0);
            let mut ratio = f64::NEG_INFINITY;
            for j in 0..l.len() {
                let (slack, threshold) = scalar_verdict(l[j], r[j], c, tol);
                let scale = l[j].abs().max((c * r[j]).abs()).max(f64::MIN_POSITIVE);
                if slack / scale < worst.0 {
                    worst = (slack / scale, slack, threshold);
                    at = Some(labels[j].clone());
                }
                ratio = ratio.max(l[j] / r[j]);
            }
            (worst.1, worst.2, ratio)
        }
        Cmp::LogDet(l, r) => {
            let bound = c.ln() + r;
            let threshold = tol.rel * l.abs().max(bound.abs()).max(1.0) + tol.abs;
            (bound - l, threshold, (l - r).exp())
        }
        Cmp::Equal(l, r) => ((-(l - r).abs()), tol.threshold(l.abs().max(r.abs())), l / r),
        Cmp::Angle(angle, theta) => (theta - angle, ANGLE_TOL, theta.cos() / angle.cos()),
    };
    Ok(PartResult {
        label,
        at,
        pass: slack >= -threshold,
        slack,
        threshold,
        ratio,
        constant: c,
    })
}

fn re(x: &CMatrix) -> Herm {
    real_part(x)
}

fn scaled(x: &CMatrix, s: f64) -> CMatrix {
    x * c64(s, 0.0)
}

/// `H^p` for positive definite `H`; anything else means the draw missed the hypotheses.
fn pd_pow(h: &Herm, p: f64) -> Result<Herm> {
    let min = h.min_eig()?;
    if min <= 0.0 {
        return Err(Error::HypothesisUnsatisfiable {
            attempts: 1,
            detail: format!("power {p} of a matrix with smallest eigenvalue {min:e}"),
        });
    }
    h.pow(p)
}

fn pd_inverse(h: &Herm) -> Result<Herm> {
    pd_pow(h, -1.0)
}

/// `α^p` with `α = max{K, 4^{1-2/p} K}`, written as `K^p max{1, 4^{p-2}}`.
pub fn alpha_pow(k: f64, p: f64) -> f64 {
    k.powf(p) * 4f64.powf(p - 2.0).max(1.0)
}

struct Ctx<'a> {
    kind: CheckKind,
    b: &'a Bundle,
    policy: &'a Policy,
    tol: &'a ToleranceSpec,
    opts: &'a MatFnOptions,
    sec: f64,
    out: Vec<PartResult>,
}

impl<'a> Ctx<'a> {
    fn push(&mut self, label: &'static str, sec_pow: f64, other: f64, cmp: Cmp) -> Result<()> {
        let mut c = self.sec.powf(sec_pow) * other;
        if let Some(t) = &self.policy.target {
            if t.kind == self.kind && t.matches(label) {
                c *= self.policy.factor;
            }
        } else {
            c *= self.policy.factor;
        }
        self.out.push(compare(label, cmp, c, self.tol)?);
        Ok(())
    }

    fn mean(&self, f: &OpMonotone, a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
        mean_eval_with(f, a, b, self.opts)
    }

    fn phi(&self, x: &CMatrix) -> Result<CMatrix> {
        self.b.phi.apply(x)
    }

    fn phi_h(&self, h: &Herm) -> Result<Herm> {
        self.b.phi.apply_herm(h)
    }

    /// `Re f(X)` with the trial's `f`.
    fn re_f(&self, x: &CMatrix) -> Result<Herm> {
        Ok(re(&mat_fn_with(x, &self.b.f, self.opts)?))
    }

    fn f_mat(&self, x: &CMatrix) -> Result<CMatrix> {
        mat_fn_with(x, &self.b.f, self.opts)
    }

    /// `f` of a positive definite matrix through its eigendecomposition.
    fn f_pd(&self, h: &Herm) -> Result<Herm> {
        h.map_spectrum(|t| self.b.f.eval_real(t))
    }

    fn nabla(&self) -> Result<OpMonotone> {
        OpMonotone::arithmetic(self.b.v)
    }

    /// `(σ_lo, σ_hi)` with `σ_lo ≤ σ_hi`.
    fn ordered(&self) -> Result<(OpMonotone, OpMonotone)> {
        let (s1, s2) = (&self.b.sigma1, &self.b.sigma2);
        let leq = match (&s1.f, &s2.f) {
            (OpMonotone::Power { r: r1, v: v1 }, OpMonotone::Power { r: r2, v: v2 }) if v1 == v2 => r1 <= r2,
            _ => match scalar_order(s1, s2) {
                MeanOrder::Leq => true,
                MeanOrder::Geq => false,
                MeanOrder::Incomparable => {
                    return Err(Error::HypothesisUnsatisfiable {
                        attempts: 1,
                        detail: format!("{s1} and {s2} are not comparable"),
                    })
                }
            },
        };
        Ok(if leq { (s1.f.clone(), s2.f.clone()) } else { (s2.f.clone(), s1.f.clone()) })
    }
}

fn norm_labels(set: &[UiNorm]) -> Vec<String> {
    set.iter().map(|n| n.label()).collect()
}

fn norms(x: &CMatrix, set: &[UiNorm]) -> Result<Vec<f64>> {
    set.iter().map(|&n| ui_norm(x, n)).collect()
}

fn index_labels(n: usize) -> Vec<String> {
    (1..=n).map(|j| format!("j={j}")).collect()
}

/// Eigenvalues of a Hermitian matrix in descending order.
fn descending(h: &Herm) -> Result<Vec<f64>> {
    let mut v = h.eigenvalues()?;
    v.reverse();
    Ok(v)
}

/// Evaluates every part of `kind` on `bundle`.
pub fn evaluate(
    kind: CheckKind,
    bundle: &Bundle,
    policy: &Policy,
    tol: &ToleranceSpec,
    opts: &MatFnOptions,
) -> Result<Vec<PartResult>> {
    let cell = bundle.cell;
    let k = kantorovich(cell.m, cell.big_m)?.value;
    let sec = if policy.drop_sec { 1.0 } else { cell.sec() };
    let mut cx = Ctx { kind, b: bundle, policy, tol, opts, sec, out: Vec::new() };
    let (a, b) = (&bundle.a, &bundle.b);
    let (m, big_m, n) = (cell.m, cell.big_m, cell.n);
    let s1 = &bundle.sigma1.f;
    let s2 = &bundle.sigma2.f;
    let p = bundle.p;
    let nf = n as f64;
    match kind {
        CheckKind::F1 => {
            let re_inv = re(&inverse(a)?);
            let inv_re = pd_inverse(&re(a))?;
            cx.push("left", 0.0, 1.0, Cmp::Loewner(re_inv.clone(), inv_re.clone()))?;
            cx.push("right", 2.0, 1.0, Cmp::Loewner(inv_re, re_inv))?;
        }
        CheckKind::F2 => {
            let lower = mean_eval_pd(s1, &re(a), &re(b))?;
            let x = cx.mean(s1, a, b)?;
            let mid = re(&x);
            cx.push("left", 0.0, 1.0, Cmp::Loewner(lower.clone(), mid.clone()))?;
            cx.push("right", 2.0, 1.0, Cmp::Loewner(mid, lower))?;
            cx.push("angle", 0.0, 1.0, Cmp::Angle(sector_angle(&x)?, cell.theta))?;
        }
        CheckKind::F3 => {
            let ra = re(a);
            let lhs = pd_inverse(&cx.phi_h(&ra)?)?;
            let rhs = cx.phi_h(&pd_inverse(&ra)?)?;
            cx.push("main", 0.0, 1.0, Cmp::Loewner(lhs, rhs))?;
        }
        CheckKind::F4 => {
            let (ra, rb) = (re(a), re(b));
            let lhs = ui_norm(&(ra.as_matrix() * rb.as_matrix()), UiNorm::Operator)?;
            let rhs = ra.add(&rb).op_norm()?.powi(2);
            cx.push("main", 0.0, 0.25, Cmp::Scalar(lhs, rhs))?;
        }
        CheckKind::F5 => {
            let (ra, rb) = (re(a), re(b));
            let lhs = pd_pow(&ra, p)?.add(&pd_pow(&rb, p)?);
            let rhs = pd_pow(&ra.add(&rb), p)?;
            let set = UiNorm::standard_set(n);
            let cmp = Cmp::Vector(norms(lhs.as_matrix(), &set)?, norms(rhs.as_matrix(), &set)?, norm_labels(&set));
            cx.push("main", 0.0, 1.0, cmp)?;
        }
        CheckKind::P1 => {
            let (ra, rb) = (re(a), re(b));
            let lhs = pd_pow(&cx.phi_h(&mean_eval_pd(s1, &ra, &rb)?)?, p)?;
            let rhs = pd_pow(&cx.phi_h(&mean_eval_pd(&s1.adjoint(), &ra, &rb)?)?, p)?;
            cx.push("main", 0.0, alpha_pow(k, p), Cmp::Loewner(lhs, rhs))?;
        }
        CheckKind::P2 => {
            let (ra, rb) = (re(a), re(b));
            let fa = cx.f_pd(&cx.phi_h(&ra)?)?;
            let fb = cx.f_pd(&cx.phi_h(&rb)?)?;
            let lhs = mean_eval_pd(s1, &fa, &fb)?;
            let rhs = cx.f_pd(&cx.phi_h(&mean_eval_pd(s2, &ra, &rb)?)?)?;
            cx.push("main", 0.0, k, Cmp::Loewner(lhs, rhs))?;
        }
        CheckKind::M1 => {
            let t1 = cx.phi_h(&re(&cx.mean(s1, a, b)?))?;
            let t2 = pd_inverse(&cx.phi_h(&re(&cx.mean(s2, a, b)?))?)?;
            let lhs = t1.scale(1.0 / (sec * sec)).add(&t2.scale(m * big_m));
            let k_out = bundle.phi.out_dim();
            cx.push("main", 0.0, m + big_m, Cmp::Loewner(lhs, Herm::identity(k_out)))?;
        }
        CheckKind::M2 | CheckKind::M3 => {
            let lhs = pd_pow(&re(&cx.phi(&cx.mean(s1, a, b)?)?), p)?;
            let rhs = pd_pow(&re(&cx.phi(&cx.mean(s2, a, b)?)?), p)?;
            let other = if kind == CheckKind::M2 { k.powf(p) } else { 4f64.powf(p - 2.0) * k.powf(p) };
            cx.push("main", 2.0 * p, other, Cmp::Loewner(lhs, rhs))?;
        }
        CheckKind::M4 => {
            let lhs = pd_pow(&re(&cx.phi(&cx.mean(&cx.nabla()?, a, b)?)?), p)?;
            let rhs = pd_pow(&re(&cx.phi(&cx.mean(s1, a, b)?)?), p)?;
            cx.push("main", 0.0, alpha_pow(k, p), Cmp::Loewner(lhs, rhs))?;
        }
        CheckKind::M5 => {
            let (ia, ib) = bundle.inverse_pair()?;
            let lhs = pd_pow(&cx.phi_h(&re(&cx.mean(s1, ia, ib)?))?, p)?;
            let rhs = pd_pow(&cx.phi_h(&re(&cx.mean(s2, ia, ib)?))?, p)?;
            cx.push("main", 4.0 * p, alpha_pow(k, p), Cmp::Loewner(lhs, rhs))?;
            let lhs = pd_pow(&cx.phi_h(&re(&inverse(&cx.mean(s1, a, b)?)?))?, p)?;
            let rhs = pd_pow(&cx.phi_h(&re(&inverse(&cx.mean(s2, a, b)?)?))?, p)?;
            cx.push("remark", 4.0 * p, alpha_pow(k, p), Cmp::Loewner(lhs, rhs))?;
        }
        CheckKind::M6 => {
            let (lo, hi) = cx.ordered()?;
            let x_lo = cx.mean(&lo, a, b)?;
            let x_hi = cx.mean(&hi, a, b)?;
            cx.push("a", 2.0, 1.0, Cmp::Loewner(re(&x_lo), re(&x_hi)))?;
            let cmp = Cmp::Loewner(re(&inverse(&x_hi)?), re(&inverse(&x_lo)?));
            cx.push("b_re_of_inverse", 2.0, 1.0, cmp)?;
            let cmp = Cmp::Loewner(pd_inverse(&re(&x_hi))?, pd_inverse(&re(&x_lo))?);
            cx.push("b_inverse_of_re", 2.0, 1.0, cmp)?;
        }
        CheckKind::M7 => {
            let s2sq = sec * sec;
            let y1 = cx.phi(&cx.mean(s1, a, b)?)?;
            let y2 = cx.phi(&cx.mean(s2, a, b)?)?;
            let f_y1 = cx.re_f(&y1)?;
            let f_y2 = cx.re_f(&y2)?;
            let f_scaled = cx.re_f(&scaled(&y2, k * s2sq))?;
            cx.push("link1", 2.0, 1.0, Cmp::Loewner(f_y1.clone(), f_scaled.clone()))?;
            cx.push("link2", 4.0, k, Cmp::Loewner(f_scaled.scale(s2sq), f_y2.clone()))?;
            cx.push("outer", 4.0, k, Cmp::Loewner(f_y1, f_y2))?;

            let (lo, hi) = cx.ordered()?;
            let z1 = cx.phi(&cx.mean(&lo, a, b)?)?;
            let z2 = cx.phi(&cx.mean(&hi, a, b)?)?;
            let f_z1 = cx.re_f(&z1)?;
            let f_z2 = cx.re_f(&z2)?;
            let f_scaled = cx.re_f(&scaled(&z2, s2sq))?;
            cx.push("ordered_link1", 2.0, 1.0, Cmp::Loewner(f_z1.clone(), f_scaled.clone()))?;
            cx.push("ordered_link2", 4.0, 1.0, Cmp::Loewner(f_scaled.scale(s2sq), f_z2.clone()))?;
            cx.push("ordered_outer", 4.0, 1.0, Cmp::Loewner(f_z1, f_z2))?;

            let w1 = cx.phi(&cx.mean(&cx.nabla()?, a, b)?)?;
            let w2 = cx.phi(&cx.mean(s1, a, b)?)?;
            let f_w1 = cx.re_f(&w1)?;
            let f_w2 = cx.re_f(&w2)?;
            let f_scaled = cx.re_f(&scaled(&w2, k))?;
            cx.push("nabla_link1", 2.0, 1.0, Cmp::Loewner(f_w1.clone(), f_scaled.clone()))?;
            cx.push("nabla_link2", 2.0, k, Cmp::Loewner(f_scaled.scale(s2sq), f_w2.clone()))?;
            cx.push("nabla_outer", 2.0, k, Cmp::Loewner(f_w1, f_w2))?;
        }
        CheckKind::M8 => {
            let fa = cx.f_mat(&cx.phi(a)?)?;
            let fb = cx.f_mat(&cx.phi(b)?)?;
            let lhs = re(&cx.mean(s1, &fa, &fb)?);
            let rhs = cx.re_f(&cx.phi(&cx.mean(s2, a, b)?)?)?;
            cx.push("main", 4.0, k, Cmp::Loewner(lhs.clone(), rhs))?;
            let rhs = cx.re_f(&cx.phi(&cx.mean(&cx.nabla()?, a, b)?)?)?;
            cx.push("remark", 4.0, 1.0, Cmp::Loewner(lhs, rhs))?;
        }
        CheckKind::D0 => {
            let ra = re(a);
            let ld_re = log_det_abs(ra.as_matrix())?;
            let ld = log_det_abs(a)?;
            cx.push("det_lower", 0.0, 1.0, Cmp::LogDet(ld_re, ld))?;
            cx.push("det_upper", nf, 1.0, Cmp::LogDet(ld, ld_re))?;
            let lam = descending(&ra)?;
            let sv = singular_values(a);
            cx.push("sv_lower", 0.0, 1.0, Cmp::Vector(lam.clone(), sv.clone(), index_labels(n)))?;
            cx.push("sv_upper", 2.0, 1.0, Cmp::Vector(sv, lam, index_labels(n)))?;
            let set = UiNorm::standard_set(n);
            let (nr, na) = (norms(ra.as_matrix(), &set)?, norms(a, &set)?);
            cx.push("norm_lower", 0.0, 1.0, Cmp::Vector(nr.clone(), na.clone(), norm_labels(&set)))?;
            cx.push("norm_upper", 1.0, 1.0, Cmp::Vector(na, nr, norm_labels(&set)))?;
        }
        CheckKind::D1 | CheckKind::D2 | CheckKind::D3 => {
            let (ia, ib) = bundle.inverse_pair()?;
            let nabla = cx.nabla()?;
            let pairs = [
                ("direct", cx.mean(s1, a, b)?, cx.mean(s2, a, b)?),
                ("inverse", cx.mean(s1, ia, ib)?, cx.mean(s2, ia, ib)?),
                ("nabla", cx.mean(&nabla, a, b)?, cx.mean(s1, a, b)?),
            ];
            // sec exponents per variant: det (per n), singular values, norms
            let sec_pows = match kind {
                CheckKind::D1 => [3.0 * nf, 5.0 * nf, nf],
                CheckKind::D2 => [4.0, 6.0, 2.0],
                _ => [3.0, 5.0, 1.0],
            };
            let set = UiNorm::standard_set(n);
            for ((label, x1, x2), sp) in pairs.into_iter().zip(sec_pows) {
                match kind {
                    CheckKind::D1 => cx.push(label, sp, k.powi(n as i32), Cmp::LogDet(log_det_abs(&x1)?, log_det_abs(&x2)?))?,
                    CheckKind::D2 => {
                        let cmp = Cmp::Vector(singular_values(&x1), singular_values(&x2), index_labels(n));
                        cx.push(label, sp, k, cmp)?
                    }
                    _ => cx.push(label, sp, k, Cmp::Vector(norms(&x1, &set)?, norms(&x2, &set)?, norm_labels(&set)))?,
                }
            }
        }
        CheckKind::D4 | CheckKind::D5 => {
            let id = identity(n);
            let (ia, ib) = (&id + a, &id + b);
            let (x, sp_det, sp_norm, c_det, c_norm) = if kind == CheckKind::D4 {
                (a + b, 2.0 * nf, 1.0, 1.0, 1.0)
            } else {
                (cx.mean(s1, a, b)?, 4.0 * nf, 4.0, 0.5f64.powi(n as i32), 0.5)
            };
            let rhs = log_det_abs(&ia)? + log_det_abs(&ib)?;
            cx.push("det", sp_det, c_det, Cmp::LogDet(log_det_abs(&x)?, rhs))?;
            let set = UiNorm::standard_set(n);
            let rhs: Vec<f64> = norms(&ia, &set)?.iter().zip(norms(&ib, &set)?).map(|(p, q)| p * q).collect();
            cx.push("norm", sp_norm, c_norm, Cmp::Vector(norms(&x, &set)?, rhs, norm_labels(&set)))?;
        }
        CheckKind::W0 => {
            let ra = re(a);
            let w_re = numerical_radius(ra.as_matrix())?;
            let norm_re = ra.op_norm()?;
            cx.push("radius_eq_norm", 0.0, 1.0, Cmp::Equal(w_re, norm_re))?;
            let f_norm = bundle.f.eval_real(norm_re);
            let norm_ref = cx.re_f(a)?.op_norm()?;
            cx.push("f_lower", 0.0, 1.0, Cmp::Scalar(f_norm, norm_ref))?;
            cx.push("f_upper", 2.0, 1.0, Cmp::Scalar(norm_ref, f_norm))?;
            let w = numerical_radius(a)?;
            cx.push("radius_lower", 0.0, 1.0, Cmp::Scalar(w_re, w))?;
            cx.push("radius_upper", 1.0, 1.0, Cmp::Scalar(w, w_re))?;
        }
        CheckKind::W1 => {
            let lhs = bundle.f.eval_real(numerical_radius(&cx.mean(s1, a, b)?)?);
            let rhs = numerical_radius(&cx.f_mat(&cx.mean(s2, a, b)?)?)?;
            cx.push("main", 3.0, k, Cmp::Scalar(lhs, rhs))?;
            let lhs = bundle.f.eval_real(numerical_radius(&cx.mean(&cx.nabla()?, a, b)?)?);
            let rhs = numerical_radius(&cx.f_mat(&cx.mean(s1, a, b)?)?)?;
            cx.push("remark", 1.0, k, Cmp::Scalar(lhs, rhs))?;
        }
        CheckKind::W2 => {
            let fa = cx.f_mat(&cx.phi(a)?)?;
            let fb = cx.f_mat(&cx.phi(b)?)?;
            let lhs = numerical_radius(&cx.mean(s1, &fa, &fb)?)?;
            let rhs = numerical_radius(&cx.f_mat(&cx.phi(&cx.mean(s2, a, b)?)?)?)?;
            cx.push("main", 5.0, k, Cmp::Scalar(lhs, rhs))?;
        }
    }
    Ok(cx.out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier::bundle::scalar_extremal_bundles;

    #[test]
    fn alpha_branches() {
        assert_eq!(alpha_pow(1.5, 1.0), 1.5);
        assert_eq!(alpha_pow(1.5, 2.0), 2.25);
        assert_eq!(alpha_pow(1.5, 3.0), 4.0 * 3.375);
        assert_eq!(alpha_pow(2.0, 0.5), 2f64.sqrt());
    }

    #[test]
    fn m2_kantorovich_equality() {
        let bundles = scalar_extremal_bundles(CheckKind::M2, 1.0, 4.0, Some(&[1.0])).unwrap();
        let b = bundles
            .iter()
            .find(|b| {
                b.a[(0, 0)].re == 1.0
                    && b.b[(0, 0)].re == 4.0
                    && b.sigma1.f == OpMonotone::Power { r: 1.0, v: 0.5 }
                    && b.sigma2.f == OpMonotone::Power { r: -1.0, v: 0.5 }
            })
            .unwrap();
        let parts = evaluate(CheckKind::M2, b, &Policy::default(), &ToleranceSpec::default(), &MatFnOptions::default()).unwrap();
        assert!(parts[0].pass);
        assert!(parts[0].slack.abs() < 1e-12);
        assert!((parts[0].ratio - 25.0 / 16.0).abs() < 1e-12);
    }
}
