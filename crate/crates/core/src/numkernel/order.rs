use super::Herm;
use crate::error::{Error, Result};

/// Tolerance for semidefinite comparisons: a difference passes when its
/// smallest eigenvalue is at least `-(rel * scale + abs)`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ToleranceSpec {
    pub rel: f64,
    pub abs: f64,
}

impl Default for ToleranceSpec {
    fn default() -> Self {
        ToleranceSpec { rel: 1e-8, abs: 1e-10 }
    }
}

impl ToleranceSpec {
    pub fn threshold(&self, scale: f64) -> f64 {
        self.rel * scale + self.abs
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Verdict {
    pub pass: bool,
    /// `λ_min(G − H)`.
    pub slack: f64,
    /// Allowed negative excursion of the slack.
    pub threshold: f64,
}

/// Decides `H ⪯ G`.
pub fn loewner_leq(h: &Herm, g: &Herm, tol: &ToleranceSpec) -> Result<Verdict> {
    if h.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: g.dim(),
        });
    }
    let slack = g.sub(h).min_eig()?;
    let scale = g.op_norm()?.max(h.op_norm()?);
    let threshold = tol.threshold(scale);
    Ok(Verdict {
        pass: slack >= -threshold,
        slack,
        threshold,
    })
}
