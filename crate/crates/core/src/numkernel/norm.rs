use super::{ensure_square, CMatrix};
use crate::error::{Error, Result};

/// Unitarily invariant norms, all computed from singular values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum UiNorm {
    Operator,
    Trace,
    Frobenius,
    Schatten(f64),
    KyFan(usize),
}

impl UiNorm {
    pub fn label(&self) -> String {
        match self {
            UiNorm::Operator => "operator".into(),
            UiNorm::Trace => "trace".into(),
            UiNorm::Frobenius => "frobenius".into(),
            UiNorm::Schatten(p) => format!("schatten{p}"),
            UiNorm::KyFan(k) => format!("kyfan{k}"),
        }
    }

    /// The norm set used by the norm checks at dimension `n`.
    pub fn standard_set(n: usize) -> Vec<UiNorm> {
        let mut set = vec![
            UiNorm::Operator,
            UiNorm::Trace,
            UiNorm::Frobenius,
            UiNorm::Schatten(3.0),
        ];
        if n >= 2 {
            set.push(UiNorm::KyFan(2));
        }
        set
    }
}

/// Singular values, descending.
pub fn singular_values(x: &CMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = x.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn ui_norm(x: &CMatrix, which: UiNorm) -> Result<f64> {
    let n = ensure_square(x)?;
    let s = singular_values(x);
    norm_of_singular_values(&s, which, n)
}

pub(crate) fn norm_of_singular_values(s: &[f64], which: UiNorm, n: usize) -> Result<f64> {
    Ok(match which {
        UiNorm::Operator => s[0],
        UiNorm::Trace => s.iter().sum(),
        UiNorm::Frobenius => s.iter().map(|v| v * v).sum::<f64>().sqrt(),
        UiNorm::Schatten(p) => {
            if !(p >= 1.0) {
                return Err(Error::domain(format!("Schatten index {p} < 1")));
            }
            s.iter().map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p)
        }
        UiNorm::KyFan(k) => {
            if k == 0 || k > n {
                return Err(Error::domain(format!("Ky Fan index {k} outside 1..={n}")));
            }
            s[..k].iter().sum()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{c64, diag_real, CMatrix};

    #[test]
    fn operator_norm_of_diagonal() {
        assert!((ui_norm(&diag_real(&[3.0, -1.0]), UiNorm::Operator).unwrap() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn trace_norm_of_nilpotent() {
        let mut x = CMatrix::zeros(2, 2);
        x[(0, 1)] = c64(1.0, 0.0);
        assert!((ui_norm(&x, UiNorm::Trace).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn frobenius_matches_entrywise_formula() {
        let x = CMatrix::from_fn(4, 4, |i, j| c64((i * 3 + j) as f64 * 0.37 - 1.0, (j as f64 - i as f64) * 0.21));
        let direct = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let via_sv = ui_norm(&x, UiNorm::Frobenius).unwrap();
        assert!((direct - via_sv).abs() <= 1e-12 * direct);
    }

    #[test]
    fn bad_indices_rejected() {
        let x = diag_real(&[1.0, 2.0]);
        assert!(ui_norm(&x, UiNorm::KyFan(3)).is_err());
        assert!(ui_norm(&x, UiNorm::Schatten(0.5)).is_err());
    }
}
