use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// One row of the inequality registry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckKind {
    F1,
    F2,
    F3,
    F4,
    F5,
    P1,
    P2,
    M1,
    M2,
    M3,
    M4,
    M5,
    M6,
    M7,
    M8,
    D0,
    D1,
    D2,
    D3,
    D4,
    D5,
    W0,
    W1,
    W2,
}

use CheckKind::*;

const P_LOW: &[f64] = &[0.5, 1.0, 2.0];
const P_HIGH: &[f64] = &[2.0, 3.0, 4.0];
const P_ALL: &[f64] = &[0.5, 1.0, 2.0, 3.0, 4.0];
const P_ANDO_ZHAN: &[f64] = &[1.5, 2.0, 3.0];

impl CheckKind {
    pub const ALL: [CheckKind; 24] = [
        F1, F2, F3, F4, F5, P1, P2, M1, M2, M3, M4, M5, M6, M7, M8, D0, D1, D2, D3, D4, D5, W0, W1, W2,
    ];

    pub fn id(self) -> &'static str {
        match self {
            F1 => "F1",
            F2 => "F2",
            F3 => "F3",
            F4 => "F4",
            F5 => "F5",
            P1 => "P1",
            P2 => "P2",
            M1 => "M1",
            M2 => "M2",
            M3 => "M3",
            M4 => "M4",
            M5 => "M5",
            M6 => "M6",
            M7 => "M7",
            M8 => "M8",
            D0 => "D0",
            D1 => "D1",
            D2 => "D2",
            D3 => "D3",
            D4 => "D4",
            D5 => "D5",
            W0 => "W0",
            W1 => "W1",
            W2 => "W2",
        }
    }

    /// Short statement of the inequality.
    pub fn statement(self) -> &'static str {
        match self {
            F1 => "Re(A^-1) <= (Re A)^-1 <= sec^2 Re(A^-1)",
            F2 => "Re A s Re B <= Re(A s B) <= sec^2 (Re A s Re B), A s B in S_theta",
            F3 => "Phi(A)^-1 <= Phi(A^-1)",
            F4 => "||AB|| <= ||A+B||^2 / 4",
            F5 => "||A^p + B^p|| <= ||(A+B)^p||, p > 1",
            P1 => "Phi(A s B)^p <= alpha^p Phi(A s* B)^p, A, B > 0",
            P2 => "f(Phi A) s1 f(Phi B) <= K f(Phi(A s2 B)), A, B > 0",
            M1 => "cos^2 Phi Re(A s1 B) + mM (Phi Re(A s2 B))^-1 <= (M+m) I",
            M2 => "(Re Phi(A s1 B))^p <= sec^2p K^p (Re Phi(A s2 B))^p, p <= 2",
            M3 => "(Re Phi(A s1 B))^p <= sec^2p 4^(p-2) K^p (Re Phi(A s2 B))^p, p >= 2",
            M4 => "(Re Phi(A nabla_v B))^p <= alpha^p (Re Phi(A s B))^p",
            M5 => "(Phi Re(A s1 B))^p <= alpha^p sec^4p (Phi Re(A s2 B))^p, bounds on Re A^-1",
            M6 => "s1 <= s2: Re(A s1 B) <= sec^2 Re(A s2 B) and the inverted form",
            M7 => "Re f(Phi(A s1 B)) <= sec^2 Re f(K sec^2 Phi(A s2 B)) <= K sec^4 Re f(Phi(A s2 B))",
            M8 => "Re(f(Phi A) s1 f(Phi B)) <= K sec^4 Re f(Phi(A s2 B))",
            D0 => "det, singular value and norm bounds between Re A and A",
            D1 => "|det(A s1 B)| <= sec^3n K^n |det(A s2 B)|",
            D2 => "s_j(A s1 B) <= sec^4 K s_j(A s2 B)",
            D3 => "||A s1 B|| <= sec^3 K ||A s2 B||",
            D4 => "|det(A+B)| <= sec^2n |det(I+A)| |det(I+B)|, ||A+B|| <= sec ||I+A|| ||I+B||",
            D5 => "|det(A s B)| <= sec^4n / 2^n |det(I+A)| |det(I+B)|, s <= nabla",
            W0 => "w(Re A) = ||Re A||, f(||Re A||) <= ||Re f(A)|| <= sec^2 f(||Re A||), w(Re A) <= w(A) <= sec w(Re A)",
            W1 => "f(w(A s1 B)) <= sec^3 K w(f(A s2 B))",
            W2 => "w(f(Phi A) s1 f(Phi B)) <= K sec^5 w(f(Phi(A s2 B)))",
        }
    }

    /// Labels of the sub-statements evaluated on every trial.
    pub fn parts(self) -> &'static [&'static str] {
        match self {
            F1 => &["left", "right"],
            F2 => &["left", "right", "angle"],
            F3 | F4 | F5 | P1 | P2 | M1 | M2 | M3 | M4 => &["main"],
            M5 => &["main", "remark"],
            M6 => &["a", "b_re_of_inverse", "b_inverse_of_re"],
            M7 => &[
                "link1", "link2", "outer", "ordered_link1", "ordered_link2", "ordered_outer", "nabla_link1",
                "nabla_link2", "nabla_outer",
            ],
            M8 => &["main", "remark"],
            D0 => &["det_lower", "det_upper", "sv_lower", "sv_upper", "norm_lower", "norm_upper"],
            D1 | D2 | D3 => &["direct", "inverse", "nabla"],
            D4 | D5 => &["det", "norm"],
            W0 => &["radius_eq_norm", "f_lower", "f_upper", "radius_lower", "radius_upper"],
            W1 => &["main", "remark"],
            W2 => &["main"],
        }
    }

    /// Exponents `p` drawn per trial; empty when the statement has no `p`.
    pub fn p_grid(self) -> &'static [f64] {
        match self {
            F5 => P_ANDO_ZHAN,
            P1 | M4 | M5 => P_ALL,
            M2 => P_LOW,
            M3 => P_HIGH,
            _ => &[],
        }
    }

    pub fn uses_phi(self) -> bool {
        matches!(self, F3 | P1 | P2 | M1 | M2 | M3 | M4 | M5 | M7 | M8 | W2)
    }

    pub fn uses_f(self) -> bool {
        matches!(self, P2 | M7 | M8 | W0 | W1 | W2)
    }

    pub fn uses_means(self) -> bool {
        !matches!(self, F1 | F3 | F4 | F5 | D0 | D4 | W0)
    }

    /// Also draws a pair with `m I ⪯ Re A^{-1}, Re B^{-1} ⪯ M I`.
    pub fn needs_inverse_bounds(self) -> bool {
        matches!(self, M5 | D1 | D2 | D3)
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl Serialize for CheckKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

impl FromStr for CheckKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CheckKind::ALL
            .iter()
            .copied()
            .find(|k| k.id().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Config(format!("unknown check id '{s}'")))
    }
}

/// A check optionally narrowed to one part, written `M2` or `F1:right`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckTarget {
    pub kind: CheckKind,
    pub part: Option<&'static str>,
}

impl CheckTarget {
    pub fn whole(kind: CheckKind) -> Self {
        CheckTarget { kind, part: None }
    }

    pub fn matches(&self, part: &str) -> bool {
        self.part.is_none_or(|p| p == part)
    }
}

impl FromStr for CheckTarget {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (id, part) = match s.split_once(':') {
            Some((id, part)) => (id, Some(part.trim())),
            None => (s, None),
        };
        let kind: CheckKind = id.parse()?;
        let part = match part {
            None => None,
            Some(p) => Some(
                *kind
                    .parts()
                    .iter()
                    .find(|q| **q == p)
                    .ok_or_else(|| Error::Config(format!("check {kind} has no part '{p}'")))?,
            ),
        };
        Ok(CheckTarget { kind, part })
    }
}

impl fmt::Display for CheckTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.part {
            Some(p) => write!(f, "{}:{p}", self.kind),
            None => write!(f, "{}", self.kind),
        }
    }
}

/// Parses a comma list of check ids; `all` selects the whole registry.
pub fn parse_check_list(s: &str) -> Result<Vec<CheckKind>> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(CheckKind::ALL.to_vec());
    }
    let list: Vec<CheckKind> = s.split(',').map(str::parse).collect::<Result<_>>()?;
    if list.is_empty() {
        return Err(Error::Config("empty check list".into()));
    }
    Ok(list)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for k in CheckKind::ALL {
            assert_eq!(k.id().parse::<CheckKind>().unwrap(), k);
            assert!(!k.parts().is_empty());
        }
        assert!("BOGUS".parse::<CheckKind>().is_err());
    }

    #[test]
    fn targets() {
        let t: CheckTarget = "F1:right".parse().unwrap();
        assert_eq!(t.kind, F1);
        assert!(t.matches("right") && !t.matches("left"));
        assert!("F1:middle".parse::<CheckTarget>().is_err());
        assert_eq!(t.to_string(), "F1:right");
    }

    #[test]
    fn check_lists() {
        assert_eq!(parse_check_list("all").unwrap().len(), 24);
        assert_eq!(parse_check_list("F1,m2").unwrap(), vec![F1, M2]);
        assert!(parse_check_list("F1,BOGUS").is_err());
    }
}
