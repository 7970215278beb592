//! Positive unital linear maps `Φ : M_n → M_k` from a fixed catalog.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::numkernel::{c64, identity, inverse, loewner_leq, CMatrix, Herm, ToleranceSpec, Verdict};
use crate::sector::{haar_unitary, random_hermitian};

#[derive(Clone, Debug, PartialEq)]
pub enum MapKind {
    Identity,
    /// `X ↦ (tr X / n) I_k`.
    NormalizedTrace,
    /// Keeps the diagonal blocks of the given partition.
    Pinching { blocks: Vec<usize> },
    /// `X ↦ U X U*`.
    UnitaryConj { u: CMatrix },
    /// `X ↦ V* X V` for an `n × k` isometry `V`.
    Compression { v: CMatrix },
    /// `X ↦ C ∘ X` for a PSD `C` with unit diagonal.
    SchurHadamard { c: CMatrix },
    ConvexCombo { parts: Vec<(f64, PULMap)> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PULMap {
    kind: MapKind,
    in_dim: usize,
    out_dim: usize,
}

const STRUCTURE_TOL: f64 = 1e-12;

impl PULMap {
    pub fn identity(n: usize) -> Self {
        PULMap { kind: MapKind::Identity, in_dim: n, out_dim: n }
    }

    pub fn normalized_trace(n: usize, k: usize) -> Self {
        PULMap { kind: MapKind::NormalizedTrace, in_dim: n, out_dim: k }
    }

    pub fn pinching(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(Error::domain("pinching blocks must be positive"));
        }
        let n = blocks.iter().sum();
        Ok(PULMap { kind: MapKind::Pinching { blocks }, in_dim: n, out_dim: n })
    }

    pub fn unitary_conj(u: CMatrix) -> Result<Self> {
        let n = u.nrows();
        if u.ncols() != n || (u.adjoint() * &u - identity(n)).norm() > STRUCTURE_TOL * n as f64 {
            return Err(Error::domain("conjugating matrix is not unitary"));
        }
        Ok(PULMap { kind: MapKind::UnitaryConj { u }, in_dim: n, out_dim: n })
    }

    pub fn compression(v: CMatrix) -> Result<Self> {
        let (n, k) = v.shape();
        if k == 0 || k > n || (v.adjoint() * &v - identity(k)).norm() > STRUCTURE_TOL * n as f64 {
            return Err(Error::domain("compression matrix is not an isometry"));
        }
        Ok(PULMap { kind: MapKind::Compression { v }, in_dim: n, out_dim: k })
    }

    pub fn schur_hadamard(c: CMatrix) -> Result<Self> {
        let n = c.nrows();
        if c.ncols() != n {
            return Err(Error::domain("Schur multiplier must be square"));
        }
        if (0..n).any(|i| c[(i, i)] != c64(1.0, 0.0)) {
            return Err(Error::domain("Schur multiplier must have unit diagonal"));
        }
        let h = Herm::from_matrix(&c);
        if (h.as_matrix() - &c).norm() > STRUCTURE_TOL * n as f64 || h.min_eig()? < -STRUCTURE_TOL {
            return Err(Error::domain("Schur multiplier must be positive semidefinite"));
        }
        Ok(PULMap { kind: MapKind::SchurHadamard { c }, in_dim: n, out_dim: n })
    }

    pub fn convex_combo(parts: Vec<(f64, PULMap)>) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::domain("empty convex combination"))?;
        let (n, k) = (first.1.in_dim, first.1.out_dim);
        if parts.iter().any(|(w, p)| *w < 0.0 || p.in_dim != n || p.out_dim != k) {
            return Err(Error::domain("convex combination needs nonnegative weights and matching dimensions"));
        }
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!("convex weights sum to {total}")));
        }
        Ok(PULMap { kind: MapKind::ConvexCombo { parts }, in_dim: n, out_dim: k })
    }

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    fn apply_raw(&self, x: &CMatrix) -> CMatrix {
        match &self.kind {
            MapKind::Identity => x.clone(),
            MapKind::NormalizedTrace => identity(self.out_dim) * (x.trace() / self.in_dim as f64),
            MapKind::Pinching { blocks } => {
                let mut out = CMatrix::zeros(self.in_dim, self.in_dim);
                let mut start = 0;
                for &b in blocks {
                    out.view_mut((start, start), (b, b)).copy_from(&x.view((start, start), (b, b)));
                    start += b;
                }
                out
            }
            MapKind::UnitaryConj { u } => u * x * u.adjoint(),
            MapKind::Compression { v } => v.adjoint() * x * v,
            MapKind::SchurHadamard { c } => c.component_mul(x),
            MapKind::ConvexCombo { parts } => {
                let mut out = CMatrix::zeros(self.out_dim, self.out_dim);
                for (w, p) in parts {
                    out += p.apply_raw(x) * c64(*w, 0.0);
                }
                out
            }
        }
    }

    pub fn apply(&self, x: &CMatrix) -> Result<CMatrix> {
        if x.nrows() != self.in_dim || x.ncols() != self.in_dim {
            return Err(Error::DimensionMismatch { expected: self.in_dim, got: x.nrows() });
        }
        let y = self.apply_raw(x);
        if is_exactly_hermitian(x) {
            Ok(Herm::from_matrix(&y).into_matrix())
        } else {
            Ok(y)
        }
    }

    pub fn apply_herm(&self, h: &Herm) -> Result<Herm> {
        Ok(Herm::from_matrix(&self.apply(h.as_matrix())?))
    }

    /// `Σ_{ij} E_ij ⊗ Φ(E_ij)`.
    pub fn choi_matrix(&self) -> CMatrix {
        let (n, k) = (self.in_dim, self.out_dim);
        let mut choi = CMatrix::zeros(n * k, n * k);
        for i in 0..n {
            for j in 0..n {
                let mut e = CMatrix::zeros(n, n);
                e[(i, j)] = c64(1.0, 0.0);
                choi.view_mut((i * k, j * k), (k, k)).copy_from(&self.apply_raw(&e));
            }
        }
        choi
    }

    /// `‖Φ(I) − I‖_F`.
    pub fn unitality_defect(&self) -> f64 {
        (self.apply_raw(&identity(self.in_dim)) - identity(self.out_dim)).norm()
    }

    /// Smallest eigenvalue of `Φ(P)` over random PSD inputs `P` of unit trace.
    pub fn positivity_probe<R: Rng + ?Sized>(&self, trials: usize, rng: &mut R) -> Result<f64> {
        let mut worst = f64::INFINITY;
        for t in 0..trials {
            let g = random_hermitian(self.in_dim, rng).into_matrix();
            let mut p = &g * g.adjoint();
            if t % 2 == 1 {
                // rank-one inputs probe the extreme rays of the PSD cone
                let x = g.column(0).clone_owned();
                p = &x * x.adjoint();
            }
            let p = Herm::from_matrix(&(p.clone() / p.trace()));
            worst = worst.min(self.apply_herm(&p)?.min_eig()?);
        }
        Ok(worst)
    }
}

fn is_exactly_hermitian(x: &CMatrix) -> bool {
    let n = x.nrows();
    (0..n).all(|i| (i..n).all(|j| x[(i, j)] == x[(j, i)].conj()))
}

/// Verifies the Choi matrix is PSD to `-1e-10`; returns its smallest eigenvalue.
pub fn choi_check(phi: &PULMap) -> Result<f64> {
    let min_eig = Herm::from_matrix(&phi.choi_matrix()).min_eig()?;
    if min_eig < -1e-10 {
        return Err(Error::ChoiNotPsd { min_eig });
    }
    Ok(min_eig)
}

/// `Φ(A)^{-1} ⪯ Φ(A^{-1})`.
pub fn choi_inequality_check(phi: &PULMap, a: &Herm, tol: &ToleranceSpec) -> Result<Verdict> {
    let lhs = Herm::from_matrix(&inverse(&phi.apply(a.as_matrix())?)?);
    let rhs = phi.apply_herm(&Herm::from_matrix(&inverse(a.as_matrix())?))?;
    loewner_leq(&lhs, &rhs, tol)
}

/// Catalog entry; random parameters are drawn by [`MapSpec::instantiate`].
#[derive(Clone, Debug, PartialEq)]
pub enum MapSpec {
    Identity,
    Trace { k: Option<usize> },
    Pinch { blocks: Option<Vec<usize>> },
    Unitary,
    Compress { k: Option<usize> },
    Schur,
    Convex,
}

impl MapSpec {
    pub fn catalog() -> Vec<MapSpec> {
        vec![
            MapSpec::Identity,
            MapSpec::Trace { k: None },
            MapSpec::Pinch { blocks: None },
            MapSpec::Unitary,
            MapSpec::Compress { k: None },
            MapSpec::Schur,
            MapSpec::Convex,
        ]
    }

    pub fn instantiate<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<PULMap> {
        match self {
            MapSpec::Identity => Ok(PULMap::identity(n)),
            MapSpec::Trace { k } => Ok(PULMap::normalized_trace(n, k.unwrap_or(n))),
            MapSpec::Pinch { blocks } => {
                let blocks = match blocks {
                    Some(b) => b.clone(),
                    None => random_partition(n, rng),
                };
                if blocks.iter().sum::<usize>() != n {
                    return Err(Error::Config(format!("pinching blocks {blocks:?} do not sum to {n}")));
                }
                PULMap::pinching(blocks)
            }
            MapSpec::Unitary => PULMap::unitary_conj(haar_unitary(n, rng)),
            MapSpec::Compress { k } => {
                let k = match k {
                    Some(k) => *k,
                    None if n == 1 => 1,
                    None => rng.random_range(1..n),
                };
                if k == 0 || k > n {
                    return Err(Error::Config(format!("compression to {k} from {n}")));
                }
                let u = haar_unitary(n, rng);
                PULMap::compression(u.columns(0, k).clone_owned())
            }
            MapSpec::Schur => PULMap::schur_hadamard(random_correlation(n, rng)),
            MapSpec::Convex => {
                let pool = [MapSpec::Identity, MapSpec::Trace { k: None }, MapSpec::Pinch { blocks: None }, MapSpec::Unitary, MapSpec::Schur];
                let count = 2 + rng.random_range(0..2);
                let raw: Vec<f64> = (0..count).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
                let total: f64 = raw.iter().sum();
                let mut parts = Vec::with_capacity(count);
                let mut acc = 0.0;
                for (i, w) in raw.iter().enumerate() {
                    let w = if i + 1 == count { 1.0 - acc } else { w / total };
                    acc += w;
                    let spec = &pool[rng.random_range(0..pool.len())];
                    parts.push((w, spec.instantiate(n, rng)?));
                }
                PULMap::convex_combo(parts)
            }
        }
    }
}

fn random_partition<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    if n == 1 {
        return vec![1];
    }
    let mut cuts: Vec<usize> = (1..n).filter(|_| rng.random::<bool>()).collect();
    if cuts.is_empty() {
        cuts.push(rng.random_range(1..n));
    }
    let mut blocks = Vec::new();
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(n)) {
        blocks.push(c - prev);
        prev = c;
    }
    blocks
}

/// Random correlation matrix (PSD, unit diagonal).
fn random_correlation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = random_hermitian(n, rng).into_matrix();
    let w = CMatrix::from_fn(n, n, |i, j| g[(i, j)] + g[(j, i)] * c64(0.0, 0.5));
    let p = &w * w.adjoint();
    let d: Vec<f64> = (0..n).map(|i| p[(i, i)].re.sqrt()).collect();
    let mut c = CMatrix::from_fn(n, n, |i, j| p[(i, j)] / (d[i] * d[j]));
    for i in 0..n {
        c[(i, i)] = c64(1.0, 0.0);
        for j in (i + 1)..n {
            c[(j, i)] = c[(i, j)].conj();
        }
    }
    c
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapSpec::Identity => f.write_str("identity"),
            MapSpec::Trace { k: None } => f.write_str("trace"),
            MapSpec::Trace { k: Some(k) } => write!(f, "trace:k={k}"),
            MapSpec::Pinch { blocks: None } => f.write_str("pinch"),
            MapSpec::Pinch { blocks: Some(b) } => {
                let joined: Vec<String> = b.iter().map(|x| x.to_string()).collect();
                write!(f, "pinch:blocks={}", joined.join("+"))
            }
            MapSpec::Unitary => f.write_str("unitary"),
            MapSpec::Compress { k: None } => f.write_str("compress"),
            MapSpec::Compress { k: Some(k) } => write!(f, "compress:k={k}"),
            MapSpec::Schur => f.write_str("schur"),
            MapSpec::Convex => f.write_str("convex"),
        }
    }
}

impl FromStr for MapSpec {
    type Err = Error;

    /// Catalog ids: `identity`, `trace[:k=K]`, `pinch[:blocks=2+3]`, `unitary`,
    /// `compress[:k=K]`, `schur`, `convex`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = s.trim().split_once(':').unwrap_or((s.trim(), ""));
        let value = |key: &str| -> Result<Option<&str>> {
            if arg.is_empty() {
                return Ok(None);
            }
            arg.strip_prefix(key)
                .and_then(|r| r.strip_prefix('='))
                .map(Some)
                .ok_or_else(|| Error::Config(format!("map '{name}' expects '{key}=...', got '{arg}'")))
        };
        let count = |x: &str| -> Result<usize> {
            x.parse().map_err(|_| Error::Config(format!("bad count '{x}' in map id '{s}'")))
        };
        Ok(match name {
            "identity" | "id" if arg.is_empty() => MapSpec::Identity,
            "trace" => MapSpec::Trace { k: value("k")?.map(count).transpose()? },
            "pinch" => MapSpec::Pinch {
                blocks: value("blocks")?.map(|b| b.split('+').map(count).collect()).transpose()?,
            },
            "unitary" if arg.is_empty() => MapSpec::Unitary,
            "compress" => MapSpec::Compress { k: value("k")?.map(count).transpose()? },
            "schur" if arg.is_empty() => MapSpec::Schur,
            "convex" if arg.is_empty() => MapSpec::Convex,
            _ => return Err(Error::Config(format!("unknown map id '{s}'"))),
        })
    }
}

impl fmt::Display for PULMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            MapKind::Identity => write!(f, "identity"),
            MapKind::NormalizedTrace => write!(f, "trace:k={}", self.out_dim),
            MapKind::Pinching { blocks } => {
                let joined: Vec<String> = blocks.iter().map(|x| x.to_string()).collect();
                write!(f, "pinch:blocks={}", joined.join("+"))
            }
            MapKind::UnitaryConj { .. } => write!(f, "unitary"),
            MapKind::Compression { .. } => write!(f, "compress:k={}", self.out_dim),
            MapKind::SchurHadamard { .. } => write!(f, "schur"),
            MapKind::ConvexCombo { parts } => {
                write!(f, "convex[")?;
                for (i, (w, p)) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    write!(f, "{w:.3}*{p}")?;
                }
                write!(f, "]")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{diag_real, dist_f};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trace_of_diagonal() {
        let y = PULMap::normalized_trace(2, 2).apply(&diag_real(&[1.0, 3.0])).unwrap();
        assert_eq!(y, diag_real(&[2.0, 2.0]));
    }

    #[test]
    fn unitary_conjugation_fixes_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let phi = MapSpec::Unitary.instantiate(3, &mut rng).unwrap();
        assert!(dist_f(&phi.apply(&identity(3)).unwrap(), &identity(3)) < 1e-14);
    }

    #[test]
    fn corner_compression() {
        let v = identity(3).columns(0, 2).clone_owned();
        let y = PULMap::compression(v).unwrap().apply(&diag_real(&[1.0, 2.0, 3.0])).unwrap();
        assert_eq!(y, diag_real(&[1.0, 2.0]));
    }

    #[test]
    fn choi_of_basic_maps() {
        assert!(choi_check(&PULMap::identity(2)).is_ok());
        assert!(choi_check(&PULMap::normalized_trace(2, 2)).is_ok());
        let ones = CMatrix::from_element(3, 3, c64(1.0, 0.0));
        let schur = PULMap::schur_hadamard(ones).unwrap();
        assert_eq!(schur.choi_matrix(), PULMap::identity(3).choi_matrix());
    }

    #[test]
    fn choi_inequality_for_trace() {
        let v = choi_inequality_check(
            &PULMap::normalized_trace(2, 2),
            &Herm::from_diag(&[1.0, 4.0]),
            &ToleranceSpec::default(),
        )
        .unwrap();
        assert!(v.pass);
        assert!((v.slack - 0.225).abs() < 1e-15);
    }

    #[test]
    fn choi_inequality_is_equality_for_identity() {
        let v = choi_inequality_check(&PULMap::identity(2), &Herm::from_diag(&[1.0, 4.0]), &ToleranceSpec::default()).unwrap();
        assert!(v.pass && v.slack.abs() < 1e-15);
    }

    #[test]
    fn malformed_parameters_rejected() {
        // non-unit diagonal multiplier
        assert!(PULMap::schur_hadamard(diag_real(&[2.0, 1.0])).is_err());
        assert!(PULMap::pinching(vec![2, 0]).is_err());
    }

    #[test]
    fn ids_parse_and_print() {
        for id in ["identity", "trace", "trace:k=2", "pinch:blocks=2+3", "unitary", "compress:k=2", "schur", "convex"] {
            let spec: MapSpec = id.parse().unwrap();
            assert_eq!(spec.to_string(), id);
        }
        assert!("pinch:k=2".parse::<MapSpec>().is_err());
        assert!("warp".parse::<MapSpec>().is_err());
    }

    #[test]
    fn pinch_blocks_must_cover_dimension() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let spec: MapSpec = "pinch:blocks=2+3".parse().unwrap();
        assert!(spec.instantiate(5, &mut rng).is_ok());
        assert!(spec.instantiate(4, &mut rng).is_err());
    }

    #[test]
    fn dimension_mismatch_on_apply() {
        assert!(PULMap::identity(2).apply(&identity(3)).is_err());
    }
}
