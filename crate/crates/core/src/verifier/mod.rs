//! Registry of inequality checks, seeded trial execution, tightness and mutation runs.

mod bundle;
mod checks;
mod registry;
mod witness;

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::{MatFnOptions, ToleranceSpec};
use crate::sector::SamplerOptions;

pub use bundle::{scalar_extremal_bundles, Bundle, Cell};
pub use checks::{alpha_pow, evaluate, PartResult, Policy};
pub use registry::{parse_check_list, CheckKind, CheckTarget};
pub use witness::{hex_f64, parse_hex_f64, Witness};

/// Kantorovich constant `(M+m)² / (4mM)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KConstant {
    pub m: f64,
    #[serde(rename = "M")]
    pub big_m: f64,
    pub value: f64,
}

pub fn kantorovich(m: f64, big_m: f64) -> Result<KConstant> {
    if !(m > 0.0 && big_m >= m && big_m.is_finite()) {
        return Err(Error::domain(format!("Kantorovich constant needs 0 < m <= M, got m = {m}, M = {big_m}")));
    }
    let value = (big_m + m).powi(2) / (4.0 * m * big_m);
    Ok(KConstant { m, big_m, value })
}

/// Trial grid: every combination of dimension, angle and bounds gets `trials` draws.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Grid {
    pub dims: Vec<usize>,
    pub thetas: Vec<f64>,
    pub bounds: Vec<(f64, f64)>,
    pub trials: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            dims: vec![2, 3, 5],
            thetas: vec![0.0, std::f64::consts::FRAC_PI_6, std::f64::consts::FRAC_PI_4, 1.25],
            bounds: vec![(1.0, 2.0), (1.0, 10.0), (0.1, 1.0)],
            trials: 200,
        }
    }
}

impl Grid {
    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() || self.thetas.is_empty() || self.bounds.is_empty() {
            return Err(Error::Config("grid needs at least one dimension, angle and bound pair".into()));
        }
        if self.dims.contains(&0) {
            return Err(Error::Config("dimensions must be positive".into()));
        }
        for &t in &self.thetas {
            if !(0.0..std::f64::consts::FRAC_PI_2).contains(&t) {
                return Err(Error::Config(format!("theta {t} outside [0, pi/2)")));
            }
        }
        for &(m, big_m) in &self.bounds {
            kantorovich(m, big_m).map_err(|_| Error::Config(format!("bounds {m}:{big_m} need 0 < m <= M")))?;
        }
        Ok(())
    }

    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for &n in &self.dims {
            for &theta in &self.thetas {
                for &(m, big_m) in &self.bounds {
                    out.push(Cell { n, theta, m, big_m });
                }
            }
        }
        out
    }
}

/// Where trial inputs come from.
#[derive(Clone, Debug, PartialEq)]
pub enum Design {
    Random(Grid),
    /// Scalar configurations at the ends of `[m, M]`; see [`scalar_extremal_bundles`].
    Extremal { bounds: Vec<(f64, f64)> },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunOptions {
    pub tol: ToleranceSpec,
    pub sampler: SamplerOptions,
    pub policy: Policy,
    /// Replaces each check's own `p` grid.
    pub p_values: Option<Vec<f64>>,
}

/// Identifies a check together with the parameters drawn for one trial.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckId {
    pub kind: CheckKind,
    pub params: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub check: CheckId,
    pub cell: Cell,
    pub trial: usize,
    pub seed: u64,
    /// Exponent drawn for statements that have one.
    pub p: Option<f64>,
    pub pass: bool,
    /// Part that decided `pass`, `slack` and `ratio`: the worst failing part, or
    /// the part closest to its constant when everything passed.
    pub part: String,
    pub slack: f64,
    pub ratio: f64,
    pub constant: f64,
    pub parts: Vec<PartResult>,
    pub error: Option<String>,
    pub witness: Option<Witness>,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-trial seed from the master seed, the check and the cell coordinates, so a
/// trial's inputs do not depend on which other checks or cells are in the run.
pub fn trial_seed(master: u64, kind: CheckKind, cell: &Cell, trial: usize) -> u64 {
    let id = kind.id().bytes().fold(0u64, |h, c| (h << 8) | c as u64);
    [id, cell.n as u64, cell.theta.to_bits(), cell.m.to_bits(), cell.big_m.to_bits(), trial as u64]
        .iter()
        .fold(splitmix(master), |h, &x| splitmix(h ^ x))
}

pub const MAX_RESAMPLES: usize = 100;

fn any_failure(parts: &[PartResult]) -> bool {
    parts.iter().any(|p| !p.pass)
}

/// Evaluates `kind` on `bundle`; failures are confirmed with tighter matrix-function settings.
pub fn run_check(kind: CheckKind, bundle: &Bundle, opts: &RunOptions) -> Result<Vec<PartResult>> {
    let parts = evaluate(kind, bundle, &opts.policy, &opts.tol, &MatFnOptions::default())?;
    if !any_failure(&parts) {
        return Ok(parts);
    }
    evaluate(kind, bundle, &opts.policy, &opts.tol, &MatFnOptions::tight())
}

fn critical(parts: &[PartResult]) -> Option<&PartResult> {
    let failing = parts
        .iter()
        .filter(|p| !p.pass)
        .min_by(|x, y| (x.slack / x.threshold).total_cmp(&(y.slack / y.threshold)));
    failing.or_else(|| parts.iter().max_by(|x, y| x.utilization().total_cmp(&y.utilization())))
}

fn finish(kind: CheckKind, trial: usize, seed: u64, bundle: Bundle, parts: Vec<PartResult>) -> CheckResult {
    let crit = critical(&parts).cloned();
    let pass = !any_failure(&parts);
    let (part, slack, ratio, constant) = match &crit {
        Some(c) => (c.label.to_string(), c.slack, c.ratio, c.constant),
        None => (String::new(), 0.0, 0.0, 1.0),
    };
    let witness = (!pass).then(|| Witness {
        check: kind,
        part: part.clone(),
        seed,
        trial,
        cell: bundle.cell,
        note: format!("slack {slack:e}, ratio {ratio:e}, constant {constant:e}"),
        bundle: Some(bundle.clone()),
    });
    CheckResult {
        check: CheckId { kind, params: bundle.params(kind) },
        cell: bundle.cell,
        trial,
        seed,
        p: (!kind.p_grid().is_empty()).then_some(bundle.p),
        pass,
        part,
        slack,
        ratio,
        constant,
        parts,
        error: None,
        witness,
    }
}

fn errored(kind: CheckKind, cell: Cell, trial: usize, seed: u64, bundle: Option<Bundle>, e: Error) -> CheckResult {
    let e = Error::Trial { seed, source: Box::new(e) };
    CheckResult {
        check: CheckId { kind, params: bundle.as_ref().map(|b| b.params(kind)).unwrap_or_default() },
        cell,
        trial,
        seed,
        p: None,
        pass: false,
        part: "error".into(),
        slack: f64::NAN,
        ratio: f64::NAN,
        constant: f64::NAN,
        parts: Vec::new(),
        error: Some(e.to_string()),
        witness: Some(Witness { check: kind, part: "error".into(), seed, trial, cell, note: e.to_string(), bundle }),
    }
}

/// Draws inputs for one trial (resampling when a draw misses the hypotheses) and evaluates it.
pub fn run_trial(kind: CheckKind, cell: Cell, trial: usize, master_seed: u64, opts: &RunOptions) -> CheckResult {
    let seed = trial_seed(master_seed, kind, &cell, trial);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = None;
    for _ in 0..MAX_RESAMPLES {
        let mut bundle = match Bundle::sample(kind, cell, &mut rng, &opts.sampler) {
            Ok(b) => b,
            Err(e) => return errored(kind, cell, trial, seed, None, e),
        };
        if let Some(ps) = &opts.p_values {
            bundle.p = ps[rand::Rng::random_range(&mut rng, 0..ps.len())];
        }
        match run_check(kind, &bundle, opts) {
            Ok(parts) => return finish(kind, trial, seed, bundle, parts),
            Err(Error::HypothesisUnsatisfiable { detail, .. }) => last = Some((bundle, detail)),
            Err(e) => return errored(kind, cell, trial, seed, Some(bundle), e),
        }
    }
    let (bundle, detail) = last.expect("at least one attempt");
    let e = Error::HypothesisUnsatisfiable { attempts: MAX_RESAMPLES, detail };
    errored(kind, cell, trial, seed, Some(bundle), e)
}

fn run_bundle(kind: CheckKind, index: usize, bundle: Bundle, opts: &RunOptions) -> CheckResult {
    let seed = index as u64;
    match run_check(kind, &bundle, opts) {
        Ok(parts) => finish(kind, index, seed, bundle, parts),
        Err(e) => errored(kind, bundle.cell, index, seed, Some(bundle.clone()), e),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckSummary {
    pub check: CheckKind,
    pub trials: usize,
    pub passes: usize,
    pub failures: usize,
    /// Smallest finite slack over all trials.
    pub min_slack: f64,
    /// Largest `LHS / (constant · RHS)` over all trials.
    pub max_ratio: f64,
    pub failing_seeds: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub results: Vec<CheckResult>,
    pub summaries: Vec<CheckSummary>,
}

impl SuiteReport {
    pub fn trials(&self) -> usize {
        self.results.len()
    }

    pub fn failures(&self) -> usize {
        self.results.iter().filter(|r| !r.pass).count()
    }
}

pub fn summarize(checks: &[CheckKind], results: &[CheckResult]) -> Vec<CheckSummary> {
    checks
        .iter()
        .map(|&kind| {
            let mine: Vec<&CheckResult> = results.iter().filter(|r| r.check.kind == kind).collect();
            let passes = mine.iter().filter(|r| r.pass).count();
            let finite_slacks = mine.iter().map(|r| r.slack).filter(|s| s.is_finite());
            let ratios = mine.iter().map(|r| r.ratio / r.constant).filter(|s| s.is_finite());
            CheckSummary {
                check: kind,
                trials: mine.len(),
                passes,
                failures: mine.len() - passes,
                min_slack: finite_slacks.reduce(f64::min).unwrap_or(0.0),
                max_ratio: ratios.reduce(f64::max).unwrap_or(0.0),
                failing_seeds: mine.iter().filter(|r| !r.pass).map(|r| r.seed).collect(),
            }
        })
        .collect()
}

fn dedup(checks: &[CheckKind]) -> Vec<CheckKind> {
    let mut out: Vec<CheckKind> = Vec::new();
    for &c in checks {
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

/// Runs every check over the design. Trials run in parallel on the current rayon
/// pool; the result order (check, cell, trial) and every value are independent of
/// the thread count.
pub fn run_suite(checks: &[CheckKind], design: &Design, master_seed: u64, opts: &RunOptions) -> Result<SuiteReport> {
    let checks = dedup(checks);
    let results: Vec<CheckResult> = match design {
        Design::Random(grid) => {
            grid.validate()?;
            let cells = grid.cells();
            let tasks: Vec<(CheckKind, Cell, usize)> = checks
                .iter()
                .flat_map(|&k| cells.iter().flat_map(move |&c| (0..grid.trials).map(move |t| (k, c, t))))
                .collect();
            tasks
                .into_par_iter()
                .map(|(k, c, t)| run_trial(k, c, t, master_seed, opts))
                .collect()
        }
        Design::Extremal { bounds } => {
            let mut tasks = Vec::new();
            for &k in &checks {
                let mut index = 0;
                for &(m, big_m) in bounds {
                    for b in scalar_extremal_bundles(k, m, big_m, opts.p_values.as_deref())? {
                        tasks.push((k, index, b));
                        index += 1;
                    }
                }
            }
            tasks.into_par_iter().map(|(k, i, b)| run_bundle(k, i, b, opts)).collect()
        }
    };
    let summaries = summarize(&checks, &results);
    Ok(SuiteReport { results, summaries })
}

/// Largest observed `LHS / RHS` for one part in one cell, against the stated constant.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TightnessReport {
    pub check: CheckKind,
    pub part: String,
    pub cell: Cell,
    pub p: Option<f64>,
    pub theoretical_constant: f64,
    pub empirical_max_ratio: f64,
    pub attaining_seed: u64,
    /// `empirical_max_ratio ≤ theoretical_constant` up to the part's tolerance.
    pub within: bool,
}

pub fn tightness(kind: CheckKind, design: &Design, master_seed: u64, opts: &RunOptions) -> Result<Vec<TightnessReport>> {
    let mut opts = opts.clone();
    opts.policy = Policy { drop_sec: opts.policy.drop_sec, ..Policy::default() };
    let report = run_suite(&[kind], design, master_seed, &opts)?;
    let has_p = !kind.p_grid().is_empty();
    let mut groups: BTreeMap<(usize, String, u64), TightnessReport> = BTreeMap::new();
    let cells: Vec<Cell> = {
        let mut seen: Vec<Cell> = Vec::new();
        for r in &report.results {
            if !seen.contains(&r.cell) {
                seen.push(r.cell);
            }
        }
        seen
    };
    for r in &report.results {
        let p = r.p.unwrap_or(1.0);
        let cell_index = cells.iter().position(|c| *c == r.cell).unwrap_or(0);
        for part in &r.parts {
            let key = (cell_index, part.label.to_string(), if has_p { p.to_bits() } else { 0 });
            let entry = groups.entry(key).or_insert_with(|| TightnessReport {
                check: kind,
                part: part.label.to_string(),
                cell: r.cell,
                p: has_p.then_some(p),
                theoretical_constant: part.constant,
                empirical_max_ratio: f64::NEG_INFINITY,
                attaining_seed: r.seed,
                within: true,
            });
            if part.ratio > entry.empirical_max_ratio {
                entry.empirical_max_ratio = part.ratio;
                entry.attaining_seed = r.seed;
            }
            entry.within &= part.pass;
        }
    }
    let mut out: Vec<TightnessReport> = groups.into_values().collect();
    out.sort_by(|x, y| {
        let order = |s: &str| kind.parts().iter().position(|p| *p == s).unwrap_or(usize::MAX);
        order(&x.part).cmp(&order(&y.part))
    });
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MutationReport {
    pub check: String,
    pub factor: f64,
    pub trials: usize,
    pub violations: usize,
}

/// Reruns `target` with its constant multiplied by `factor` and counts trials in
/// which a targeted part fails.
pub fn mutation_test(
    target: &CheckTarget,
    factor: f64,
    design: &Design,
    master_seed: u64,
    opts: &RunOptions,
) -> Result<MutationReport> {
    if !(factor > 0.0 && factor.is_finite()) {
        return Err(Error::Config(format!("mutation factor must be positive, got {factor}")));
    }
    let mut opts = opts.clone();
    opts.policy = Policy { factor, target: Some(target.clone()), drop_sec: opts.policy.drop_sec };
    let report = run_suite(&[target.kind], design, master_seed, &opts)?;
    let violations = report
        .results
        .iter()
        .filter(|r| r.parts.iter().any(|p| target.matches(p.label) && !p.pass))
        .count();
    Ok(MutationReport { check: target.to_string(), factor, trials: report.trials(), violations })
}

/// Re-evaluates a witness with the given options.
pub fn replay(witness: &Witness, opts: &RunOptions) -> Result<Vec<PartResult>> {
    let bundle = witness
        .bundle
        .as_ref()
        .ok_or_else(|| Error::Config("witness carries no inputs (sampling failed before evaluation)".into()))?;
    run_check(witness.check, bundle, opts)
}
