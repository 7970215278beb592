//! Command-line front end: `verify`, `tightness`, `mutate`, `range` and `replay`.
//!
//! Exit status: 0 when everything holds, 1 when some inequality failed, 2 on
//! configuration, parse or I/O errors. Configuration is validated before any
//! output file is created.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::numkernel::{c64, CMatrix, ToleranceSpec, C64};
use crate::sector::{range_boundary, SamplerOptions};
use crate::verifier::{
    mutation_test, parse_check_list, replay, run_suite, tightness, CheckKind, CheckTarget, Design, Grid, Policy,
    RunOptions, SuiteReport, Witness,
};

pub const REPORT_SCHEMA: &str = "sectorlab-report/1";
pub const TIGHTNESS_SCHEMA: &str = "sectorlab-tightness/1";
pub const MUTATION_SCHEMA: &str = "sectorlab-mutation/1";
pub const THREADS_ENV: &str = "SECTORLAB_THREADS";

#[derive(Parser, Debug)]
#[command(name = "sectorlab", version, about = "Seeded verification of sector-matrix mean inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run checks over the grid; writes report.json, slack.csv and witness-*.txt.
    Verify(RunArgs),
    /// Largest observed ratio against each stated constant; writes tightness.json.
    Tightness(RunArgs),
    /// Weaken constants by the given factors and count violations; writes mutation.json.
    Mutate {
        #[command(flatten)]
        run: RunArgs,
        /// Comma list of constant multipliers.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        factor: Vec<f64>,
    },
    /// Boundary of the numerical range of a matrix read from a text file, as CSV.
    Range {
        /// Matrix file: first line n, then n lines of n `re+imj` tokens.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 256)]
        resolution: usize,
        /// Directory for range.csv; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-evaluate a witness file.
    Replay {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        tol_rel: Option<f64>,
        #[arg(long)]
        tol_abs: Option<f64>,
    },
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Check ids, comma separated, or `all`. `mutate` also takes `ID:part`.
    #[arg(long, default_value = "all")]
    checks: String,
    /// Master seed; required.
    #[arg(long)]
    seed: Option<u64>,
    /// Trials per grid cell.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    /// Angles in radians; `pi/6` style fractions are accepted.
    #[arg(long, value_delimiter = ',', value_parser = parse_angle)]
    thetas: Option<Vec<f64>>,
    /// Bounds `m:M`, comma separated.
    #[arg(long, value_delimiter = ',', value_parser = parse_bound)]
    bounds: Option<Vec<(f64, f64)>>,
    #[arg(long)]
    tol_rel: Option<f64>,
    #[arg(long)]
    tol_abs: Option<f64>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Use the scalar endpoint configurations instead of random samples.
    #[arg(long)]
    extremal: bool,
    /// Replace every check's exponent grid.
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    /// Fraction of samples placed on the sector boundary.
    #[arg(long)]
    boundary_fraction: Option<f64>,
    /// Replace sec(theta) by 1 in every constant.
    #[arg(long)]
    drop_sec: bool,
}

/// Parses `0.5`, `pi`, `pi/6`, `3*pi/8`.
pub fn parse_angle(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    let bad = || format!("invalid angle '{s}'");
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim().parse::<f64>().map_err(|_| bad())?)),
        None => (s, None),
    };
    let num = if let Some(k) = num.strip_suffix("pi") {
        let k = k.trim().trim_end_matches('*').trim();
        // bit-identical to the std constants, which the default grid uses
        if k.is_empty() {
            use std::f64::consts::*;
            let exact = match den {
                Some(2.0) => Some(FRAC_PI_2),
                Some(3.0) => Some(FRAC_PI_3),
                Some(4.0) => Some(FRAC_PI_4),
                Some(6.0) => Some(FRAC_PI_6),
                Some(8.0) => Some(FRAC_PI_8),
                _ => None,
            };
            if let Some(x) = exact {
                return Ok(x);
            }
        }
        let k = if k.is_empty() { 1.0 } else { k.parse::<f64>().map_err(|_| bad())? };
        k * std::f64::consts::PI
    } else {
        num.parse::<f64>().map_err(|_| bad())?
    };
    let x = num / den.unwrap_or(1.0);
    if x.is_finite() {
        Ok(x)
    } else {
        Err(bad())
    }
}

/// Parses `m:M`.
pub fn parse_bound(s: &str) -> std::result::Result<(f64, f64), String> {
    let bad = || format!("invalid bound '{s}', expected m:M");
    let (m, big_m) = s.split_once(':').ok_or_else(bad)?;
    Ok((m.trim().parse().map_err(|_| bad())?, big_m.trim().parse().map_err(|_| bad())?))
}

fn parse_complex(tok: &str) -> Option<C64> {
    let z = match tok.strip_suffix(['j', 'i']) {
        Some(body) => {
            let b = body.as_bytes();
            let split = (1..b.len()).rev().find(|&k| matches!(b[k], b'+' | b'-') && !matches!(b[k - 1], b'e' | b'E'));
            let (re, im) = match split {
                Some(k) => (body[..k].parse().ok()?, &body[k..]),
                None => (0.0, body),
            };
            let im = match im {
                "" | "+" => 1.0,
                "-" => -1.0,
                s => s.parse().ok()?,
            };
            c64(re, im)
        }
        None => c64(tok.parse().ok()?, 0.0),
    };
    (z.re.is_finite() && z.im.is_finite()).then_some(z)
}

/// Reads the plain-text matrix format: a line with `n`, then `n` rows of `n`
/// whitespace-separated tokens such as `1`, `-2.5j` or `1e-3+4j`.
pub fn parse_matrix(text: &str) -> Result<CMatrix> {
    let err = |line: usize, column: usize, message: String| Error::Parse { line, column, message };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (hl, header) = lines.next().ok_or_else(|| err(1, 1, "empty input".into()))?;
    let col0 = |l: &str| l.len() - l.trim_start().len() + 1;
    let n: usize = header
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| err(hl, col0(header), format!("expected a positive dimension, found '{}'", header.trim())))?;
    let mut m = CMatrix::zeros(n, n);
    let mut row = 0;
    for (ln, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        if row == n {
            return Err(err(ln, col0(line), format!("more than {n} rows")));
        }
        let mut count = 0;
        let mut rest = line;
        let mut offset = 0;
        while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
            let len = rest[start..].find(char::is_whitespace).unwrap_or(rest.len() - start);
            let tok = &rest[start..start + len];
            let column = offset + start + 1;
            if count == n {
                return Err(err(ln, column, format!("more than {n} entries in row")));
            }
            m[(row, count)] = parse_complex(tok).ok_or_else(|| err(ln, column, format!("invalid number '{tok}'")))?;
            count += 1;
            offset += start + len;
            rest = &rest[start + len..];
        }
        if count < n {
            return Err(err(ln, line.len() + 1, format!("expected {n} entries, found {count}")));
        }
        row += 1;
    }
    if row < n {
        return Err(err(text.lines().count() + 1, 1, format!("expected {n} rows, found {row}")));
    }
    Ok(m)
}

#[derive(Serialize)]
struct SlackRow<'a> {
    check: &'a str,
    part: &'a str,
    seed: u64,
    trial: usize,
    n: usize,
    theta: f64,
    m: f64,
    #[serde(rename = "M")]
    big_m: f64,
    params: &'a str,
    slack: f64,
    ratio: f64,
    constant: f64,
    pass: bool,
}

/// One row per trial, in run order.
pub fn write_slack_csv<W: Write>(report: &SuiteReport, w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for r in &report.results {
        wtr.serialize(SlackRow {
            check: r.check.kind.id(),
            part: &r.part,
            seed: r.seed,
            trial: r.trial,
            n: r.cell.n,
            theta: r.cell.theta,
            m: r.cell.m,
            big_m: r.cell.big_m,
            params: &r.check.params,
            slack: r.slack,
            ratio: r.ratio,
            constant: r.constant,
            pass: r.pass,
        })
        .map_err(csv_error)?;
    }
    wtr.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e),
        other => Error::Config(format!("csv: {other:?}")),
    }
}

pub fn witness_file_name(w: &Witness) -> String {
    format!("witness-{}-{:016x}.txt", w.check, w.seed)
}

struct Prepared {
    checks: String,
    seed: u64,
    design: Design,
    opts: RunOptions,
    out: PathBuf,
}

impl RunArgs {
    fn prepare(&self) -> Result<Prepared> {
        let seed = self.seed.ok_or_else(|| Error::Config("--seed is required".into()))?;
        let mut tol = ToleranceSpec::default();
        if let Some(r) = self.tol_rel {
            tol.rel = r;
        }
        if let Some(a) = self.tol_abs {
            tol.abs = a;
        }
        if !(tol.rel >= 0.0 && tol.abs >= 0.0 && tol.rel.is_finite() && tol.abs.is_finite()) {
            return Err(Error::Config("tolerances must be finite and non-negative".into()));
        }
        let mut sampler = SamplerOptions::default();
        if let Some(f) = self.boundary_fraction {
            if !(0.0..=1.0).contains(&f) {
                return Err(Error::Config(format!("boundary fraction {f} outside [0, 1]")));
            }
            sampler.boundary_fraction = f;
        }
        if let Some(ps) = &self.p {
            if ps.is_empty() || ps.iter().any(|p| !(*p > 0.0 && p.is_finite())) {
                return Err(Error::Config("exponents must be positive".into()));
            }
        }
        let defaults = Grid::default();
        let grid = Grid {
            dims: self.dims.clone().unwrap_or(defaults.dims),
            thetas: self.thetas.clone().unwrap_or(defaults.thetas),
            bounds: self.bounds.clone().unwrap_or(defaults.bounds),
            trials: self.trials.unwrap_or(defaults.trials),
        };
        grid.validate()?;
        let design = if self.extremal { Design::Extremal { bounds: grid.bounds } } else { Design::Random(grid) };
        let opts = RunOptions {
            tol,
            sampler,
            policy: Policy { drop_sec: self.drop_sec, ..Policy::default() },
            p_values: self.p.clone(),
        };
        Ok(Prepared { checks: self.checks.clone(), seed, design, opts, out: self.out.clone() })
    }
}

fn design_json(d: &Design) -> serde_json::Value {
    match d {
        Design::Random(g) => json!({
            "kind": "random",
            "dims": g.dims,
            "thetas": g.thetas,
            "bounds": g.bounds,
            "trials": g.trials,
        }),
        Design::Extremal { bounds } => json!({ "kind": "extremal", "bounds": bounds }),
    }
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Config(e.to_string()))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn cmd_verify(args: &RunArgs, stdout: &mut dyn Write) -> Result<i32> {
    let p = args.prepare()?;
    let checks = parse_check_list(&p.checks)?;
    let report = run_suite(&checks, &p.design, p.seed, &p.opts)?;
    fs::create_dir_all(&p.out)?;
    let mut witnesses = Vec::new();
    for r in report.results.iter().filter(|r| !r.pass) {
        if let Some(w) = &r.witness {
            let name = witness_file_name(w);
            w.write_to(&p.out.join(&name))?;
            witnesses.push(name);
        }
    }
    let failures = report.failures();
    write_json(
        &p.out.join("report.json"),
        &json!({
            "schema": REPORT_SCHEMA,
            "seed": p.seed,
            "design": design_json(&p.design),
            "tolerance": p.opts.tol,
            "drop_sec": p.opts.policy.drop_sec,
            "checks": report.summaries,
            "totals": {
                "trials": report.trials(),
                "passes": report.trials() - failures,
                "failures": failures,
            },
            "witnesses": witnesses,
        }),
    )?;
    write_slack_csv(&report, fs::File::create(p.out.join("slack.csv"))?)?;
    for s in &report.summaries {
        writeln!(
            stdout,
            "{:<3} trials {:>6}  failures {:>5}  min slack {:>11.3e}  max ratio {:.6}",
            s.check, s.trials, s.failures, s.min_slack, s.max_ratio
        )?;
    }
    writeln!(stdout, "total trials {}  failures {}", report.trials(), failures)?;
    Ok(if failures == 0 { 0 } else { 1 })
}

fn cmd_tightness(args: &RunArgs, stdout: &mut dyn Write) -> Result<i32> {
    let p = args.prepare()?;
    let checks = parse_check_list(&p.checks)?;
    let mut reports = Vec::new();
    for &k in &checks {
        reports.extend(tightness(k, &p.design, p.seed, &p.opts)?);
    }
    fs::create_dir_all(&p.out)?;
    write_json(
        &p.out.join("tightness.json"),
        &json!({
            "schema": TIGHTNESS_SCHEMA,
            "seed": p.seed,
            "design": design_json(&p.design),
            "reports": reports,
        }),
    )?;
    for r in &reports {
        let p = r.p.map(|p| format!(" p={p}")).unwrap_or_default();
        writeln!(
            stdout,
            "{}:{} n={} theta={} m={} M={}{p}  constant {:.6}  observed {:.6}{}",
            r.check,
            r.part,
            r.cell.n,
            r.cell.theta,
            r.cell.m,
            r.cell.big_m,
            r.theoretical_constant,
            r.empirical_max_ratio,
            if r.within { "" } else { "  EXCEEDED" }
        )?;
    }
    Ok(if reports.iter().all(|r| r.within) { 0 } else { 1 })
}

fn parse_targets(s: &str) -> Result<Vec<CheckTarget>> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(CheckKind::ALL.iter().map(|&k| CheckTarget::whole(k)).collect());
    }
    s.split(',').map(str::parse).collect()
}

fn cmd_mutate(args: &RunArgs, factors: &[f64], stdout: &mut dyn Write) -> Result<i32> {
    let p = args.prepare()?;
    let targets = parse_targets(&p.checks)?;
    if factors.is_empty() || factors.iter().any(|f| !(*f > 0.0 && f.is_finite())) {
        return Err(Error::Config("mutation factors must be positive".into()));
    }
    let mut reports = Vec::new();
    for t in &targets {
        for &f in factors {
            reports.push(mutation_test(t, f, &p.design, p.seed, &p.opts)?);
        }
    }
    fs::create_dir_all(&p.out)?;
    write_json(
        &p.out.join("mutation.json"),
        &json!({
            "schema": MUTATION_SCHEMA,
            "seed": p.seed,
            "design": design_json(&p.design),
            "mutations": reports,
        }),
    )?;
    for r in &reports {
        writeln!(stdout, "{} factor {}  violations {}/{}", r.check, r.factor, r.violations, r.trials)?;
    }
    Ok(0)
}

fn cmd_range(input: &Path, resolution: usize, out: Option<&Path>, stdout: &mut dyn Write) -> Result<i32> {
    let a = parse_matrix(&fs::read_to_string(input)?)?;
    let boundary = range_boundary(&a, resolution).map_err(|e| Error::Config(e.to_string()))?;
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            boundary.write_csv(std::io::BufWriter::new(fs::File::create(dir.join("range.csv"))?))?;
        }
        None => boundary.write_csv(stdout)?,
    }
    Ok(0)
}

fn cmd_replay(input: &Path, tol_rel: Option<f64>, tol_abs: Option<f64>, stdout: &mut dyn Write) -> Result<i32> {
    let w = Witness::read_from(input)?;
    let mut opts = RunOptions::default();
    if let Some(r) = tol_rel {
        opts.tol.rel = r;
    }
    if let Some(a) = tol_abs {
        opts.tol.abs = a;
    }
    let parts = replay(&w, &opts)?;
    writeln!(stdout, "{} seed {:#x} trial {}", w.check, w.seed, w.trial)?;
    for p in &parts {
        writeln!(
            stdout,
            "  {:<16} {}  slack {:.6e}  ratio {:.6}  constant {:.6}",
            p.label,
            if p.pass { "pass" } else { "FAIL" },
            p.slack,
            p.ratio,
            p.constant
        )?;
    }
    Ok(if parts.iter().all(|p| p.pass) { 0 } else { 1 })
}

fn thread_pool() -> Result<Option<rayon::ThreadPool>> {
    let Ok(v) = std::env::var(THREADS_ENV) else { return Ok(None) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Config(format!("{THREADS_ENV} must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map(Some)
        .map_err(|e| Error::Config(e.to_string()))
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Verify(a) => cmd_verify(a, stdout),
        Command::Tightness(a) => cmd_tightness(a, stdout),
        Command::Mutate { run, factor } => cmd_mutate(run, factor, stdout),
        Command::Range { input, resolution, out } => cmd_range(input, *resolution, out.as_deref(), stdout),
        Command::Replay { input, tol_rel, tol_abs } => cmd_replay(input, *tol_rel, *tol_abs, stdout),
    }
}

/// Runs the command line `args` (including the program name) and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return code;
        }
    };
    let mut buf = Vec::new();
    let outcome = thread_pool().and_then(|pool| match pool {
        Some(pool) => pool.install(|| dispatch(&cli, &mut buf)),
        None => dispatch(&cli, &mut buf),
    });
    let _ = stdout.write_all(&buf);
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}
