//! A reduced registry run: every check on a small grid, summarized per check.
//! `cargo run --release --example verify_suite -- 50` sets the trials per cell.

use sectorlab::verifier::{run_suite, CheckKind, Design, Grid, RunOptions};

fn main() -> sectorlab::Result<()> {
    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let grid = Grid { dims: vec![2, 3], trials, ..Grid::default() };
    let report = run_suite(&CheckKind::ALL, &Design::Random(grid), 2024, &RunOptions::default())?;
    for s in &report.summaries {
        println!(
            "{:<3} {:<60} trials {:>5}  failures {:>3}  max ratio {:.4}",
            s.check,
            s.check.statement(),
            s.trials,
            s.failures,
            s.max_ratio
        );
    }
    for r in report.results.iter().filter(|r| !r.pass).take(5) {
        println!("failure: {} part {} theta {} seed {:#x} ({})", r.check.kind, r.part, r.cell.theta, r.seed, r.check.params);
    }
    println!("{} trials, {} failures", report.trials(), report.failures());
    Ok(())
}
