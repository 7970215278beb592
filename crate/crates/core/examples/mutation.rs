//! Weakened constants must be caught: M2 with K replaced by 1 on the endpoint grid,
//! and F1's sec^2 scaled by 0.9 on boundary samples.

use sectorlab::sector::SamplerOptions;
use sectorlab::verifier::{mutation_test, CheckTarget, Design, Grid, RunOptions};

fn main() -> sectorlab::Result<()> {
    let opts = RunOptions { p_values: Some(vec![1.0]), ..RunOptions::default() };
    let extremal = Design::Extremal { bounds: vec![(1.0, 4.0)] };
    let m2: CheckTarget = "M2".parse()?;
    for factor in [1.0, 0.9, 0.64] {
        let r = mutation_test(&m2, factor, &extremal, 0, &opts)?;
        println!("{} x{factor}: {}/{} violations", r.check, r.violations, r.trials);
    }

    let opts = RunOptions { sampler: SamplerOptions { boundary_fraction: 1.0 }, ..RunOptions::default() };
    let grid = Grid { dims: vec![2, 3], thetas: vec![1.2], bounds: vec![(1.0, 2.0), (1.0, 10.0)], trials: 100 };
    let f1: CheckTarget = "F1:right".parse()?;
    for factor in [1.0, 0.9] {
        let r = mutation_test(&f1, factor, &Design::Random(grid.clone()), 1, &opts)?;
        println!("{} x{factor}: {}/{} violations", r.check, r.violations, r.trials);
    }
    Ok(())
}
