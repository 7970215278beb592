//! Attained constants: M2 on the scalar endpoint grid reaches K(1, 4) = 25/16 at p = 1,
//! and random sampling approaches the sec-powers of the sandwich from below.

use sectorlab::verifier::{kantorovich, tightness, CheckKind, Design, Grid, RunOptions};

fn main() -> sectorlab::Result<()> {
    let opts = RunOptions { p_values: Some(vec![1.0]), ..RunOptions::default() };
    let extremal = Design::Extremal { bounds: vec![(1.0, 4.0)] };
    for r in tightness(CheckKind::M2, &extremal, 0, &opts)? {
        println!("M2 extremal: observed {}  constant {}", r.empirical_max_ratio, r.theoretical_constant);
    }
    println!("K(1, 4) = {}", kantorovich(1.0, 4.0)?.value);

    let grid = Grid { dims: vec![2], thetas: vec![0.5, 1.0], bounds: vec![(1.0, 2.0)], trials: 200 };
    for r in tightness(CheckKind::F1, &Design::Random(grid), 3, &RunOptions::default())? {
        println!(
            "F1 {:<5} theta {}  observed {:.5}  constant {:.5}",
            r.part, r.cell.theta, r.empirical_max_ratio, r.theoretical_constant
        );
    }
    Ok(())
}
