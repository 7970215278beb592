//! The mean catalog on accretive matrices, the scalar formula `a f(b/a)` and the
//! real-part sandwich.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sectorlab::means::{adjoint_mean, mean_eval, sandwich_check, MeanSpec, OpMonotone};
use sectorlab::numkernel::{c64, CMatrix, ToleranceSpec};
use sectorlab::sector::{sample_sector, SamplerOptions};

fn main() -> sectorlab::Result<()> {
    let catalog: Vec<MeanSpec> = vec![
        MeanSpec::arithmetic(0.3)?,
        MeanSpec::geometric(0.3)?,
        MeanSpec::harmonic(0.3)?,
        MeanSpec::power(0.5, 0.3)?,
        OpMonotone::heinz(0.2)?.into(),
    ];

    let (a, b) = (2.0, 7.0);
    for s in &catalog {
        let m = mean_eval(s, &CMatrix::from_element(1, 1, c64(a, 0.0)), &CMatrix::from_element(1, 1, c64(b, 0.0)))?;
        println!("{:<22} {a} s {b} = {:.12}  (a f(b/a) = {:.12})", s.name, m[(0, 0)].re, s.f.scalar_mean(a, b));
    }
    println!("adjoint of {} is {}", catalog[0], adjoint_mean(&catalog[0]));

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let opts = SamplerOptions::default();
    let tol = ToleranceSpec::default();
    for s in &catalog {
        let x = sample_sector(3, 1.1, 0.5, 4.0, &mut rng, &opts)?;
        let y = sample_sector(3, 1.1, 0.5, 4.0, &mut rng, &opts)?;
        let (lower, upper) = sandwich_check(s, &x, &y, &tol)?;
        println!("{:<22} lower slack {:.3e}  upper slack {:.3e}", s.name, lower.slack, upper.slack);
    }
    Ok(())
}
