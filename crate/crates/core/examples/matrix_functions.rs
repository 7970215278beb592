//! Principal square root, logarithm and exponential of a random sector matrix.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sectorlab::numkernel::{dist_f, expm, logm, powm, sqrtm};
use sectorlab::sector::{sample_sector, SamplerOptions};

fn main() -> sectorlab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let a = sample_sector(4, 1.0, 0.5, 3.0, &mut rng, &SamplerOptions::default())?.a;
    let scale = a.norm();

    let s = sqrtm(&a)?;
    println!("||sqrt(A)^2 - A|| / ||A||   = {:.3e}", dist_f(&(&s * &s), &a) / scale);

    let l = logm(&a)?;
    println!("||exp(log A) - A|| / ||A||  = {:.3e}", dist_f(&expm(&l)?, &a) / scale);

    let third = powm(&a, 1.0 / 3.0)?;
    println!("||(A^(1/3))^3 - A|| / ||A|| = {:.3e}", dist_f(&(&third * &third * &third), &a) / scale);
    Ok(())
}
