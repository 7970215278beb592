//! Draws matrices from a sector and reports their angle and real-part spectrum.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sectorlab::sector::{real_part, sample_sector, sector_angle, SamplerOptions};

fn main() -> sectorlab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let opts = SamplerOptions { boundary_fraction: 0.5 };
    let theta = std::f64::consts::FRAC_PI_4;
    println!("theta = {theta:.6}, bounds [1, 10]");
    for _ in 0..6 {
        let s = sample_sector(3, theta, 1.0, 10.0, &mut rng, &opts)?;
        let re = real_part(&s.a).eigenvalues()?;
        println!(
            "angle {:.6}  spec(Re A) = [{:.4}, {:.4}, {:.4}]",
            sector_angle(&s.a)?,
            re[0],
            re[1],
            re[2]
        );
    }
    Ok(())
}
