//! The positive unital map catalog: Choi matrices, unitality and Choi's inequality.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sectorlab::numkernel::ToleranceSpec;
use sectorlab::pulm::{choi_check, choi_inequality_check, MapSpec};
use sectorlab::sector::random_pd;

fn main() -> sectorlab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let tol = ToleranceSpec::default();
    for spec in MapSpec::catalog() {
        let phi = spec.instantiate(4, &mut rng)?;
        let a = random_pd(4, 0.2, 5.0, &mut rng);
        let v = choi_inequality_check(&phi, &a, &tol)?;
        println!(
            "{:<12} {}x{} -> {}x{}  choi min eig {:+.2e}  unitality {:.1e}  choi-inequality slack {:.4}",
            spec.to_string(),
            phi.in_dim(),
            phi.in_dim(),
            phi.out_dim(),
            phi.out_dim(),
            choi_check(&phi)?,
            phi.unitality_defect(),
            v.slack
        );
    }
    Ok(())
}
