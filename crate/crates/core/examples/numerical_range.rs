//! Numerical radius and the boundary of the numerical range of a Jordan block.
//! Pass a directory to also write `range.csv` there.

use sectorlab::numkernel::from_real_rows;
use sectorlab::sector::{numerical_radius, range_boundary};

fn main() -> sectorlab::Result<()> {
    let j = from_real_rows(2, &[0.0, 1.0, 0.0, 0.0]);
    println!("w([[0,1],[0,0]]) = {:.10}", numerical_radius(&j)?);

    let a = from_real_rows(3, &[1.0, 2.0, 0.0, 0.0, 1.0, 2.0, 0.0, 0.0, 1.0]);
    println!("w(A) = {:.10}", numerical_radius(&a)?);
    let boundary = range_boundary(&a, 16)?;
    for (phi, z) in boundary.angles.iter().zip(&boundary.points).take(4) {
        println!("phi {phi:.4}  z = {:.6} {:+.6}i", z.re, z.im);
    }
    if let Some(dir) = std::env::args().nth(1) {
        let path = std::path::Path::new(&dir).join("range.csv");
        range_boundary(&a, 256)?.write_csv(std::fs::File::create(&path)?)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
