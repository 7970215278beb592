//! A scalar input on which the middle link of M7 fails: `a = b = 1 + i tan(1.25)`,
//! `f(t) = t / (0.01 t + 0.99)`. The witness is written, read back and replayed.

use sectorlab::means::{MeanSpec, OpMonotone};
use sectorlab::numkernel::{c64, CMatrix};
use sectorlab::pulm::PULMap;
use sectorlab::verifier::{replay, run_check, Bundle, Cell, CheckKind, RunOptions, Witness};

fn main() -> sectorlab::Result<()> {
    let theta = 1.25;
    let z = CMatrix::from_element(1, 1, c64(1.0, f64::tan(theta)));
    let bundle = Bundle {
        cell: Cell { n: 1, theta, m: 1.0, big_m: 1.0 },
        a: z.clone(),
        b: z,
        inv_a: None,
        inv_b: None,
        v: 0.5,
        sigma1: MeanSpec::geometric(0.5)?,
        sigma2: MeanSpec::geometric(0.5)?,
        f: OpMonotone::harmonic(0.99)?,
        phi: PULMap::identity(1),
        p: 1.0,
    };
    let opts = RunOptions::default();
    let parts = run_check(CheckKind::M7, &bundle, &opts)?;
    for p in &parts {
        println!("{:<14} {}  ratio {:>10.4}  constant {:>10.4}", p.label, if p.pass { "pass" } else { "FAIL" }, p.ratio, p.constant);
    }

    let witness = Witness {
        check: CheckKind::M7,
        part: "link2".into(),
        seed: 0,
        trial: 0,
        cell: bundle.cell,
        note: "scalar input".into(),
        bundle: Some(bundle),
    };
    let path = std::env::temp_dir().join("sectorlab-witness-M7.txt");
    witness.write_to(&path)?;
    let back = Witness::read_from(&path)?;
    let again = replay(&back, &opts)?;
    println!("replayed from {}: identical = {}", path.display(), again == parts);
    Ok(())
}
