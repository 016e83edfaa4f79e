//! Ergotropy split for a few textbook qubit states.

use nvqb::energetics::{ergotropy_decomposition, BatteryHamiltonian};
use nvqb::qcore::{DensityMatrix, SquareComplexMatrix};
use num_complex::Complex64 as C64;

fn state(pe: f64, c: C64) -> DensityMatrix {
    let m = SquareComplexMatrix::from_rows([[C64::from(pe), c], [c.conj(), C64::from(1.0 - pe)]]).unwrap();
    DensityMatrix::new(m).unwrap()
}

fn main() -> nvqb::Result<()> {
    let hb = BatteryHamiltonian::unit();
    let s = 0.5f64.sqrt();
    let cases = [
        ("ground", state(0.0, C64::from(0.0))),
        ("excited", state(1.0, C64::from(0.0))),
        ("maximally mixed", state(0.5, C64::from(0.0))),
        ("(|e>+|g>)/sqrt2", state(0.5, C64::from(0.5))),
        ("cos|e>+i sin|g>, 60/40", state(0.6, C64::new(0.0, -(0.24f64).sqrt()))),
        ("partly dephased", state(0.7, C64::from(0.2 * s))),
    ];
    println!("{:<24} {:>7} {:>7} {:>7} {:>7} {:>7}", "state", "E", "W", "W_inc", "W_coh", "C");
    for (name, rho) in cases {
        let r = ergotropy_decomposition(0.0, &rho, &hb)?;
        println!(
            "{name:<24} {:7.4} {:7.4} {:7.4} {:7.4} {:7.4}",
            r.energy, r.ergotropy, r.incoherent, r.coherent, r.coherence
        );
    }
    Ok(())
}
