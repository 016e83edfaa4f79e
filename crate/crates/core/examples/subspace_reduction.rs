//! Projects the 9-level electron/nuclear Hamiltonian onto the four states the
//! battery model keeps and reports what the reduction drops.

use nvqb::nv_model::{build_full_hamiltonian, qb_splitting, validate_subspace_reduction, PhysicalConstants};
use nvqb::TWO_PI;

fn main() -> nvqb::Result<()> {
    let c = PhysicalConstants::default();
    for b_z in [300.0, 482.0, 800.0] {
        let h9 = build_full_hamiltonian(&c, b_z);
        let rep = validate_subspace_reduction(&h9, &c, b_z)?;
        let s = qb_splitting(&c, b_z)?;
        println!(
            "B = {b_z:>5} G  omega0/2pi = {:8.2} MHz ({:.3} ueV)  diag residual {:.1e}  dropped coupling {:.2} MHz across >= {:.0} MHz",
            s.omega0 / TWO_PI,
            s.energy_uev,
            rep.diagonal_residual,
            rep.leakage.max(rep.in_subspace_coupling) / TWO_PI,
            rep.min_bridged_gap / TWO_PI,
        );
    }
    // past the ground-state level crossing the battery has no positive splitting
    let s = qb_splitting(&c, 1100.0)?;
    println!("B = 1100 G  operational: {:?}", s.operational().map(|_| ()));
    Ok(())
}
