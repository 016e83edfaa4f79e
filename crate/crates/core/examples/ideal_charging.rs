//! Undamped resonant charging: stored energy follows sin^2(Omega t / 2).

use nvqb::lindblad::{integrate, Dynamics, TimeGrid};
use nvqb::mhz;
use nvqb::nv_model::{build_initial_state, NuclearInit, PhysicalConstants};
use nvqb::protocol::energetics_series;

fn main() -> nvqb::Result<()> {
    let omega = mhz(0.5);
    let dynamics = Dynamics::new(0.0, omega, 0.0, PhysicalConstants::default().a_par);
    let grid = TimeGrid::for_dynamics(0.0, 4.0, 17, &dynamics)?;
    let traj = integrate(&build_initial_state(&NuclearInit::down()), &dynamics, &grid)?;
    for r in energetics_series(&traj)? {
        let exact = (omega * r.t / 2.0).sin().powi(2);
        println!(
            "t = {:5.2} us  E = {:.6}  W = {:.6}  W_coh = {:.6}  |E - sin^2| = {:.1e}",
            r.t,
            r.energy,
            r.ergotropy,
            r.coherent,
            (r.energy - exact).abs()
        );
    }
    Ok(())
}
