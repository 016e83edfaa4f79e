//! Driven, damped steady state: analytic formula against long-time integration.

use nvqb::energetics::{ergotropy_decomposition, BatteryHamiltonian};
use nvqb::lindblad::{relax_to_steady, steady_state_reduced, Dynamics};
use nvqb::mhz;
use nvqb::nv_model::{build_initial_state, NuclearInit, PhysicalConstants};
use nvqb::qcore::partial_trace_nuclear;

fn main() -> nvqb::Result<()> {
    let a_par = PhysicalConstants::default().a_par;
    let gamma = mhz(0.1);
    for (omega_mhz, delta_mhz, psi) in [(1.0, 0.0, 0.0), (0.06, 0.0, 0.0), (0.5, -2.14, std::f64::consts::PI), (0.3, 0.4, 1.0)] {
        let nuclear = NuclearInit::new(psi)?;
        let (omega, delta) = (mhz(omega_mhz), mhz(delta_mhz));
        let analytic = steady_state_reduced(&nuclear, delta, omega, gamma, a_par)?;
        let (rho, t) = relax_to_steady(&build_initial_state(&nuclear), &Dynamics::new(delta, omega, gamma, a_par))?;
        let numeric = partial_trace_nuclear(&rho)?;
        let r = ergotropy_decomposition(f64::INFINITY, &analytic, &BatteryHamiltonian::unit())?;
        println!(
            "Omega/2pi = {omega_mhz:4} MHz  Delta/2pi = {delta_mhz:5} MHz  psi = {psi:.2}  p_e = {:.4}  C = {:.4} bits  W = {:.4}  W_coh/W = {:?}  |num - analytic| = {:.1e} (t = {t:.1} us)",
            r.excited,
            r.coherence,
            r.ergotropy,
            r.ratio_coh,
            numeric.matrix().max_abs_diff(analytic.matrix()),
        );
    }
    Ok(())
}
