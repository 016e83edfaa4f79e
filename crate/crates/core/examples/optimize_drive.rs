//! Drive strength and detuning that maximize the stable coherence, and the
//! drive regimes seen in the charging transients.

use nvqb::mhz;
use nvqb::nv_model::PhysicalConstants;
use nvqb::reproduce::{coherence_optima, regime_omega_axis};
use nvqb::sweep::{classify_drive_regimes, DetectorSettings};

fn main() -> nvqb::Result<()> {
    let gamma = mhz(0.1);
    let a_par = PhysicalConstants::default().a_par;
    let [omega, delta, weak] = coherence_optima()?;
    let (xo, co) = omega.best();
    let (xd, cd) = delta.best();
    println!("Omega*/gamma = {:.4}  C = {co:.4} bits", xo / gamma);
    println!("Delta*/A_par = {:.4}  C = {cd:.4} bits  (Omega/2pi = 1 MHz)", xd / a_par);
    println!("weak drive Delta* = {:.2e} rad/us, multimodal = {}", weak.best().0, weak.multimodal);

    let report = classify_drive_regimes(&regime_omega_axis(), gamma, a_par, &DetectorSettings::default())?;
    let show = |x: Option<f64>| x.map_or("none in grid".to_string(), |v| format!("{v:.2}"));
    println!(
        "W_coh starts to overshoot at Omega/gamma = {}; W_inc appears at Omega/gamma = {}",
        show(report.threshold_osc),
        show(report.threshold_inc)
    );
    Ok(())
}
