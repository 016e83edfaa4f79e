//! Charge to a chosen pulse area, switch the drive off, and measure how long
//! the ergotropy survives.

use std::f64::consts::{FRAC_PI_2, PI};

use nvqb::mhz;
use nvqb::nv_model::{DriveParams, NuclearInit, PhysicalConstants};
use nvqb::protocol::{run_two_stage, storage_time, ProtocolSpec, DEFAULT_EPSILON};

fn main() -> nvqb::Result<()> {
    let drive = DriveParams::new(mhz(1.0), 0.0, mhz(0.1), 482.0)?;
    for ideal in [true, false] {
        for (label, theta) in [("pi", PI), ("pi/2", FRAC_PI_2)] {
            let mut spec = ProtocolSpec::new(PhysicalConstants::default(), drive, NuclearInit::down(), theta, 30.0);
            spec.ideal_charging = ideal;
            spec.storage_samples = 6001;
            let res = run_two_stage(&spec)?;
            let h = res.charging_series.last().unwrap();
            let t = storage_time(&res.storage_series, DEFAULT_EPSILON, 1.0)?;
            println!(
                "{:<8} theta = {label:<4}  handoff W = {:.3} (W_inc {:.3}, W_coh {:.3}) w0  t* = {t:.3} us",
                if ideal { "ideal" } else { "damped" },
                h.ergotropy,
                h.incoherent,
                h.coherent,
            );
        }
    }
    Ok(())
}
