use std::f64::consts::{FRAC_PI_2, PI};

use nvqb::mhz;
use nvqb::nv_model::{DriveParams, NuclearInit, PhysicalConstants};
use nvqb::protocol::{run_two_stage, ProtocolSpec};

fn spec(theta: f64, psi: f64, ideal: bool) -> ProtocolSpec {
    let drive = DriveParams::new(mhz(0.5), 0.0, mhz(0.1), 482.0).unwrap();
    let mut s = ProtocolSpec::new(PhysicalConstants::default(), drive, NuclearInit::new(psi).unwrap(), theta, 12.0);
    s.ideal_charging = ideal;
    s
}

#[test]
fn storage_energy_never_increases() {
    for psi in [0.0, PI / 3.0, PI / 2.0, PI] {
        let res = run_two_stage(&spec(FRAC_PI_2, psi, false)).unwrap();
        for w in res.storage_series.windows(2) {
            assert!(w[1].energy <= w[0].energy + 1e-12, "psi {psi}: {} -> {}", w[0].energy, w[1].energy);
        }
    }
}

#[test]
fn full_ideal_charge_stores_no_coherent_work() {
    let res = run_two_stage(&spec(PI, 0.0, true)).unwrap();
    let h = res.charging_series.last().unwrap();
    assert!((h.energy - 1.0).abs() < 1e-9 && h.coherent.abs() < 1e-9);
    assert!(res.storage_series.iter().all(|r| r.coherent.abs() < 1e-9));
}

#[test]
fn half_charge_stores_no_incoherent_work() {
    for ideal in [true, false] {
        let res = run_two_stage(&spec(FRAC_PI_2, 0.0, ideal)).unwrap();
        assert!(res.storage_series.iter().all(|r| r.incoherent <= 1e-12 && r.excited <= 0.5 + 1e-12));
    }
}

#[test]
fn handoff_sample_is_shared_and_time_increases() {
    let res = run_two_stage(&spec(FRAC_PI_2, PI / 4.0, false)).unwrap();
    let (a, b) = (res.charging_series.last().unwrap(), res.storage_series.first().unwrap());
    assert!((a.energy - b.energy).abs() <= 1e-12 && (a.coherence - b.coherence).abs() <= 1e-12);
    let times: Vec<f64> = res.charging_series.iter().chain(&res.storage_series[1..]).map(|r| r.t).collect();
    assert!(times.windows(2).all(|w| w[1] > w[0]));
}
