//! Two-stage charge/store protocol and storage-time metrics.

use serde::Serialize;

use crate::energetics::{ergotropy_decomposition, BatteryHamiltonian, EnergeticsRecord};
use crate::error::{Error, Result};
use crate::lindblad::{integrate, Dynamics, TimeGrid, Trajectory};
use crate::nv_model::{build_initial_state, qb_splitting, DriveParams, NuclearInit, PhysicalConstants, QbSplitting};
use crate::qcore::{partial_trace_nuclear, DensityMatrix};

/// Default storage-time threshold, as a fraction of ω₀.
pub const DEFAULT_EPSILON: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProtocolSpec {
    pub constants: PhysicalConstants,
    pub drive: DriveParams,
    pub nuclear: NuclearInit,
    /// Pulse area Ωt at which the drive is switched off.
    pub theta_end: f64,
    /// μs
    pub t_storage: f64,
    pub charge_samples: usize,
    pub storage_samples: usize,
    /// Charge with γ = 0 (pure handoff); storage still decays at γ.
    pub ideal_charging: bool,
}

impl ProtocolSpec {
    pub fn new(constants: PhysicalConstants, drive: DriveParams, nuclear: NuclearInit, theta_end: f64, t_storage: f64) -> Self {
        Self {
            constants,
            drive,
            nuclear,
            theta_end,
            t_storage,
            charge_samples: 501,
            storage_samples: 2001,
            ideal_charging: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.constants.validate()?;
        self.drive.validate()?;
        if !(self.theta_end.is_finite() && self.theta_end >= 0.0) {
            return Err(Error::OutOfRange {
                name: "theta_end",
                value: self.theta_end,
                reason: "pulse area must be finite and non-negative",
            });
        }
        if self.theta_end > 0.0 && self.drive.omega_rabi <= 0.0 {
            return Err(Error::OutOfRange {
                name: "omega_rabi",
                value: self.drive.omega_rabi,
                reason: "a positive pulse area needs a positive Rabi frequency",
            });
        }
        if !(self.t_storage.is_finite() && self.t_storage >= 0.0) {
            return Err(Error::OutOfRange {
                name: "t_storage",
                value: self.t_storage,
                reason: "storage time must be finite and non-negative",
            });
        }
        for (name, n) in [("charge_samples", self.charge_samples), ("storage_samples", self.storage_samples)] {
            if n < 2 {
                return Err(Error::OutOfRange {
                    name,
                    value: n as f64,
                    reason: "need at least two samples",
                });
            }
        }
        Ok(())
    }

    /// θ_end / Ω, μs.
    pub fn charge_duration(&self) -> f64 {
        if self.theta_end == 0.0 {
            0.0
        } else {
            self.theta_end / self.drive.omega_rabi
        }
    }

    pub fn charging_dynamics(&self) -> Dynamics {
        let gamma = if self.ideal_charging { 0.0 } else { self.drive.gamma };
        Dynamics::new(self.drive.detuning, self.drive.omega_rabi, gamma, self.constants.a_par)
    }

    pub fn storage_dynamics(&self) -> Dynamics {
        Dynamics::storage(self.drive.gamma, self.constants.a_par)
    }
}

#[derive(Clone, Debug)]
pub struct ProtocolResult {
    pub splitting: QbSplitting,
    /// Energies in units of ω₀.
    pub charging_series: Vec<EnergeticsRecord>,
    pub storage_series: Vec<EnergeticsRecord>,
    pub handoff_state: DensityMatrix,
}

/// Energetics of every sample of a trajectory, in units of ω₀.
pub fn energetics_series(traj: &Trajectory) -> Result<Vec<EnergeticsRecord>> {
    let hb = BatteryHamiltonian::unit();
    traj.times()
        .iter()
        .zip(&traj.states)
        .map(|(&t, s)| ergotropy_decomposition(t, &partial_trace_nuclear(s)?, &hb))
        .collect()
}

fn single_record(t: f64, rho: &DensityMatrix) -> Result<Vec<EnergeticsRecord>> {
    Ok(vec![ergotropy_decomposition(t, &partial_trace_nuclear(rho)?, &BatteryHamiltonian::unit())?])
}

/// Charge from |g⟩⊗|ψ⟩ until Ωt = θ_end, then store with Ω = Δ = 0.
pub fn run_two_stage(spec: &ProtocolSpec) -> Result<ProtocolResult> {
    spec.validate()?;
    let splitting = qb_splitting(&spec.constants, spec.drive.b_z)?;
    splitting.operational()?;

    let rho0 = build_initial_state(&spec.nuclear);
    let t_charge = spec.charge_duration();
    let (charging_series, handoff_state) = if t_charge > 0.0 {
        let dynamics = spec.charging_dynamics();
        let grid = TimeGrid::for_dynamics(0.0, t_charge, spec.charge_samples, &dynamics)?;
        let traj = integrate(&rho0, &dynamics, &grid)?;
        (energetics_series(&traj)?, traj.last().clone())
    } else {
        (single_record(0.0, &rho0)?, rho0)
    };

    let storage_series = if spec.t_storage > 0.0 {
        let dynamics = spec.storage_dynamics();
        let grid = TimeGrid::for_dynamics(t_charge, t_charge + spec.t_storage, spec.storage_samples, &dynamics)?;
        energetics_series(&integrate(&handoff_state, &dynamics, &grid)?)?
    } else {
        single_record(t_charge, &handoff_state)?
    };

    Ok(ProtocolResult {
        splitting,
        charging_series,
        storage_series,
        handoff_state,
    })
}

/// Last time, measured from the first sample, at which W ≥ ε·ω₀; the crossing
/// is interpolated linearly between the bracketing samples.
pub fn storage_time(series: &[EnergeticsRecord], epsilon: f64, omega0: f64) -> Result<f64> {
    if !(epsilon > 0.0) {
        return Err(Error::OutOfRange {
            name: "epsilon",
            value: epsilon,
            reason: "threshold must be positive",
        });
    }
    let first = series.first().ok_or(Error::SeriesTooShort { t_last: 0.0 })?;
    let last = series.last().expect("non-empty");
    let threshold = epsilon * omega0;
    if last.ergotropy >= threshold {
        return Err(Error::SeriesTooShort {
            t_last: last.t - first.t,
        });
    }
    let Some(k) = series.iter().rposition(|r| r.ergotropy >= threshold) else {
        return Ok(0.0);
    };
    let (a, b) = (&series[k], &series[k + 1]);
    let frac = (a.ergotropy - threshold) / (a.ergotropy - b.ergotropy);
    Ok(a.t + frac * (b.t - a.t) - first.t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mhz;
    use std::f64::consts::PI;

    fn spec(theta: f64, gamma: f64, t_storage: f64) -> ProtocolSpec {
        let drive = DriveParams::new(mhz(0.5), 0.0, gamma, 482.0).unwrap();
        ProtocolSpec::new(PhysicalConstants::default(), drive, NuclearInit::down(), theta, t_storage)
    }

    fn record(t: f64, w: f64) -> EnergeticsRecord {
        EnergeticsRecord {
            t,
            energy: w,
            ergotropy: w,
            incoherent: w,
            coherent: 0.0,
            coherence: 0.0,
            ratio_coh: None,
            excited: w,
        }
    }

    #[test]
    fn ideal_pi_pulse_fully_charges() {
        let mut s = spec(PI, 0.0, 0.0);
        s.charge_samples = 101;
        let res = run_two_stage(&s).unwrap();
        let end = res.charging_series.last().unwrap();
        assert!((end.energy - 1.0).abs() < 1e-9);
        assert!((end.ergotropy - 1.0).abs() < 1e-9);
        assert!(end.coherent.abs() < 1e-9);
        assert!((res.charging_series.last().unwrap().t - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_drive_with_pulse_area_is_rejected() {
        let mut s = spec(PI, mhz(0.1), 1.0);
        s.drive.omega_rabi = 0.0;
        assert!(matches!(run_two_stage(&s), Err(Error::OutOfRange { name: "omega_rabi", .. })));
    }

    #[test]
    fn level_crossing_is_refused() {
        let mut s = spec(PI, mhz(0.1), 1.0);
        s.drive.b_z = 1100.0;
        assert!(matches!(run_two_stage(&s), Err(Error::BelowLevelCrossing { .. })));
    }

    #[test]
    fn handoff_is_continuous() {
        let mut s = spec(PI / 2.0, mhz(0.1), 2.0);
        s.charge_samples = 51;
        s.storage_samples = 101;
        let res = run_two_stage(&s).unwrap();
        let a = res.charging_series.last().unwrap();
        let b = res.storage_series.first().unwrap();
        assert_eq!(a, b);
        let all: Vec<f64> = res.charging_series.iter().chain(&res.storage_series[1..]).map(|r| r.t).collect();
        assert!(all.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn storage_time_interpolates_last_crossing() {
        // re-crossing: above, below, above, below
        let series: Vec<_> = [1.0, 0.0005, 0.01, 0.0]
            .iter()
            .enumerate()
            .map(|(k, &w)| record(k as f64, w))
            .collect();
        let t = storage_time(&series, 1e-3, 1.0).unwrap();
        assert!((t - (2.0 + 0.009 / 0.01)).abs() < 1e-12);
    }

    #[test]
    fn storage_time_errors_when_threshold_never_crossed() {
        let series = vec![record(0.0, 1.0), record(1.0, 0.5)];
        assert!(matches!(storage_time(&series, 1e-3, 1.0), Err(Error::SeriesTooShort { .. })));
        assert!(storage_time(&series, 0.0, 1.0).is_err());
        let below = vec![record(0.0, 1e-4), record(1.0, 0.0)];
        assert_eq!(storage_time(&below, 1e-3, 1.0).unwrap(), 0.0);
    }
}
