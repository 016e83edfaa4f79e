//! Flat `key = value` run configuration, in MHz / μs / Gauss.

use std::path::Path;

use crate::error::{Error, Result};
use crate::mhz;
use crate::nv_model::{DriveParams, NuclearInit, PhysicalConstants};
use crate::output::{EnergyUnit, Format};
use crate::protocol::{ProtocolSpec, DEFAULT_EPSILON};

/// Every field that a config file or flag may set. Frequencies stay in MHz
/// here and are converted once, in [`RunConfig::constants`] and friends.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub d_mhz: f64,
    pub gamma_e_mhz_per_g: f64,
    pub q_mhz: f64,
    pub gamma_n_mhz_per_g: f64,
    pub a_perp_mhz: f64,
    pub a_par_mhz: f64,
    pub bz_gauss: f64,
    pub omega_mhz: f64,
    pub gamma_mhz: f64,
    pub delta_mhz: f64,
    pub psi: f64,
    pub theta_end: f64,
    pub t_storage_us: f64,
    pub charge_samples: usize,
    pub storage_samples: usize,
    pub ideal_charging: bool,
    pub epsilon: f64,
    pub units: EnergyUnit,
    /// `None` lets each command pick its natural format.
    pub format: Option<Format>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            d_mhz: 2870.0,
            gamma_e_mhz_per_g: 2.8,
            q_mhz: 4.96,
            gamma_n_mhz_per_g: 3.07e-4,
            a_perp_mhz: 2.7,
            a_par_mhz: 2.14,
            bz_gauss: 482.0,
            omega_mhz: 0.5,
            gamma_mhz: 0.1,
            delta_mhz: 0.0,
            psi: 0.0,
            theta_end: std::f64::consts::PI,
            t_storage_us: 10.0,
            charge_samples: 501,
            storage_samples: 2001,
            ideal_charging: false,
            epsilon: DEFAULT_EPSILON,
            units: EnergyUnit::Omega0,
            format: None,
        }
    }
}

pub const KEYS: [&str; 19] = [
    "d_mhz",
    "gamma_e_mhz_per_g",
    "q_mhz",
    "gamma_n_mhz_per_g",
    "a_perp_mhz",
    "a_par_mhz",
    "bz_gauss",
    "omega_mhz",
    "gamma_mhz",
    "delta_mhz",
    "psi",
    "theta_end",
    "t_storage_us",
    "charge_samples",
    "storage_samples",
    "ideal_charging",
    "epsilon",
    "units",
    "format",
];

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("bad value `{value}` for key `{key}`")))
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "d_mhz" => self.d_mhz = parse(key, value)?,
            "gamma_e_mhz_per_g" => self.gamma_e_mhz_per_g = parse(key, value)?,
            "q_mhz" => self.q_mhz = parse(key, value)?,
            "gamma_n_mhz_per_g" => self.gamma_n_mhz_per_g = parse(key, value)?,
            "a_perp_mhz" => self.a_perp_mhz = parse(key, value)?,
            "a_par_mhz" => self.a_par_mhz = parse(key, value)?,
            "bz_gauss" => self.bz_gauss = parse(key, value)?,
            "omega_mhz" => self.omega_mhz = parse(key, value)?,
            "gamma_mhz" => self.gamma_mhz = parse(key, value)?,
            "delta_mhz" => self.delta_mhz = parse(key, value)?,
            "psi" => self.psi = parse(key, value)?,
            "theta_end" => self.theta_end = parse(key, value)?,
            "t_storage_us" => self.t_storage_us = parse(key, value)?,
            "charge_samples" => self.charge_samples = parse(key, value)?,
            "storage_samples" => self.storage_samples = parse(key, value)?,
            "ideal_charging" => self.ideal_charging = parse(key, value)?,
            "epsilon" => self.epsilon = parse(key, value)?,
            "units" => self.units = value.parse()?,
            "format" => self.format = Some(value.parse()?),
            other => {
                return Err(Error::Config(format!(
                    "unknown key `{other}`; valid keys: {}",
                    KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_str(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`, got `{line}`", n + 1)))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| Error::Config(format!("line {}: {}", n + 1, e.to_string().trim_start_matches("config: "))))?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_str(&std::fs::read_to_string(path)?)?;
        Ok(cfg)
    }

    pub fn constants(&self) -> PhysicalConstants {
        PhysicalConstants {
            d: mhz(self.d_mhz),
            gamma_e: mhz(self.gamma_e_mhz_per_g),
            q: mhz(self.q_mhz),
            gamma_n: mhz(self.gamma_n_mhz_per_g),
            a_perp: mhz(self.a_perp_mhz),
            a_par: mhz(self.a_par_mhz),
        }
    }

    pub fn drive(&self) -> Result<DriveParams> {
        DriveParams::new(mhz(self.omega_mhz), mhz(self.delta_mhz), mhz(self.gamma_mhz), self.bz_gauss)
    }

    pub fn nuclear(&self) -> Result<NuclearInit> {
        NuclearInit::new(self.psi)
    }

    pub fn protocol(&self) -> Result<ProtocolSpec> {
        let constants = self.constants();
        constants.validate()?;
        let mut spec = ProtocolSpec::new(constants, self.drive()?, self.nuclear()?, self.theta_end, self.t_storage_us);
        spec.charge_samples = self.charge_samples;
        spec.storage_samples = self.storage_samples;
        spec.ideal_charging = self.ideal_charging;
        spec.validate()?;
        Ok(spec)
    }
}
