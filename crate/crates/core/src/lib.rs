//! Simulation and analysis of an NV-center quantum battery.
//!
//! The electron spin (|m_S=0⟩ = |g⟩, |m_S=−1⟩ = |e⟩) stores energy and is
//! hyperfine-coupled to the ¹⁴N nuclear spin (|m_I=+1⟩ = |↑⟩,
//! |m_I=0⟩ = |↓⟩). The crate integrates the driven, amplitude-damped
//! dynamics of that pair, splits the battery's ergotropy into coherent and
//! incoherent parts, and searches drive/detuning/nuclear-initialization
//! settings for maximal stable coherence.
//!
//! Units: angular frequencies in rad/μs, times in μs (ħ = 1). The CLI and
//! config layer accept ordinary frequencies in MHz and convert once.

#![cfg_attr(test, allow(clippy::approx_constant))]

pub mod cli;
pub mod energetics;
mod error;
pub mod lindblad;
pub mod nv_model;
pub mod output;
pub mod protocol;
pub mod qcore;
pub mod reproduce;
pub mod sweep;

pub use error::{Error, Result};

/// 2π, for converting MHz to rad/μs.
pub const TWO_PI: f64 = std::f64::consts::TAU;

/// MHz (ordinary frequency) to rad/μs.
pub fn mhz(f: f64) -> f64 {
    TWO_PI * f
}
