//! Stored energy, ergotropy split into incoherent and coherent parts, and
//! relative-entropy coherence of the battery's reduced state.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcore::{entropy_bits, entropy_of_spectrum, hermitian_eigensystem, DensityMatrix, SquareComplexMatrix};

/// W below this fraction of ω₀ leaves the coherent ratio undefined.
pub const RATIO_FLOOR: f64 = 1e-12;

/// Eigenvalues of ρ_b closer than this keep their input order when passivized.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// H_b = ω₀ σ†σ in (|e⟩, |g⟩) order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BatteryHamiltonian {
    omega0: f64,
}

impl BatteryHamiltonian {
    pub fn new(omega0: f64) -> Result<Self> {
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(Error::BelowLevelCrossing { omega0 });
        }
        Ok(Self { omega0 })
    }

    /// ω₀ = 1: energies come out in units of the level splitting.
    pub fn unit() -> Self {
        Self { omega0: 1.0 }
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    /// Level energies in the (|e⟩, |g⟩) basis.
    pub fn levels(&self) -> [f64; 2] {
        [self.omega0, 0.0]
    }

    /// Basis indices ordered by ascending energy (stable).
    fn ascending_levels(&self) -> Vec<usize> {
        let lv = self.levels();
        let mut idx: Vec<usize> = (0..lv.len()).collect();
        idx.sort_by(|&a, &b| lv[a].total_cmp(&lv[b]));
        idx
    }

    fn expectation(&self, rho: &SquareComplexMatrix) -> f64 {
        self.levels().iter().enumerate().map(|(i, e)| e * rho[(i, i)].re).sum()
    }
}

/// Thermodynamic snapshot of a battery state; energies in the unit of ω₀
/// carried by the [`BatteryHamiltonian`] used.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnergeticsRecord {
    pub t: f64,
    pub energy: f64,
    pub ergotropy: f64,
    pub incoherent: f64,
    pub coherent: f64,
    /// bits
    pub coherence: f64,
    /// W_coh / W, `None` when W < 1e-12·ω₀
    pub ratio_coh: Option<f64>,
    /// excited population p_e
    pub excited: f64,
}

fn check_qubit(rho_b: &DensityMatrix) -> Result<()> {
    if rho_b.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: rho_b.dim(),
        });
    }
    Ok(())
}

/// E = Tr[H_b ρ_b]
pub fn stored_energy(rho_b: &DensityMatrix, h_b: &BatteryHamiltonian) -> f64 {
    h_b.expectation(rho_b.matrix())
}

/// Spectrum of ρ_b sorted descending, placed on H_b levels sorted ascending.
pub fn passive_state(rho_b: &DensityMatrix, h_b: &BatteryHamiltonian) -> Result<DensityMatrix> {
    check_qubit(rho_b)?;
    let es = rho_b.spectrum();
    Ok(passive_from_spectrum(&es.eigenvalues, h_b))
}

fn passive_from_spectrum(ascending: &[f64], h_b: &BatteryHamiltonian) -> DensityMatrix {
    // stable descending order: ties within DEGENERACY_TOL keep input order
    let mut idx: Vec<usize> = (0..ascending.len()).collect();
    idx.sort_by(|&a, &b| {
        if (ascending[a] - ascending[b]).abs() <= DEGENERACY_TOL {
            std::cmp::Ordering::Equal
        } else {
            ascending[b].total_cmp(&ascending[a])
        }
    });
    let mut diag = vec![0.0; ascending.len()];
    for (&level, &k) in h_b.ascending_levels().iter().zip(&idx) {
        diag[level] = ascending[k];
    }
    DensityMatrix::from_checked_spectrum(SquareComplexMatrix::diagonal(&diag).expect("dim 2"))
}

/// Diagonal part of ρ_b in the H_b eigenbasis.
pub fn dephased_state(rho_b: &DensityMatrix, _h_b: &BatteryHamiltonian) -> Result<DensityMatrix> {
    check_qubit(rho_b)?;
    let diag: Vec<f64> = rho_b.matrix().diagonal_values().iter().map(|z| z.re).collect();
    Ok(DensityMatrix::from_checked_spectrum(SquareComplexMatrix::diagonal(&diag)?))
}

/// C = S(dephased) − S(ρ_b), bits.
pub fn coherence_bits(rho_b: &DensityMatrix, h_b: &BatteryHamiltonian) -> Result<f64> {
    let dephased = dephased_state(rho_b, h_b)?;
    let c = entropy_bits(&dephased) - entropy_bits(rho_b);
    Ok(c.max(0.0))
}

/// Total, incoherent and coherent ergotropy plus coherence at time `t`.
pub fn ergotropy_decomposition(t: f64, rho_b: &DensityMatrix, h_b: &BatteryHamiltonian) -> Result<EnergeticsRecord> {
    check_qubit(rho_b)?;
    let es = hermitian_eigensystem(rho_b.matrix())?;
    let energy = stored_energy(rho_b, h_b);

    let passive = passive_from_spectrum(&es.eigenvalues, h_b);
    // both differences are ≥ 0 exactly; clamp away rounding
    let ergotropy = (energy - h_b.expectation(passive.matrix())).max(0.0);

    let dephased = dephased_state(rho_b, h_b)?;
    let mut dephased_spectrum: Vec<f64> = dephased.matrix().diagonal_values().iter().map(|z| z.re).collect();
    dephased_spectrum.sort_by(f64::total_cmp);
    let dephased_passive = passive_from_spectrum(&dephased_spectrum, h_b);
    let incoherent = (energy - h_b.expectation(dephased_passive.matrix())).clamp(0.0, ergotropy);
    let coherent = ergotropy - incoherent;

    let coherence = (entropy_of_spectrum(&dephased_spectrum) - entropy_of_spectrum(&es.eigenvalues)).max(0.0);
    let ratio_coh = (ergotropy >= RATIO_FLOOR * h_b.omega0()).then(|| coherent / ergotropy);

    Ok(EnergeticsRecord {
        t,
        energy,
        ergotropy,
        incoherent,
        coherent,
        coherence,
        ratio_coh,
        excited: rho_b.population(0),
    })
}

/// Qubit closed forms: W_inc = ω₀·max(0, 2p_e − 1),
/// W = ω₀(p_e − (1 − r)/2) with r = √((2p_e − 1)² + 4|c|²).
pub fn qubit_closed_form(rho_b: &DensityMatrix, h_b: &BatteryHamiltonian) -> (f64, f64) {
    let pe = rho_b.population(0);
    let c: C64 = rho_b[(0, 1)];
    let r = ((2.0 * pe - 1.0).powi(2) + 4.0 * c.norm_sqr()).sqrt();
    let w = h_b.omega0() * (pe - 0.5 * (1.0 - r));
    let w_inc = h_b.omega0() * (2.0 * pe - 1.0).max(0.0);
    (w, w_inc)
}
