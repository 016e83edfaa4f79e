use num_complex::Complex64 as C64;

use super::eigen::{hermitian_eigensystem, EigenSystem};
use super::matrix::{SquareComplexMatrix, I, ZERO};
use crate::error::{Error, Result};

pub const DENSITY_HERMITIAN_TOL: f64 = 1e-10;
pub const DENSITY_TRACE_TOL: f64 = 1e-9;
pub const DENSITY_POSITIVITY_TOL: f64 = 1e-9;

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(SquareComplexMatrix);

impl DensityMatrix {
    pub fn new(m: SquareComplexMatrix) -> Result<Self> {
        let asym = m.max_hermitian_asymmetry();
        if asym > DENSITY_HERMITIAN_TOL {
            return Err(Error::NotHermitian { max_asymmetry: asym });
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > DENSITY_TRACE_TOL || tr.im.abs() > DENSITY_TRACE_TOL {
            return Err(Error::BadTrace {
                trace_re: tr.re,
                trace_im: tr.im,
            });
        }
        let min = hermitian_eigensystem(&m)?.eigenvalues[0];
        if min < -DENSITY_POSITIVITY_TOL {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        Ok(Self(m))
    }

    /// Skips the positivity check; callers have already inspected the spectrum.
    pub(crate) fn from_checked_spectrum(m: SquareComplexMatrix) -> Self {
        Self(m)
    }

    /// |ψ⟩⟨ψ| for a normalized ket.
    pub fn pure(ket: &[C64]) -> Result<Self> {
        let norm: f64 = ket.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > DENSITY_TRACE_TOL {
            return Err(Error::BadTrace {
                trace_re: norm,
                trace_im: 0.0,
            });
        }
        Self::new(SquareComplexMatrix::outer(ket)?)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(SquareComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &SquareComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> SquareComplexMatrix {
        self.0
    }

    pub fn spectrum(&self) -> EigenSystem {
        hermitian_eigensystem(&self.0).expect("density matrix is Hermitian")
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.spectrum().eigenvalues[0]
    }

    /// Tr ρ²
    pub fn purity(&self) -> f64 {
        self.0.entries().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn population(&self, index: usize) -> f64 {
        self.0[(index, index)].re
    }
}

impl std::ops::Index<(usize, usize)> for DensityMatrix {
    type Output = C64;

    fn index(&self, ij: (usize, usize)) -> &C64 {
        &self.0[ij]
    }
}

/// −Σ p log₂ p over eigenvalues clamped to [0, 1], with 0·log 0 = 0.
pub fn entropy_of_spectrum(eigenvalues: &[f64]) -> f64 {
    let s: f64 = eigenvalues
        .iter()
        .map(|&p| p.clamp(0.0, 1.0))
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum();
    s.max(0.0)
}

/// Von Neumann entropy in bits.
pub fn entropy_bits(rho: &DensityMatrix) -> f64 {
    entropy_of_spectrum(&rho.spectrum().eigenvalues)
}

/// Electron ⊗ nucleus with index 2·i_e + i_n; traces out the nucleus.
pub fn partial_trace_nuclear(rho4: &DensityMatrix) -> Result<DensityMatrix> {
    if rho4.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            actual: rho4.dim(),
        });
    }
    Ok(DensityMatrix(trace_out_nucleus(rho4.matrix())))
}

pub(crate) fn trace_out_nucleus(m: &SquareComplexMatrix) -> SquareComplexMatrix {
    debug_assert_eq!(m.dim(), 4);
    let mut out = SquareComplexMatrix::zeros(2);
    for a in 0..2 {
        for b in 0..2 {
            let mut acc = ZERO;
            for n in 0..2 {
                acc += m[(2 * a + n, 2 * b + n)];
            }
            out[(a, b)] = acc;
        }
    }
    out
}

/// e^{−iHt} ρ₀ e^{+iHt} via the eigendecomposition of `h`.
pub fn unitary_evolve(h: &SquareComplexMatrix, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    if h.dim() != rho0.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho0.dim(),
            actual: h.dim(),
        });
    }
    let es = hermitian_eigensystem(h)?;
    let u = es.map_spectrum(|l| (-I * l * t).exp());
    let evolved = &(&u * rho0.matrix()) * &u.adjoint();
    DensityMatrix::new(evolved.hermitian_part())
}
