//! Dense complex linear algebra for the 2-, 4- and 9-dimensional operators
//! used throughout the crate.
//!
//! Basis convention for the battery ⊗ nucleus space: index `2·i_e + i_n`
//! with electron order (|e⟩, |g⟩) and nuclear order (|↑⟩, |↓⟩), i.e.
//! (|e↑⟩, |e↓⟩, |g↑⟩, |g↓⟩).

mod density;
mod eigen;
mod matrix;

pub use density::{
    entropy_bits, entropy_of_spectrum, partial_trace_nuclear, unitary_evolve, DensityMatrix,
    DENSITY_HERMITIAN_TOL, DENSITY_POSITIVITY_TOL, DENSITY_TRACE_TOL,
};
pub use eigen::{hermitian_eigensystem, EigenSystem, HERMITIAN_TOL, JACOBI_OFFDIAG_TOL};
pub use matrix::{SquareComplexMatrix, SUPPORTED_DIMS};

pub(crate) use density::trace_out_nucleus;
pub(crate) use matrix::{I, ONE, ZERO};
