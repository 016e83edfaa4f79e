#![allow(dead_code)]

use nvqb::qcore::{DensityMatrix, SquareComplexMatrix};
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// ρ = GG†/tr(GG†) with G uniform in the complex unit square.
pub fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> DensityMatrix {
    let g: Vec<C64> = (0..dim * dim)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let g = SquareComplexMatrix::from_entries(dim, g).unwrap();
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / tr).hermitian_part()).unwrap()
}

pub fn random_pure(rng: &mut ChaCha8Rng, dim: usize) -> DensityMatrix {
    let mut ket: Vec<C64> = (0..dim)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let n = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    ket.iter_mut().for_each(|z| *z /= n);
    DensityMatrix::pure(&ket).unwrap()
}
