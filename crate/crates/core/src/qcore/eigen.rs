use num_complex::Complex64 as C64;

use super::matrix::{SquareComplexMatrix, ONE, ZERO};
use crate::error::{Error, Result};

/// Absolute Hermiticity tolerance for unit-scale matrices; scaled by the
/// largest entry for Hamiltonians in rad/μs.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Jacobi stops when the off-diagonal Frobenius norm falls below this
/// (relative to max(1, ‖M‖_F)).
pub const JACOBI_OFFDIAG_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 64;

/// Ascending eigenvalues with orthonormal eigenvectors stored as columns.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: SquareComplexMatrix,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Column `k` as a ket.
    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        (0..self.dim()).map(|i| self.eigenvectors[(i, k)]).collect()
    }

    /// V f(Λ) V†
    pub fn map_spectrum(&self, f: impl Fn(f64) -> C64) -> SquareComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let fl: Vec<C64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = SquareComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for k in 0..n {
                    acc += v[(i, k)] * fl[k] * v[(j, k)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    pub fn reconstruct(&self) -> SquareComplexMatrix {
        self.map_spectrum(C64::from)
    }
}

pub(crate) fn hermitian_tolerance(m: &SquareComplexMatrix) -> f64 {
    HERMITIAN_TOL * m.max_abs().max(1.0)
}

/// Eigendecomposition of a Hermitian matrix: closed form for 2×2, cyclic
/// complex Jacobi rotations otherwise.
pub fn hermitian_eigensystem(m: &SquareComplexMatrix) -> Result<EigenSystem> {
    let asym = m.max_hermitian_asymmetry();
    if asym > hermitian_tolerance(m) {
        return Err(Error::NotHermitian { max_asymmetry: asym });
    }
    let h = m.hermitian_part();
    Ok(if h.dim() == 2 { eigen_2x2(&h) } else { jacobi(&h) })
}

fn eigen_2x2(m: &SquareComplexMatrix) -> EigenSystem {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = m[(0, 1)];
    let mean = 0.5 * (a + d);
    let half = 0.5 * (a - d);
    let r = half.hypot(b.norm());

    let mut v = SquareComplexMatrix::zeros(2);
    if b.norm() == 0.0 {
        let (lo, hi) = if a <= d { (0, 1) } else { (1, 0) };
        v[(lo, 0)] = ONE;
        v[(hi, 1)] = ONE;
        return EigenSystem {
            eigenvalues: vec![a.min(d), a.max(d)],
            eigenvectors: v,
        };
    }

    // pick the component pair that avoids cancellation
    let (lower, upper) = if half >= 0.0 {
        ([b, C64::from(-(r + half))], [C64::from(r + half), b.conj()])
    } else {
        ([C64::from(half - r), b.conj()], [b, C64::from(r - half)])
    };
    for (k, vec) in [lower, upper].iter().enumerate() {
        let norm = (vec[0].norm_sqr() + vec[1].norm_sqr()).sqrt();
        v[(0, k)] = vec[0] / norm;
        v[(1, k)] = vec[1] / norm;
    }
    EigenSystem {
        eigenvalues: vec![mean - r, mean + r],
        eigenvectors: v,
    }
}

fn off_diagonal_norm(a: &SquareComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi(m: &SquareComplexMatrix) -> EigenSystem {
    let n = m.dim();
    let mut a = m.clone();
    let mut v = SquareComplexMatrix::identity(n);
    let tol = JACOBI_OFFDIAG_TOL * m.frobenius_norm().max(1.0);

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let b = a[(p, q)];
                let mag = b.norm();
                if mag == 0.0 {
                    continue;
                }
                let phase = (b / mag).conj(); // e^{-iφ}
                let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                // V restricted to (p, q): [[c, s], [-s e^{-iφ}, c e^{-iφ}]]
                let vpp = C64::from(c);
                let vpq = C64::from(s);
                let vqp = -s * phase;
                let vqq = c * phase;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * vpp + akq * vqp;
                    a[(k, q)] = akp * vpq + akq * vqq;
                    let ekp = v[(k, p)];
                    let ekq = v[(k, q)];
                    v[(k, p)] = ekp * vpp + ekq * vqp;
                    v[(k, q)] = ekp * vpq + ekq * vqq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = vpp.conj() * apk + vqp.conj() * aqk;
                    a[(q, k)] = vpq.conj() * apk + vqq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::from(a[(p, p)].re);
                a[(q, q)] = C64::from(a[(q, q)].re);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut vecs = SquareComplexMatrix::zeros(n);
    for (col, &k) in order.iter().enumerate() {
        for i in 0..n {
            vecs[(i, col)] = v[(i, k)];
        }
    }
    EigenSystem {
        eigenvalues,
        eigenvectors: vecs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::matrix::I;
    use proptest::prelude::*;

    fn check_system(m: &SquareComplexMatrix, es: &EigenSystem) {
        let n = m.dim();
        assert!(es.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let recon = &es.reconstruct() - m;
        assert!(recon.frobenius_norm() <= 1e-9 * m.frobenius_norm().max(1.0));
        let gram = &(&es.eigenvectors.adjoint() * &es.eigenvectors) - &SquareComplexMatrix::identity(n);
        assert!(gram.frobenius_norm() <= 1e-10, "gram defect {}", gram.frobenius_norm());
    }

    #[test]
    fn identity_2x2() {
        let es = hermitian_eigensystem(&SquareComplexMatrix::identity(2)).unwrap();
        assert_eq!(es.eigenvalues, vec![1.0, 1.0]);
    }

    #[test]
    fn pauli_x() {
        let x = SquareComplexMatrix::from_real_rows([[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let es = hermitian_eigensystem(&x).unwrap();
        assert!((es.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((es.eigenvalues[1] - 1.0).abs() < 1e-15);
        check_system(&x, &es);
    }

    #[test]
    fn steady_state_at_unit_drive_ratio() {
        // (1/3)[[1, -i], [i, 2]]: eigenvalues (3 ∓ √5)/6
        let third = 1.0 / 3.0;
        let m = SquareComplexMatrix::from_rows([
            [C64::from(third), -I * third],
            [I * third, C64::from(2.0 * third)],
        ])
        .unwrap();
        let es = hermitian_eigensystem(&m).unwrap();
        let s5 = 5f64.sqrt();
        assert!((es.eigenvalues[0] - (3.0 - s5) / 6.0).abs() < 1e-14);
        assert!((es.eigenvalues[1] - (3.0 + s5) / 6.0).abs() < 1e-14);
        assert!((es.eigenvalues[0] - 0.1273).abs() < 1e-4);
        check_system(&m, &es);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = SquareComplexMatrix::from_real_rows([[0.0, 1.0], [0.0, 0.0]]).unwrap();
        match hermitian_eigensystem(&m) {
            Err(Error::NotHermitian { max_asymmetry }) => assert!((max_asymmetry - 1.0).abs() < 1e-15),
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_4x4_block() {
        let mut m = SquareComplexMatrix::identity(4);
        m[(0, 3)] = C64::new(0.0, 0.5);
        m[(3, 0)] = C64::new(0.0, -0.5);
        let es = hermitian_eigensystem(&m).unwrap();
        assert!((es.eigenvalues[0] - 0.5).abs() < 1e-14);
        assert!((es.eigenvalues[3] - 1.5).abs() < 1e-14);
        check_system(&m, &es);
    }

    fn random_hermitian(dim: usize, vals: &[f64]) -> SquareComplexMatrix {
        let mut m = SquareComplexMatrix::zeros(dim);
        let mut k = 0;
        for i in 0..dim {
            m[(i, i)] = C64::from(vals[k]);
            k += 1;
            for j in (i + 1)..dim {
                let z = C64::new(vals[k], vals[k + 1]);
                k += 2;
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    proptest! {
        #[test]
        fn random_hermitian_reconstructs(
            dim in prop::sample::select(vec![2usize, 4, 9]),
            vals in prop::collection::vec(-5.0f64..5.0, 81),
        ) {
            let m = random_hermitian(dim, &vals);
            let es = hermitian_eigensystem(&m).unwrap();
            check_system(&m, &es);
        }
    }
}
