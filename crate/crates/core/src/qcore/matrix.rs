use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub const SUPPORTED_DIMS: [usize; 3] = [2, 4, 9];

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Dense row-major complex matrix of dimension 2, 4 or 9.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareComplexMatrix {
    dim: usize,
    entries: Vec<C64>,
}

fn check_dim(dim: usize) -> Result<()> {
    if SUPPORTED_DIMS.contains(&dim) {
        Ok(())
    } else {
        Err(Error::InvalidDimension(dim))
    }
}

impl SquareComplexMatrix {
    /// Builds a matrix from `dim²` row-major entries.
    pub fn from_entries(dim: usize, entries: Vec<C64>) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        if let Some(k) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                row: k / dim,
                col: k % dim,
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn from_rows<const N: usize>(rows: [[C64; N]; N]) -> Result<Self> {
        Self::from_entries(N, rows.iter().flatten().copied().collect())
    }

    pub fn from_real_rows<const N: usize>(rows: [[f64; N]; N]) -> Result<Self> {
        Self::from_entries(N, rows.iter().flatten().map(|&x| C64::from(x)).collect())
    }

    /// Panics if `dim` is not one of 2, 4, 9.
    pub fn zeros(dim: usize) -> Self {
        check_dim(dim).expect("unsupported matrix dimension");
        Self {
            dim,
            entries: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let dim = values.len();
        check_dim(dim)?;
        let mut m = Self::zeros(dim);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::from(v);
        }
        Ok(m)
    }

    /// |ket⟩⟨ket|
    pub fn outer(ket: &[C64]) -> Result<Self> {
        let dim = ket.len();
        check_dim(dim)?;
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = ket[i] * ket[j].conj();
            }
        }
        Ok(m)
    }

    /// Kronecker product of two small operators (2⊗2 → 4, 3⊗3 → 9).
    pub fn kron(a: &[C64], a_dim: usize, b: &[C64], b_dim: usize) -> Result<Self> {
        debug_assert_eq!(a.len(), a_dim * a_dim);
        debug_assert_eq!(b.len(), b_dim * b_dim);
        let dim = a_dim * b_dim;
        check_dim(dim)?;
        let mut m = Self::zeros(dim);
        for i1 in 0..a_dim {
            for j1 in 0..a_dim {
                let x = a[i1 * a_dim + j1];
                if x == ZERO {
                    continue;
                }
                for i2 in 0..b_dim {
                    for j2 in 0..b_dim {
                        m[(i1 * b_dim + i2, j1 * b_dim + j2)] = x * b[i2 * b_dim + j2];
                    }
                }
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// max |M − M†| entrywise.
    pub fn max_hermitian_asymmetry(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// (M + M†) / 2
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim;
        let mut out = self.clone();
        for i in 0..n {
            out[(i, i)] = C64::from(self[(i, i)].re);
            for j in (i + 1)..n {
                let z = 0.5 * (self[(i, j)] + self[(j, i)].conj());
                out[(i, j)] = z;
                out[(j, i)] = z.conj();
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * s).collect(),
        }
    }

    /// self += s · other
    pub fn add_scaled(&mut self, s: C64, other: &Self) {
        assert_eq!(self.dim, other.dim);
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += s * b;
        }
    }

    /// [A, B] = AB − BA
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// {A, B} = AB + BA
    pub fn anticommutator(&self, other: &Self) -> Self {
        &(self * other) + &(other * self)
    }

    pub fn diagonal_values(&self) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }
}

impl Index<(usize, usize)> for SquareComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.entries[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for SquareComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.entries[i * self.dim + j]
    }
}

impl Mul for &SquareComplexMatrix {
    type Output = SquareComplexMatrix;

    fn mul(self, rhs: &SquareComplexMatrix) -> SquareComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in product");
        let n = self.dim;
        let mut out = SquareComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * rhs.entries[k * n + j];
                }
            }
        }
        out
    }
}

impl Add for &SquareComplexMatrix {
    type Output = SquareComplexMatrix;

    fn add(self, rhs: &SquareComplexMatrix) -> SquareComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sum");
        SquareComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &SquareComplexMatrix {
    type Output = SquareComplexMatrix;

    fn sub(self, rhs: &SquareComplexMatrix) -> SquareComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in difference");
        SquareComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        assert!(matches!(
            SquareComplexMatrix::from_entries(3, vec![ZERO; 9]),
            Err(Error::InvalidDimension(3))
        ));
        assert!(matches!(
            SquareComplexMatrix::from_entries(2, vec![ZERO; 3]),
            Err(Error::DimensionMismatch { .. })
        ));
        let mut e = vec![ZERO; 4];
        e[3] = C64::new(f64::NAN, 0.0);
        assert!(matches!(
            SquareComplexMatrix::from_entries(2, e),
            Err(Error::NonFinite { row: 1, col: 1 })
        ));
    }

    #[test]
    fn kron_orders_first_factor_as_major_index() {
        let a = [ZERO, ONE, ZERO, ZERO]; // |0⟩⟨1|
        let b = [ONE, ZERO, ZERO, ZERO]; // |0⟩⟨0|
        let m = SquareComplexMatrix::kron(&a, 2, &b, 2).unwrap();
        assert_eq!(m[(0, 2)], ONE);
        assert!((m.frobenius_norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn commutator_of_paulis() {
        let x = SquareComplexMatrix::from_real_rows([[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let z = SquareComplexMatrix::from_real_rows([[1.0, 0.0], [0.0, -1.0]]).unwrap();
        // [X, Z] = -2iY, Y = [[0,-i],[i,0]]
        let c = x.commutator(&z);
        assert_eq!(c[(0, 1)], C64::new(-2.0, 0.0));
        assert_eq!(c[(1, 0)], C64::new(2.0, 0.0));
    }
}
