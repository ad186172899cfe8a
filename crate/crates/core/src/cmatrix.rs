//! Minimal dense complex matrices.
//!
//! The dimensions in this crate stay tiny (a handful of modes plus a vacuum
//! slot), so a flat row-major `Vec` with straightforward loops beats pulling
//! in a general linear-algebra stack. Only the operations the simulator
//! actually needs are implemented.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense square complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> CMatrix<T> {
    /// Zero matrix of size `dim` x `dim`.
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }

    /// Identity matrix.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    /// Builds a matrix from row slices. All rows must have length `rows.len()`.
    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions must agree");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.re.is_zero() && a.im.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] = out[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        out
    }

    /// Conjugate transpose.
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

    /// Entrywise linear combination `alpha * self + beta * rhs`.
    pub fn lincomb(&self, alpha: T, rhs: &Self, beta: T) -> Self {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions must agree");
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.scale(alpha) + b.scale(beta))
            .collect();
        Self {
            dim: self.dim,
            data,
        }
    }

    /// Largest absolute entry of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &Self) -> T {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions must agree");
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }

    /// Largest deviation of `self^H self` from the identity.
    pub fn unitarity_deviation(&self) -> T {
        self.adjoint().mul(self).max_abs_diff(&Self::identity(self.dim))
    }

    /// Largest absolute entry of `self - self^H`.
    pub fn hermiticity_deviation(&self) -> T {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn trace(&self) -> Complex<T> {
        let mut t = Complex::new(T::zero(), T::zero());
        for i in 0..self.dim {
            t = t + self[(i, i)];
        }
        t
    }

    /// Cholesky-style positivity probe: succeeds iff `self + shift * I` admits
    /// a (tolerant) factorization, i.e. iff the smallest eigenvalue is no more
    /// negative than roughly `-shift`. Assumes the matrix is hermitian.
    pub fn is_positive_semidefinite(&self, shift: T) -> bool {
        let n = self.dim;
        let mut a = self.clone();
        for i in 0..n {
            a[(i, i)] = a[(i, i)] + Complex::new(shift, T::zero());
        }
        // slack for factorization round-off on top of the explicit shift
        let floor = -(shift + T::algebra_tolerance()) * T::from_real(1e-3) - T::min_positive_value();
        let mut l = Self::zeros(n);
        for j in 0..n {
            let mut d = a[(j, j)].re;
            for k in 0..j {
                d = d - l[(j, k)].norm_sqr();
            }
            if d < floor {
                return false;
            }
            let d = d.max(T::zero());
            let dj = d.sqrt();
            l[(j, j)] = Complex::new(dj, T::zero());
            for i in (j + 1)..n {
                let mut s = a[(i, j)];
                for k in 0..j {
                    s = s - l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = if dj > T::zero() {
                    s / Complex::new(dj, T::zero())
                } else {
                    // zero pivot: a nonzero coupling below it would mean an
                    // indefinite matrix, treat anything above noise as failure
                    if s.norm() > shift.sqrt() + T::algebra_tolerance().sqrt() {
                        return false;
                    }
                    Complex::new(T::zero(), T::zero())
                };
            }
        }
        true
    }
}

impl<T> std::ops::Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.dim + j]
    }
}
