//! Crate-private dense kernel: row-major storage, matvec, LU solve with
//! partial pivoting, and a shifted Cholesky feasibility check.
//!
//! Desk scale only (dims up to a few hundred); independent test oracles use
//! nalgebra, never this module.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct DenseMatrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Scalar> DenseMatrix<F> {
    pub fn from_rows(rows: &[Vec<F>]) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::InvalidArgument("matrix must be non-empty".into()));
        }
        let cols = rows[0].len();
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::InvalidArgument(
                    "matrix rows must all have the same length".into(),
                ));
            }
            for &v in row {
                if !v.is_finite() {
                    return Err(Error::NonFinite("matrix entry"));
                }
                data.push(v);
            }
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> F {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn matvec(&self, x: &[F]) -> Vec<F> {
        debug_assert_eq!(x.len(), self.cols);
        let mut out = vec![F::zero(); self.rows];
        for i in 0..self.rows {
            let mut acc = F::zero();
            for j in 0..self.cols {
                acc = acc + self.at(i, j) * x[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn matvec_transpose(&self, y: &[F]) -> Vec<F> {
        debug_assert_eq!(y.len(), self.rows);
        let mut out = vec![F::zero(); self.cols];
        for i in 0..self.rows {
            let yi = y[i];
            for j in 0..self.cols {
                out[j] = out[j] + self.at(i, j) * yi;
            }
        }
        out
    }

    /// `self + other`, dims must already agree.
    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| a + b)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, factor: F) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| a * factor).collect(),
        }
    }

    /// Solves `self * x = rhs` by LU with partial pivoting. The matrix must
    /// be square and nonsingular; singularity reports an internal error
    /// because every call site builds a provably invertible system.
    pub fn lu_solve(&self, rhs: &[F]) -> Result<Vec<F>> {
        let n = self.rows;
        if self.cols != n || rhs.len() != n {
            return Err(Error::DimensionMismatch {
                context: "dense linear solve",
                expected: n,
                actual: rhs.len(),
            });
        }
        let mut a = self.data.clone();
        let mut b = rhs.to_vec();
        for col in 0..n {
            let mut pivot = col;
            let mut best = a[col * n + col].abs();
            for row in (col + 1)..n {
                let cand = a[row * n + col].abs();
                if cand > best {
                    best = cand;
                    pivot = row;
                }
            }
            if best == F::zero() || !best.is_finite() {
                return Err(Error::Internal(format!(
                    "singular matrix in dense solve at column {col}"
                )));
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                }
                b.swap(col, pivot);
            }
            let diag = a[col * n + col];
            for row in (col + 1)..n {
                let factor = a[row * n + col] / diag;
                if factor != F::zero() {
                    for j in (col + 1)..n {
                        let upd = a[col * n + j] * factor;
                        a[row * n + j] = a[row * n + j] - upd;
                    }
                    b[row] = b[row] - factor * b[col];
                }
                a[row * n + col] = F::zero();
            }
        }
        for col in (0..n).rev() {
            let mut acc = b[col];
            for j in (col + 1)..n {
                acc = acc - a[col * n + j] * b[j];
            }
            b[col] = acc / a[col * n + col];
        }
        if b.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("dense linear solve"));
        }
        Ok(b)
    }

    /// Whether `self + shift*I` admits a Cholesky factorization, i.e. all
    /// eigenvalues of the symmetric input exceed `-shift`.
    pub fn cholesky_feasible(&self, shift: F) -> bool {
        let n = self.rows;
        if self.cols != n {
            return false;
        }
        let mut l = vec![F::zero(); n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut sum = self.at(i, j) + if i == j { shift } else { F::zero() };
                for k in 0..j {
                    sum = sum - l[i * n + k] * l[j * n + k];
                }
                if i == j {
                    if sum <= F::zero() || !sum.is_finite() {
                        return false;
                    }
                    l[i * n + j] = sum.sqrt();
                } else {
                    l[i * n + j] = sum / l[j * n + j];
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lu_solves_small_system() {
        let m = DenseMatrix::<f64>::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let x = m.lu_solve(&[5.0, 10.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12);
        assert!((x[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn lu_reports_singularity() {
        let m = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(m.lu_solve(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn lu_handles_zero_pivot_with_row_swap() {
        let m = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let x = m.lu_solve(&[2.0, 3.0]).unwrap();
        assert_eq!(x, vec![3.0, 2.0]);
    }

    #[test]
    fn cholesky_detects_indefiniteness() {
        let psd = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        assert!(psd.cholesky_feasible(1e-12));
        let indef = DenseMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]]).unwrap();
        assert!(!indef.cholesky_feasible(1e-12));
    }

    #[test]
    fn matvec_transpose_matches_explicit_transpose() {
        let m = DenseMatrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]).unwrap();
        let y = [1.0, -1.0];
        assert_eq!(m.matvec_transpose(&y), vec![-3.0, -3.0, -3.0]);
    }
}
