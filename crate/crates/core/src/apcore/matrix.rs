use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::basis::{Frequency, FrequencyBasis};
use super::poly::ApPolynomial;
use super::sampling;
use crate::error::{ApwError, Result};

/// An `m x n` matrix of AP polynomials over one frequency basis (row-major).
///
/// Zero-sized matrices are allowed so that empty blocks can be represented.
#[derive(Clone, Debug, PartialEq)]
pub struct ApMatrix {
    basis: Arc<FrequencyBasis>,
    rows: usize,
    cols: usize,
    entries: Vec<ApPolynomial>,
}

impl ApMatrix {
    pub fn new(basis: Arc<FrequencyBasis>, rows: usize, cols: usize, entries: Vec<ApPolynomial>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(ApwError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|e| !(Arc::ptr_eq(e.basis(), &basis) || **e.basis() == *basis)) {
            return Err(ApwError::BasisMismatch);
        }
        Ok(ApMatrix {
            basis,
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(basis: Arc<FrequencyBasis>, rows: Vec<Vec<ApPolynomial>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(ApwError::Shape("ragged rows".into()));
        }
        Self::new(basis, m, n, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(
        basis: Arc<FrequencyBasis>,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> ApPolynomial,
    ) -> Self {
        let entries = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        ApMatrix {
            basis,
            rows,
            cols,
            entries,
        }
    }

    pub fn zeros(basis: Arc<FrequencyBasis>, rows: usize, cols: usize) -> Self {
        let z = ApPolynomial::zero(basis.clone());
        Self::from_fn(basis, rows, cols, |_, _| z.clone())
    }

    pub fn identity(basis: Arc<FrequencyBasis>, n: usize) -> Self {
        let one = ApPolynomial::one(basis.clone());
        let zero = ApPolynomial::zero(basis.clone());
        Self::from_fn(basis, n, n, |i, j| if i == j { one.clone() } else { zero.clone() })
    }

    /// Diagonal matrix of characters `e_{l_j}`.
    pub fn diag_characters(basis: Arc<FrequencyBasis>, freqs: &[Frequency]) -> Result<Self> {
        let n = freqs.len();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(if i == j {
                    ApPolynomial::monomial(basis.clone(), freqs[i].clone(), Complex64::new(1.0, 0.0))?
                } else {
                    ApPolynomial::zero(basis.clone())
                });
            }
        }
        Self::new(basis, n, n, entries)
    }

    pub fn scalar(p: ApPolynomial) -> Self {
        ApMatrix {
            basis: p.basis().clone(),
            rows: 1,
            cols: 1,
            entries: vec![p],
        }
    }

    pub fn basis(&self) -> &Arc<FrequencyBasis> {
        &self.basis
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &ApPolynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: ApPolynomial) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[ApPolynomial] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[ApPolynomial] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    fn check(&self, other: &ApMatrix) -> Result<()> {
        if Arc::ptr_eq(&self.basis, &other.basis) || *self.basis == *other.basis {
            Ok(())
        } else {
            Err(ApwError::BasisMismatch)
        }
    }

    pub fn add(&self, other: &ApMatrix) -> Result<ApMatrix> {
        self.check(other)?;
        if self.shape() != other.shape() {
            return Err(ApwError::Shape(format!(
                "cannot add {:?} and {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(ApMatrix {
            entries,
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &ApMatrix) -> Result<ApMatrix> {
        self.add(&other.map(|p| p.neg()))
    }

    pub fn mul(&self, other: &ApMatrix) -> Result<ApMatrix> {
        self.check(other)?;
        if self.cols != other.rows {
            return Err(ApwError::Shape(format!(
                "cannot multiply {:?} by {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = ApPolynomial::zero(self.basis.clone());
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j))?)?;
                }
                entries.push(acc);
            }
        }
        Ok(ApMatrix {
            basis: self.basis.clone(),
            rows: self.rows,
            cols: other.cols,
            entries,
        })
    }

    pub fn scale(&self, s: Complex64) -> ApMatrix {
        self.map(|p| p.scale(s))
    }

    /// Applies `op` to every entry.
    pub fn map(&self, op: impl FnMut(&ApPolynomial) -> ApPolynomial) -> ApMatrix {
        ApMatrix {
            basis: self.basis.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(op).collect(),
        }
    }

    pub fn try_map(&self, op: impl FnMut(&ApPolynomial) -> Result<ApPolynomial>) -> Result<ApMatrix> {
        Ok(ApMatrix {
            basis: self.basis.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(op).collect::<Result<_>>()?,
        })
    }

    pub fn transpose(&self) -> ApMatrix {
        ApMatrix::from_fn(self.basis.clone(), self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// `G*`, with `G*(i, j) = conj(G(j, i))`.
    pub fn conj_transpose(&self) -> ApMatrix {
        ApMatrix::from_fn(self.basis.clone(), self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> ApMatrix {
        let (r0, c0) = (rows.start, cols.start);
        ApMatrix::from_fn(self.basis.clone(), rows.len(), cols.len(), |i, j| {
            self.get(r0 + i, c0 + j).clone()
        })
    }

    pub fn hstack(&self, other: &ApMatrix) -> Result<ApMatrix> {
        self.check(other)?;
        if self.rows != other.rows {
            return Err(ApwError::Shape("hstack needs equal row counts".into()));
        }
        let c = self.cols;
        Ok(ApMatrix::from_fn(self.basis.clone(), self.rows, c + other.cols, |i, j| {
            if j < c {
                self.get(i, j).clone()
            } else {
                other.get(i, j - c).clone()
            }
        }))
    }

    pub fn vstack(&self, other: &ApMatrix) -> Result<ApMatrix> {
        self.check(other)?;
        if self.cols != other.cols {
            return Err(ApwError::Shape("vstack needs equal column counts".into()));
        }
        let r = self.rows;
        Ok(ApMatrix::from_fn(self.basis.clone(), r + other.rows, self.cols, |i, j| {
            if i < r {
                self.get(i, j).clone()
            } else {
                other.get(i - r, j).clone()
            }
        }))
    }

    /// Permutes columns: column `j` of the result is column `perm[j]` of `self`.
    pub fn permute_cols(&self, perm: &[usize]) -> ApMatrix {
        ApMatrix::from_fn(self.basis.clone(), self.rows, perm.len(), |i, j| self.get(i, perm[j]).clone())
    }

    pub fn permute_rows(&self, perm: &[usize]) -> ApMatrix {
        ApMatrix::from_fn(self.basis.clone(), perm.len(), self.cols, |i, j| self.get(perm[i], j).clone())
    }

    pub fn eval(&self, x: &[f64]) -> Result<DMatrix<Complex64>> {
        let vals = self.entries.iter().map(|p| p.eval(x)).collect::<Result<Vec<_>>>()?;
        Ok(DMatrix::from_row_slice(self.rows, self.cols, &vals))
    }

    pub fn eval_torus(&self, theta: &[f64]) -> DMatrix<Complex64> {
        let vals: Vec<Complex64> = self.entries.iter().map(|p| p.eval_torus(theta)).collect();
        DMatrix::from_row_slice(self.rows, self.cols, &vals)
    }

    /// Largest entry Wiener norm.
    pub fn max_wiener_norm(&self) -> f64 {
        self.entries.iter().map(ApPolynomial::wiener_norm).fold(0.0, f64::max)
    }

    /// Largest entrywise Wiener distance.
    pub fn wiener_distance(&self, other: &ApMatrix) -> Result<f64> {
        self.check(other)?;
        if self.shape() != other.shape() {
            return Err(ApwError::Shape("distance between different shapes".into()));
        }
        let mut worst: f64 = 0.0;
        for (a, b) in self.entries.iter().zip(&other.entries) {
            worst = worst.max(a.wiener_distance(b)?);
        }
        Ok(worst)
    }

    /// Sampled operator-norm estimate `max_t ||G(t)||_2`.
    pub fn sup_norm_estimate(&self, grid_density: usize, seed: u64) -> f64 {
        if self.rows == 0 || self.cols == 0 {
            return 0.0;
        }
        sampling::torus_grid(self.basis.rank(), grid_density.max(1), seed)
            .iter()
            .map(|t| spectral_norm(&self.eval_torus(t)))
            .fold(0.0, f64::max)
    }

    /// Minimum of `|det G(t)|` over the sample grid (square matrices only).
    pub fn min_abs_det(&self, grid_density: usize, seed: u64) -> Result<f64> {
        if self.rows != self.cols {
            return Err(ApwError::Shape("determinant of a non-square matrix".into()));
        }
        Ok(sampling::torus_grid(self.basis.rank(), grid_density.max(1), seed)
            .iter()
            .map(|t| self.eval_torus(t).determinant().norm())
            .fold(f64::INFINITY, f64::min))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(ApPolynomial::is_zero)
    }
}

pub(crate) fn spectral_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().iter().copied().fold(0.0, f64::max)
}
