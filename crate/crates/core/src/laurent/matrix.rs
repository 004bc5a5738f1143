//! Matrix-valued Laurent series with dense coefficient blocks.

use nalgebra::DMatrix;

use super::{LaurentPoly, C64};
use crate::error::{ApwError, Result};

/// `sum_j coeffs[j] z^(low + j)` with `rows x cols` blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct MatSeries {
    rows: usize,
    cols: usize,
    low: i64,
    coeffs: Vec<DMatrix<C64>>,
}

pub type PolyMatrix = Vec<Vec<LaurentPoly>>;

impl MatSeries {
    pub fn new(rows: usize, cols: usize, low: i64, coeffs: Vec<DMatrix<C64>>) -> Self {
        debug_assert!(coeffs.iter().all(|c| c.shape() == (rows, cols)));
        let mut s = MatSeries {
            rows,
            cols,
            low,
            coeffs,
        };
        s.strip_zero_blocks();
        s
    }

    fn strip_zero_blocks(&mut self) {
        let is_zero = |m: &DMatrix<C64>| m.iter().all(|c| *c == C64::default());
        while self.coeffs.last().is_some_and(is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|m| is_zero(m)).count();
        self.coeffs.drain(..lead);
        self.low = if self.coeffs.is_empty() { 0 } else { self.low + lead as i64 };
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatSeries {
            rows,
            cols,
            low: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::constant(DMatrix::identity(n, n))
    }

    pub fn constant(m: DMatrix<C64>) -> Self {
        let (r, c) = m.shape();
        Self::new(r, c, 0, vec![m])
    }

    pub fn from_polys(rows: usize, cols: usize, entries: &PolyMatrix) -> Self {
        let nonzero = entries.iter().flatten().filter(|p| !p.is_zero());
        let lo = nonzero.clone().map(LaurentPoly::low).min();
        let hi = nonzero.map(LaurentPoly::high).max();
        let (Some(lo), Some(hi)) = (lo, hi) else {
            return Self::zeros(rows, cols);
        };
        let coeffs = (lo..=hi)
            .map(|k| DMatrix::from_fn(rows, cols, |i, j| entries[i][j].coeff(k)))
            .collect();
        Self::new(rows, cols, lo, coeffs)
    }

    pub fn scalar(p: &LaurentPoly) -> Self {
        Self::from_polys(1, 1, &vec![vec![p.clone()]])
    }

    pub fn to_polys(&self) -> PolyMatrix {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    pub fn entry(&self, i: usize, j: usize) -> LaurentPoly {
        LaurentPoly::new(self.low, self.coeffs.iter().map(|m| m[(i, j)]).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[DMatrix<C64>] {
        &self.coeffs
    }

    /// Block at exponent `k` (zero block outside the support).
    pub fn coeff(&self, k: i64) -> DMatrix<C64> {
        let j = k - self.low;
        if j < 0 || j >= self.coeffs.len() as i64 {
            DMatrix::zeros(self.rows, self.cols)
        } else {
            self.coeffs[j as usize].clone()
        }
    }

    pub fn add(&self, other: &MatSeries) -> MatSeries {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "series shape mismatch");
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.low.min(other.low);
        let hi = self.high().max(other.high());
        let coeffs = (lo..=hi).map(|k| self.coeff(k) + other.coeff(k)).collect();
        MatSeries::new(self.rows, self.cols, lo, coeffs)
    }

    pub fn sub(&self, other: &MatSeries) -> MatSeries {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> MatSeries {
        MatSeries::new(self.rows, self.cols, self.low, self.coeffs.iter().map(|m| m * s).collect())
    }

    pub fn mul(&self, other: &MatSeries) -> MatSeries {
        assert_eq!(self.cols, other.rows, "series shape mismatch");
        if self.is_zero() || other.is_zero() {
            return MatSeries::zeros(self.rows, other.cols);
        }
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let mut out = vec![DMatrix::zeros(self.rows, other.cols); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        MatSeries::new(self.rows, other.cols, self.low + other.low, out)
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i64) -> MatSeries {
        let mut s = self.clone();
        if !s.is_zero() {
            s.low += k;
        }
        s
    }

    /// Pointwise adjoint on the circle: conjugate transpose with `z -> 1/z`.
    pub fn adjoint(&self) -> MatSeries {
        let coeffs = self.coeffs.iter().rev().map(|m| m.adjoint()).collect();
        MatSeries::new(self.cols, self.rows, -self.high(), coeffs)
    }

    pub fn transpose(&self) -> MatSeries {
        MatSeries::new(
            self.cols,
            self.rows,
            self.low,
            self.coeffs.iter().map(|m| m.transpose()).collect(),
        )
    }

    /// `G(1/z)`.
    pub fn reflect(&self) -> MatSeries {
        MatSeries::new(self.rows, self.cols, -self.high(), self.coeffs.iter().rev().cloned().collect())
    }

    /// Blocks with exponent in `lo..=hi`.
    pub fn window(&self, lo: i64, hi: i64) -> MatSeries {
        if hi < lo {
            return MatSeries::zeros(self.rows, self.cols);
        }
        MatSeries::new(self.rows, self.cols, lo, (lo..=hi).map(|k| self.coeff(k)).collect())
    }

    /// Drops leading and trailing blocks whose entries are all `<= tol` in modulus.
    pub fn trimmed(&self, tol: f64) -> MatSeries {
        let small = |m: &DMatrix<C64>| m.iter().all(|c| c.norm() <= tol);
        let first = self.coeffs.iter().position(|m| !small(m));
        let last = self.coeffs.iter().rposition(|m| !small(m));
        match (first, last) {
            (Some(a), Some(b)) => MatSeries::new(self.rows, self.cols, self.low + a as i64, self.coeffs[a..=b].to_vec()),
            _ => MatSeries::zeros(self.rows, self.cols),
        }
    }

    /// Drops the trailing (high-exponent) blocks whose combined l1 mass per
    /// entry stays below `tol`.
    pub fn truncate_tail(&self, tol: f64) -> MatSeries {
        let mut mass = DMatrix::<f64>::zeros(self.rows, self.cols);
        let mut keep = self.coeffs.len();
        for (j, m) in self.coeffs.iter().enumerate().rev() {
            mass += m.map(|c| c.norm());
            if mass.max() > tol {
                break;
            }
            keep = j;
        }
        MatSeries::new(self.rows, self.cols, self.low, self.coeffs[..keep].to_vec())
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> MatSeries {
        let coeffs = self
            .coeffs
            .iter()
            .map(|m| m.view((rows.start, cols.start), (rows.len(), cols.len())).into_owned())
            .collect();
        MatSeries::new(rows.len(), cols.len(), self.low, coeffs)
    }

    pub fn hstack(&self, other: &MatSeries) -> MatSeries {
        assert_eq!(self.rows, other.rows);
        let lo = self.low.min(other.low);
        let hi = self.high().max(other.high());
        let coeffs = (lo..=hi)
            .map(|k| {
                let (a, b) = (self.coeff(k), other.coeff(k));
                let mut m = DMatrix::zeros(self.rows, self.cols + other.cols);
                m.view_mut((0, 0), (self.rows, self.cols)).copy_from(&a);
                m.view_mut((0, self.cols), (self.rows, other.cols)).copy_from(&b);
                m
            })
            .collect();
        MatSeries::new(self.rows, self.cols + other.cols, lo, coeffs)
    }

    pub fn vstack(&self, other: &MatSeries) -> MatSeries {
        self.transpose().hstack(&other.transpose()).transpose()
    }

    pub fn eval(&self, z: C64) -> DMatrix<C64> {
        let mut acc = DMatrix::zeros(self.rows, self.cols);
        for m in self.coeffs.iter().rev() {
            acc = acc * z + m;
        }
        if self.is_zero() {
            acc
        } else {
            acc * z.powi(self.low as i32)
        }
    }

    /// Largest entrywise l1 coefficient norm (the Wiener norm on the circle).
    pub fn max_entry_norm1(&self) -> f64 {
        let mut mass = DMatrix::<f64>::zeros(self.rows, self.cols);
        for m in &self.coeffs {
            mass += m.map(|c| c.norm());
        }
        if mass.is_empty() {
            0.0
        } else {
            mass.max()
        }
    }

    pub fn distance(&self, other: &MatSeries) -> f64 {
        self.sub(other).max_entry_norm1()
    }

    /// Truncated inverse in the algebra of power series in `z`: `X` with
    /// `||self * X - I||` (max entry l1) at most `tol`. `self` must have no
    /// negative powers and an invertible constant block.
    pub fn plus_inverse(&self, tol: f64, max_len: usize) -> Result<MatSeries> {
        let n = self.rows;
        if n != self.cols {
            return Err(ApwError::Shape("inverse of a non-square series".into()));
        }
        if self.is_zero() || self.low != 0 {
            return Err(ApwError::NotInvertible(
                "series is not invertible in the plus algebra (zero constant term)".into(),
            ));
        }
        let a0_inv = self.coeffs[0]
            .clone()
            .try_inverse()
            .ok_or_else(|| ApwError::NotInvertible("constant block is singular".into()))?;
        if a0_inv.iter().any(|c| !c.is_finite()) || a0_inv.norm() > 1e14 {
            return Err(ApwError::NotInvertible("constant block is numerically singular".into()));
        }
        let d = self.coeffs.len() - 1;
        let mut x: Vec<DMatrix<C64>> = vec![a0_inv.clone()];
        let check_every = (d / 4).max(1);
        let mut best = f64::INFINITY;
        let mut stalled = 0usize;
        loop {
            let top = x.len() - 1;
            if top % check_every == 0 {
                let mut mass = DMatrix::<f64>::zeros(n, n);
                for t in top + 1..=top + d {
                    let mut s = DMatrix::<C64>::zeros(n, n);
                    for j in (t - top)..=d.min(t) {
                        s += &self.coeffs[j] * &x[t - j];
                    }
                    mass += s.map(|c| c.norm());
                }
                let res = if d == 0 { 0.0 } else { mass.max() };
                if res <= tol {
                    return Ok(MatSeries::new(n, n, 0, x));
                }
                if !res.is_finite() || res > 1e12 {
                    break;
                }
                if res < 0.5 * best {
                    best = res;
                    stalled = 0;
                } else {
                    stalled += 1;
                    // no progress over many checks: the inverse is not in the plus algebra
                    if stalled * check_every > 4096 + 8 * x.len() {
                        break;
                    }
                }
            }
            if x.len() >= max_len {
                break;
            }
            let m = x.len();
            let mut s = DMatrix::<C64>::zeros(n, n);
            for j in 1..=d.min(m) {
                s += &self.coeffs[j] * &x[m - j];
            }
            x.push(-(&a0_inv * s));
        }
        Err(ApwError::NotInvertible(
            "plus-algebra inverse series did not converge".into(),
        ))
    }

    /// Minimum of `|det|` over `n` equally spaced circle points.
    pub fn min_abs_det_on_circle(&self, n: usize) -> f64 {
        crate::apcore::sampling::circle_points(n)
            .into_iter()
            .map(|z| self.eval(z).determinant().norm())
            .fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn scalar_inverse_matches_geometric_series() {
        let p = LaurentPoly::new(0, vec![c(1.0), c(-0.5)]);
        let s = MatSeries::scalar(&p);
        let inv = s.plus_inverse(1e-12, 10_000).unwrap();
        let r = s.mul(&inv).sub(&MatSeries::identity(1));
        assert!(r.max_entry_norm1() <= 1e-12);
        assert!((inv.entry(0, 0).coeff(5) - c(0.5f64.powi(5))).norm() < 1e-15);
    }

    #[test]
    fn divergent_inverse_is_rejected() {
        let p = LaurentPoly::new(0, vec![c(1.0), c(-2.0)]);
        assert!(MatSeries::scalar(&p).plus_inverse(1e-12, 100_000).is_err());
    }

    #[test]
    fn adjoint_matches_pointwise() {
        let polys = vec![
            vec![LaurentPoly::new(-1, vec![c(1.0), C64::new(0.0, 2.0)]), LaurentPoly::one()],
            vec![LaurentPoly::zero(), LaurentPoly::new(2, vec![c(3.0)])],
        ];
        let s = MatSeries::from_polys(2, 2, &polys);
        let z = C64::from_polar(1.0, 1.3);
        let lhs = s.adjoint().eval(z);
        let rhs = s.eval(z).adjoint();
        assert!((lhs - rhs).norm() < 1e-14);
        assert_eq!(s.to_polys(), polys);
    }
}
