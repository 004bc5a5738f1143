//! Right coprime factorization `B^{-1} A = C D^{-1}` over the plus algebra and
//! the finite-section kernel/range identity that comes with it.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::gram::check_b_invertible;
use super::toeplitz::toeplitz_truncate;
use crate::apcore::ApMatrix;
use crate::error::{ApwError, Result};
use crate::geometry::{matrix_spectrum_in, Halfspace};
use crate::laurent::matrix::{MatSeries, PolyMatrix};
use crate::laurent::ring::{reduce_columns, NOISE_TOL};
use crate::laurent::{laurent_inverse_truncated, EuclidRing, PlusRing, Rank1Reduction, Side};
use crate::options::SolverOptions;

#[derive(Clone, Debug, PartialEq)]
pub struct CoprimeFactorization {
    /// `p x m`
    pub c: ApMatrix,
    /// `m x m`
    pub d: ApMatrix,
    /// Bezout certificate `X D + Y C = I` with `X` (`m x m`), `Y` (`m x p`).
    pub x: ApMatrix,
    pub y: ApMatrix,
    pub bezout_residual: f64,
    /// `max ||A D - B C||_W` over entries.
    pub product_residual: f64,
    pub min_abs_det_d: f64,
}

/// Series-level output shared with the corona solver.
pub(crate) struct CoprimeSeries {
    pub red: Rank1Reduction,
    pub c: MatSeries,
    pub d: MatSeries,
    pub x: MatSeries,
    pub y: MatSeries,
    pub bezout_residual: f64,
}

fn block(m: &PolyMatrix, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> MatSeries {
    let sub: PolyMatrix = m[rows.clone()].iter().map(|r| r[cols.clone()].to_vec()).collect();
    MatSeries::from_polys(rows.len(), cols.len(), &sub)
}

pub(crate) fn coprime_series(a: &ApMatrix, b: &ApMatrix, s: &Halfspace, opts: &SolverOptions) -> Result<CoprimeSeries> {
    let (p, m) = a.shape();
    if b.shape() != (p, p) {
        return Err(ApwError::Shape(format!("B must be {p}x{p}")));
    }
    if !matrix_spectrum_in(a, s)? || !matrix_spectrum_in(b, s)? {
        return Err(ApwError::Domain("spectra of A and B must lie in S".into()));
    }
    let red = Rank1Reduction::for_matrices(&[a, b], s)?;
    let pa = red.matrix_to_polys(a)?;
    let pb = red.matrix_to_polys(b)?;
    let stacked: PolyMatrix = (0..p)
        .map(|i| pa[i].iter().cloned().chain(pb[i].iter().map(|q| -q)).collect())
        .collect();
    let cr = reduce_columns(&PlusRing, &stacked)?;
    for i in 0..p {
        let d = &cr.reduced[i][i];
        if d.is_zero() || !PlusRing.is_unit(&d.cleaned(NOISE_TOL * d.norm1())) {
            return Err(ApwError::NotCoprime(format!(
                "[A, -B] does not reduce to units (row {i}); A and B are not left coprime"
            )));
        }
    }
    let d = block(&cr.e, 0..m, p..m + p);
    let c = block(&cr.e, m..m + p, p..m + p);
    // adj(E) E = det(E) I restricted to the kernel columns
    let det_inv = laurent_inverse_truncated(&cr.det_e, Side::Plus, opts.tail_tol)
        .map_err(|e| ApwError::NotCoprime(format!("determinant of the reduction is not a plus unit: {e}")))?;
    let inv_scale = |s: MatSeries| {
        let polys: PolyMatrix = s.to_polys().iter().map(|row| row.iter().map(|q| q * &det_inv).collect()).collect();
        MatSeries::from_polys(s.rows(), s.cols(), &polys)
    };
    let x = inv_scale(block(&cr.adj_e, p..m + p, 0..m));
    let y = inv_scale(block(&cr.adj_e, p..m + p, m..m + p));
    let bezout = x.mul(&d).add(&y.mul(&c)).distance(&MatSeries::identity(m));
    Ok(CoprimeSeries {
        red,
        c,
        d,
        x,
        y,
        bezout_residual: bezout,
    })
}

/// From a left coprime pair `(A, B)` with `B` invertible, builds a right
/// coprime pair `(C, D)` over the plus algebra with `A D = B C`.
///
/// The pair is unique up to a right factor that is unimodular over the plus
/// algebra.
pub fn right_coprime_from_left(
    a: &ApMatrix,
    b: &ApMatrix,
    s: &Halfspace,
    opts: &SolverOptions,
) -> Result<CoprimeFactorization> {
    check_b_invertible(b, opts)?;
    let cs = coprime_series(a, b, s, opts)?;
    let red = &cs.red;
    let c = red.series_to_matrix(&cs.c);
    let d = red.series_to_matrix(&cs.d);
    let min_det = d.min_abs_det(opts.grid_density, opts.seed)?;
    if !(min_det >= 1e-9) {
        return Err(ApwError::NotInvertible(format!(
            "denominator D is not invertible: sampled min |det D| = {min_det:.3e}"
        )));
    }
    let product_residual = a.mul(&d)?.wiener_distance(&b.mul(&c)?)?;
    Ok(CoprimeFactorization {
        x: red.series_to_matrix(&cs.x),
        y: red.series_to_matrix(&cs.y),
        c,
        d,
        bezout_residual: cs.bezout_residual,
        product_residual,
        min_abs_det_d: min_det,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelRangeReport {
    /// Spectral norm of `[T(A), -T(B)] [T(D); T(C)]`.
    pub product_residual: f64,
    /// `|dim ker [T(A), -T(B)] - rank [T(D); T(C)]|` on the section.
    pub rank_gap: usize,
    pub residual: f64,
}

fn numerical_rank(m: &DMatrix<Complex64>) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().singular_values();
    let tol = 1e-9 * sv.max().max(1.0);
    sv.iter().filter(|&&x| x > tol).count()
}

/// Finite-section check that the kernel of `[T(A), -T(B)]` is the range of
/// `[T(D); T(C)]`. Diagnostic only.
pub fn kernel_range_check(
    a: &ApMatrix,
    b: &ApMatrix,
    c: &ApMatrix,
    d: &ApMatrix,
    s: &Halfspace,
    cutoff: usize,
) -> Result<KernelRangeReport> {
    let (p, m) = a.shape();
    if b.shape() != (p, p) || c.shape() != (p, m) || d.shape() != (m, m) {
        return Err(ApwError::Shape("A p x m, B p x p, C p x m and D m x m expected".into()));
    }
    let ta = toeplitz_truncate(a, s, cutoff)?.matrix;
    let tb = toeplitz_truncate(b, s, cutoff)?.matrix;
    let tc = toeplitz_truncate(c, s, cutoff)?.matrix;
    let td = toeplitz_truncate(d, s, cutoff)?.matrix;
    let mut k = DMatrix::zeros(ta.nrows(), ta.ncols() + tb.ncols());
    k.view_mut((0, 0), ta.shape()).copy_from(&ta);
    k.view_mut((0, ta.ncols()), tb.shape()).copy_from(&(-&tb));
    let mut im = DMatrix::zeros(td.nrows() + tc.nrows(), td.ncols());
    im.view_mut((0, 0), td.shape()).copy_from(&td);
    im.view_mut((td.nrows(), 0), tc.shape()).copy_from(&tc);
    let prod = &k * &im;
    let product_residual = if prod.is_empty() {
        0.0
    } else {
        prod.singular_values().max()
    };
    let dim_ker = k.ncols() - numerical_rank(&k);
    let rank_im = numerical_rank(&im);
    let rank_gap = dim_ker.abs_diff(rank_im);
    Ok(KernelRangeReport {
        product_residual,
        rank_gap,
        residual: product_residual.max(rank_gap as f64),
    })
}
