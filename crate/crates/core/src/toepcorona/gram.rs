//! Finite-section Gram test `T(A)T(A)* - T(B)T(B)*/gamma^2 >= 0`, a necessary
//! condition for `A F = B` to have a solution with `||F||_inf <= gamma`.

use nalgebra::linalg::SymmetricEigen;
use nalgebra::DMatrix;
use num_complex::Complex64;

use super::toeplitz::toeplitz_truncate;
use crate::apcore::ApMatrix;
use crate::error::{ApwError, Result};
use crate::geometry::{matrix_spectrum_in, Halfspace};
use crate::options::SolverOptions;

/// Margins at or above this count as passing.
pub const GRAM_PASS_TOL: f64 = -1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct GramReport {
    pub passes: bool,
    /// Smallest eigenvalue of the Gram difference on the section.
    pub margin: f64,
    pub section_size: usize,
    pub cutoff: usize,
    pub gamma: f64,
}

pub(crate) fn check_corona_shapes(a: &ApMatrix, b: &ApMatrix, gamma: f64, s: &Halfspace) -> Result<()> {
    let p = a.rows();
    if b.shape() != (p, p) {
        return Err(ApwError::Shape(format!("B must be {p}x{p}, got {}x{}", b.rows(), b.cols())));
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(ApwError::Domain(format!("gamma must be positive, got {gamma}")));
    }
    if !(std::sync::Arc::ptr_eq(a.basis(), b.basis()) || a.basis() == b.basis()) {
        return Err(ApwError::BasisMismatch);
    }
    if !matrix_spectrum_in(a, s)? || !matrix_spectrum_in(b, s)? {
        return Err(ApwError::Domain("spectra of A and B must lie in S".into()));
    }
    Ok(())
}

pub(crate) fn check_b_invertible(b: &ApMatrix, opts: &SolverOptions) -> Result<f64> {
    let d = b.min_abs_det(opts.grid_density, opts.seed)?;
    if !(d >= 1e-9) {
        return Err(ApwError::Domain(format!("B is not invertible: sampled min |det B| = {d:.3e}")));
    }
    Ok(d)
}

pub fn gram_test(a: &ApMatrix, b: &ApMatrix, gamma: f64, s: &Halfspace, opts: &SolverOptions) -> Result<GramReport> {
    check_corona_shapes(a, b, gamma, s)?;
    check_b_invertible(b, opts)?;
    let ta = toeplitz_truncate(a, s, opts.cutoff)?.matrix;
    let tb = toeplitz_truncate(b, s, opts.cutoff)?.matrix;
    let mut m: DMatrix<Complex64> = &ta * ta.adjoint() - (&tb * tb.adjoint()) / Complex64::new(gamma * gamma, 0.0);
    m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let margin = if m.is_empty() {
        0.0
    } else {
        SymmetricEigen::new(m.clone()).eigenvalues.min()
    };
    Ok(GramReport {
        passes: margin >= GRAM_PASS_TOL,
        margin,
        section_size: m.nrows(),
        cutoff: opts.cutoff,
        gamma,
    })
}
