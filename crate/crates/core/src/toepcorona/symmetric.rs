//! Symmetric canonical factorization `H = R* J R` of a Hermitian-valued
//! Laurent matrix, with `R` and `R^{-1}` in the plus algebra.
//!
//! The first block column of `T(H)^{-1}` is `Q_k J Q_0*` with `Q = R^{-1}`;
//! a finite section gives it, and `R` is then a polynomial of degree at most
//! the degree of `H`.

use nalgebra::linalg::SymmetricEigen;
use nalgebra::DMatrix;
use num_complex::Complex64;

use super::toeplitz::laurent_section;
use crate::apcore::ApMatrix;
use crate::error::{ApwError, Result};
use crate::factorization::{canonical_test, CanonicalVerdict};
use crate::geometry::Halfspace;
use crate::laurent::split::MAX_SERIES_LEN;
use crate::laurent::{MatSeries, Rank1Reduction};
use crate::options::SolverOptions;

type C64 = Complex64;

/// Row budget for the dense Toeplitz solve.
const MAX_SECTION_ROWS: usize = 1200;

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricFactorization {
    pub r: ApMatrix,
    /// Signature entries, positives first.
    pub j0: Vec<i8>,
    /// `max ||R* J R - H||_W` over entries.
    pub residual: f64,
    /// `max ||R R^{-1} - I||_W` for the truncated plus inverse.
    pub inverse_residual: f64,
    /// Finite section size used for the Toeplitz solve.
    pub section: usize,
}

pub(crate) struct SymmetricSeries {
    pub r: MatSeries,
    pub q: MatSeries,
    pub j0: Vec<i8>,
    pub residual: f64,
    pub inverse_residual: f64,
    pub section: usize,
}

pub(crate) fn signature_matrix(j0: &[i8]) -> DMatrix<C64> {
    DMatrix::from_fn(j0.len(), j0.len(), |i, j| if i == j { C64::new(j0[i] as f64, 0.0) } else { C64::default() })
}

/// `R` from the first `d + 1` blocks of `Q` by inverting the power series.
fn invert_head(q: &[DMatrix<C64>], d: usize) -> Result<Vec<DMatrix<C64>>> {
    let q0_inv = q[0]
        .clone()
        .try_inverse()
        .ok_or_else(|| ApwError::NotInvertible("leading block of the inverse factor is singular".into()))?;
    let mut r: Vec<DMatrix<C64>> = vec![q0_inv.clone()];
    for k in 1..=d {
        let mut s = DMatrix::zeros(q[0].nrows(), q[0].ncols());
        for j in 1..=k.min(q.len() - 1) {
            s += &q[j] * &r[k - j];
        }
        r.push(-(&q0_inv * s));
    }
    Ok(r)
}

/// One attempt at section size `n`: returns `(R, J)`.
fn attempt(h: &MatSeries, n: usize, d: usize) -> Result<(MatSeries, Vec<i8>)> {
    let m = h.rows();
    let t = laurent_section(h, n);
    let mut rhs = DMatrix::zeros(t.nrows(), m);
    for i in 0..m {
        rhs[(i, i)] = C64::new(1.0, 0.0);
    }
    let x = t
        .lu()
        .solve(&rhs)
        .ok_or_else(|| ApwError::NotInvertible("finite Toeplitz section is singular".into()))?;
    let x0 = x.view((0, 0), (m, m)).into_owned();
    let x0 = (&x0 + x0.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(x0);
    let scale = eig.eigenvalues.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if eig.eigenvalues.iter().any(|v| v.abs() <= 1e-13 * scale.max(f64::MIN_POSITIVE)) || scale == 0.0 {
        return Err(ApwError::NotInvertible("leading block of the Toeplitz inverse is singular".into()));
    }
    // positives first, then by decreasing modulus within each sign
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        let (va, vb) = (eig.eigenvalues[a], eig.eigenvalues[b]);
        (va < 0.0).cmp(&(vb < 0.0)).then(vb.abs().total_cmp(&va.abs()))
    });
    let j0: Vec<i8> = order.iter().map(|&i| if eig.eigenvalues[i] > 0.0 { 1 } else { -1 }).collect();
    let q0 = DMatrix::from_fn(m, m, |i, j| {
        let k = order[j];
        eig.eigenvectors[(i, k)] * eig.eigenvalues[k].abs().sqrt()
    });
    let jm = signature_matrix(&j0);
    // Q_k = X_k Q_0^{-*} J
    let q0_adj_inv = q0
        .adjoint()
        .try_inverse()
        .ok_or_else(|| ApwError::NotInvertible("singular eigenbasis".into()))?;
    let right = &q0_adj_inv * &jm;
    let q_head: Vec<DMatrix<C64>> = (0..=d.min(n))
        .map(|k| x.view((k * m, 0), (m, m)).into_owned() * &right)
        .collect();
    let r = invert_head(&q_head, d)?;
    Ok((MatSeries::new(m, m, 0, r), j0))
}

fn hermitian_residual(h: &MatSeries, r: &MatSeries, j0: &[i8]) -> f64 {
    let j = MatSeries::constant(signature_matrix(j0));
    r.adjoint().mul(&j).mul(r).distance(h)
}

pub(crate) fn symmetric_series(h: &MatSeries, opts: &SolverOptions) -> Result<SymmetricSeries> {
    let m = h.rows();
    if h.cols() != m {
        return Err(ApwError::Shape("symmetric factorization needs a square symbol".into()));
    }
    let herm = h.distance(&h.adjoint());
    let scale = h.max_entry_norm1();
    if herm > 1e-12 * scale.max(1.0) {
        return Err(ApwError::Domain(format!("symbol is not Hermitian (defect {herm:.3e})")));
    }
    if h.is_zero() {
        return Err(ApwError::NotInvertible("zero symbol".into()));
    }
    let h = h.add(&h.adjoint()).scale(C64::new(0.5, 0.0));
    let d = h.high().max(-h.low()).max(0) as usize;
    let target = 1e-11 * scale.max(1.0);
    let mut n = (8 * d).max(32);
    let mut best: Option<(f64, MatSeries, Vec<i8>, usize)> = None;
    let cap = (MAX_SECTION_ROWS / m).max(64);
    loop {
        let (r, j0) = attempt(&h, n, d)?;
        let res = hermitian_residual(&h, &r, &j0);
        if best.as_ref().is_none_or(|b| res < b.0) {
            best = Some((res, r, j0, n));
        }
        if res <= target || 2 * n > cap {
            break;
        }
        n *= 2;
    }
    let (residual, r, j0, section) = best.expect("at least one attempt");
    let q = r.plus_inverse(opts.tail_tol / (1.0 + r.max_entry_norm1()), MAX_SERIES_LEN)?;
    let inverse_residual = r.mul(&q).distance(&MatSeries::identity(m));
    Ok(SymmetricSeries {
        r,
        q,
        j0,
        residual,
        inverse_residual,
        section,
    })
}

/// Inertia of `H` at the sample points; `None` if it varies or degenerates.
fn sampled_inertia(h: &MatSeries, samples: usize) -> Option<usize> {
    let mut seen = None;
    for z in crate::apcore::sampling::circle_points(samples) {
        let v = h.eval(z);
        let v = (&v + v.adjoint()) * C64::new(0.5, 0.0);
        let ev = SymmetricEigen::new(v).eigenvalues;
        let scale = ev.iter().map(|x| x.abs()).fold(0.0, f64::max);
        if ev.iter().any(|x| x.abs() <= 1e-12 * scale) {
            return None;
        }
        let pos = ev.iter().filter(|&&x| x > 0.0).count();
        match seen {
            None => seen = Some(pos),
            Some(p) if p != pos => return None,
            _ => {}
        }
    }
    seen
}

/// `H = R* J0 R` for a Hermitian `H` with a canonical factorization.
pub fn symmetric_factorize(h: &ApMatrix, s: &Halfspace, opts: &SolverOptions) -> Result<SymmetricFactorization> {
    if h.rows() != h.cols() {
        return Err(ApwError::Shape("symmetric factorization needs a square symbol".into()));
    }
    let red = Rank1Reduction::for_matrices(&[h], s)?;
    let series = red.matrix_to_series(h)?;
    let out = symmetric_core(&series, &red, s, opts)?;
    Ok(SymmetricFactorization {
        r: red.series_to_matrix(&out.r),
        j0: out.j0,
        residual: out.residual,
        inverse_residual: out.inverse_residual,
        section: out.section,
    })
}

pub(crate) fn symmetric_core(
    h: &MatSeries,
    red: &Rank1Reduction,
    s: &Halfspace,
    opts: &SolverOptions,
) -> Result<SymmetricSeries> {
    let hm = red.series_to_matrix(h);
    let verdict = canonical_test(&hm.transpose(), s, opts.cutoff.max(16))?.verdict;
    match verdict {
        CanonicalVerdict::LikelyCanonical => {}
        CanonicalVerdict::NotCanonicalEvidence => {
            return Err(ApwError::NotInvertible("symbol has no canonical factorization".into()))
        }
        CanonicalVerdict::Inconclusive => {
            return Err(ApwError::Conditioning(
                "canonical factorization test is inconclusive at this cutoff".into(),
            ))
        }
    }
    let out = symmetric_series(h, opts)?;
    let positives = out.j0.iter().filter(|&&x| x > 0).count();
    match sampled_inertia(h, opts.grid_density.clamp(64, 4096)) {
        Some(p) if p == positives => {}
        other => {
            return Err(ApwError::Inconsistent(format!(
                "signature has {positives} positive entries, sampled inertia {other:?}"
            )))
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::LaurentPoly;

    #[test]
    fn scalar_outer_factor() {
        let g = LaurentPoly::from_real(0, &[1.0, -0.5]);
        let h = &g.star() * &g;
        let out = symmetric_series(&MatSeries::scalar(&h), &SolverOptions::default()).unwrap();
        assert_eq!(out.j0, vec![1]);
        assert!(out.residual < 1e-10, "{}", out.residual);
        assert!(out.inverse_residual < 1e-10);
        assert_eq!(out.r.high(), 1);
    }

    #[test]
    fn constant_indefinite() {
        let h = DMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => C64::new(1.0, 0.0),
            (1, 1) => C64::new(-1.0, 0.0),
            _ => C64::default(),
        });
        let out = symmetric_series(&MatSeries::constant(h), &SolverOptions::default()).unwrap();
        assert_eq!(out.j0, vec![1, -1]);
        assert!(out.residual < 1e-12);
    }
}
