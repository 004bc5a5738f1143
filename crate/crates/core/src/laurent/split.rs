//! Winding index, root-splitting factorization and one-sided inverse series.

use super::roots::poly_roots;
use super::{LaurentPoly, C64};
use crate::error::{ApwError, Result};

/// Roots closer than this to the unit circle make a symbol non-invertible.
pub const CIRCLE_TOL: f64 = 1e-9;

/// Hard cap on the length of a truncated inverse series.
pub const MAX_SERIES_LEN: usize = 1 << 18;

/// Which one-sided algebra an inverse should live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Nonnegative powers of `z`.
    Plus,
    /// Nonpositive powers of `z`.
    Minus,
}

/// `p = plus * z^w * minus`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralSplit {
    /// Polynomial in `z`, no roots in the closed unit disc.
    pub plus: LaurentPoly,
    pub w: i64,
    /// Polynomial in `z^{-1}` with constant term 1, roots inside the open disc.
    pub minus: LaurentPoly,
}

fn checked_roots(p: &LaurentPoly) -> Result<Vec<C64>> {
    if p.is_zero() {
        return Err(ApwError::NotInvertible("zero symbol".into()));
    }
    let roots = poly_roots(p.coeffs());
    if let Some(r) = roots.iter().find(|r| (r.norm() - 1.0).abs() < CIRCLE_TOL) {
        return Err(ApwError::NotInvertible(format!(
            "root {r} lies on the unit circle"
        )));
    }
    Ok(roots)
}

/// Winding number of `p` around 0 along the unit circle.
pub fn winding_index(p: &LaurentPoly) -> Result<i64> {
    let roots = checked_roots(p)?;
    Ok(p.low() + roots.iter().filter(|r| r.norm() < 1.0).count() as i64)
}

/// Divides `q` (ascending coefficients) by `z - r`, from the top.
fn deflate(q: &[C64], r: C64) -> Vec<C64> {
    let n = q.len() - 1;
    let mut out = vec![C64::default(); n];
    let mut acc = C64::default();
    for k in (1..=n).rev() {
        acc = q[k] + r * acc;
        out[k - 1] = acc;
    }
    out
}

pub fn spectral_split(p: &LaurentPoly) -> Result<SpectralSplit> {
    let roots = checked_roots(p)?;
    let mut inside: Vec<C64> = roots.into_iter().filter(|r| r.norm() < 1.0).collect();
    // smallest roots first keeps forward deflation well conditioned
    inside.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    let mut q = p.coeffs().to_vec();
    let mut minus = LaurentPoly::one();
    for r in &inside {
        q = deflate(&q, *r);
        minus = &minus * &LaurentPoly::new(-1, vec![-r, C64::new(1.0, 0.0)]);
    }
    let split = SpectralSplit {
        plus: LaurentPoly::new(0, q),
        w: p.low() + inside.len() as i64,
        minus,
    };
    let rebuilt = &(&split.plus * &split.minus).shift(split.w) - p;
    let scale = p.norm1();
    if rebuilt.norm_inf() > 1e-8 * scale {
        return Err(ApwError::Conditioning(format!(
            "root splitting reconstruction error {:.3e}",
            rebuilt.norm_inf() / scale
        )));
    }
    Ok(split)
}

/// Inverse power series of a polynomial `c_0 + ... + c_d z^d` with no roots
/// in the closed disc, truncated once the l1 residual drops to `tol`.
fn plus_series(c: &[C64], tol: f64) -> Result<Vec<C64>> {
    let d = c.len() - 1;
    let inv0 = C64::new(1.0, 0.0) / c[0];
    let mut q = vec![inv0];
    let check_every = (d / 4).max(1);
    loop {
        let n = q.len() - 1;
        if n % check_every == 0 {
            let mut res = 0.0;
            for t in n + 1..=n + d {
                let mut s = C64::default();
                for j in (t - n)..=d.min(t) {
                    s += c[j] * q[t - j];
                }
                res += s.norm();
            }
            if res <= tol {
                return Ok(q);
            }
            if !res.is_finite() {
                break;
            }
        }
        if q.len() >= MAX_SERIES_LEN {
            break;
        }
        let m = n + 1;
        let mut s = C64::default();
        for j in 1..=d.min(m) {
            s += c[j] * q[m - j];
        }
        q.push(-s * inv0);
    }
    Err(ApwError::NotInvertible(
        "one-sided inverse series did not reach the tail tolerance".into(),
    ))
}

/// Truncated inverse of `p` in the requested one-sided algebra, with
/// `||p q - 1||_1 <= tol`.
pub fn laurent_inverse_truncated(p: &LaurentPoly, side: Side, tol: f64) -> Result<LaurentPoly> {
    if p.is_zero() {
        return Err(ApwError::NotInvertible("zero symbol".into()));
    }
    match side {
        Side::Plus => {
            if p.low() != 0 {
                return Err(ApwError::NotInvertible(format!(
                    "symbol with lowest exponent {} is not invertible in the plus algebra",
                    p.low()
                )));
            }
            let roots = checked_roots(p)?;
            if let Some(r) = roots.iter().find(|r| r.norm() < 1.0) {
                return Err(ApwError::NotInvertible(format!(
                    "root {r} inside the unit disc"
                )));
            }
            Ok(LaurentPoly::new(0, plus_series(p.coeffs(), tol)?))
        }
        Side::Minus => {
            if p.high() != 0 {
                return Err(ApwError::NotInvertible(format!(
                    "symbol with highest exponent {} is not invertible in the minus algebra",
                    p.high()
                )));
            }
            Ok(laurent_inverse_truncated(&p.reflect(), Side::Plus, tol)?.reflect())
        }
    }
}

/// Two-sided inverse on the circle, truncated to an l1 residual of `tol`.
pub fn two_sided_inverse(p: &LaurentPoly, tol: f64) -> Result<LaurentPoly> {
    let s = spectral_split(p)?;
    let ip = laurent_inverse_truncated(&s.plus, Side::Plus, tol / 3.0)?;
    let im = laurent_inverse_truncated(&s.minus, Side::Minus, tol / 3.0)?;
    Ok((&ip * &im).shift(-s.w))
}
