//! Laurent polynomials in one variable, the image of rank-one AP spectra.

pub mod matrix;
pub mod reduce;
pub mod ring;
pub mod roots;
pub mod split;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

pub use matrix::MatSeries;
pub use reduce::Rank1Reduction;
pub use ring::{bezout_solve, complete_unimodular_row, EuclidRing, LaurentRing, PlusRing};
pub use split::{laurent_inverse_truncated, spectral_split, two_sided_inverse, winding_index, Side, SpectralSplit};

pub type C64 = Complex64;

/// `sum_j coeffs[j] z^(low + j)`. Normalized so that the first and last
/// stored coefficients are nonzero; the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Default)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<C64>,
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != C64::default())
            .map(|(j, c)| format!("({:.6}{:+.6}i)z^{}", c.re, c.im, self.low + j as i64))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl LaurentPoly {
    pub fn new(low: i64, mut coeffs: Vec<C64>) -> Self {
        let zero = C64::default();
        while coeffs.last() == Some(&zero) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| **c == zero).count();
        if lead == coeffs.len() {
            return LaurentPoly::zero();
        }
        coeffs.drain(..lead);
        LaurentPoly {
            low: low + lead as i64,
            coeffs,
        }
    }

    pub fn from_real(low: i64, coeffs: &[f64]) -> Self {
        Self::new(low, coeffs.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zero() -> Self {
        LaurentPoly {
            low: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: C64) -> Self {
        Self::new(0, vec![c])
    }

    pub fn one() -> Self {
        Self::constant(C64::new(1.0, 0.0))
    }

    /// `c z^k`.
    pub fn monomial(c: C64, k: i64) -> Self {
        Self::new(k, vec![c])
    }

    pub fn low(&self) -> i64 {
        self.low
    }

    /// Highest exponent (equal to `low - 1` for the zero polynomial).
    pub fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: i64) -> C64 {
        let j = k - self.low;
        if j < 0 || j >= self.coeffs.len() as i64 {
            C64::default()
        } else {
            self.coeffs[j as usize]
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `high - low`; 0 for monomials and for zero.
    pub fn span(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn norm1(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: C64) -> C64 {
        if self.coeffs.is_empty() {
            return C64::default();
        }
        let mut acc = C64::default();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc * z.powi(self.low as i32)
    }

    pub fn scale(&self, s: C64) -> LaurentPoly {
        LaurentPoly::new(self.low, self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i64) -> LaurentPoly {
        if self.is_zero() {
            return self.clone();
        }
        LaurentPoly {
            low: self.low + k,
            coeffs: self.coeffs.clone(),
        }
    }

    /// `p*(z) = conj(p(1/conj(z)))`, which equals `conj(p(z))` on the circle.
    pub fn star(&self) -> LaurentPoly {
        LaurentPoly::new(-self.high(), self.coeffs.iter().rev().map(|c| c.conj()).collect())
    }

    /// `p(1/z)`.
    pub fn reflect(&self) -> LaurentPoly {
        LaurentPoly::new(-self.high(), self.coeffs.iter().rev().copied().collect())
    }

    /// Coefficients with exponent in `lo..=hi`.
    pub fn window(&self, lo: i64, hi: i64) -> LaurentPoly {
        if hi < lo {
            return LaurentPoly::zero();
        }
        LaurentPoly::new(lo, (lo..=hi).map(|k| self.coeff(k)).collect())
    }

    /// Part with nonnegative exponents.
    pub fn plus_part(&self) -> LaurentPoly {
        self.window(0.max(self.low), self.high())
    }

    /// Part with negative exponents.
    pub fn strict_minus_part(&self) -> LaurentPoly {
        self.window(self.low, self.high().min(-1))
    }

    /// Drops leading and trailing coefficients of modulus `<= tol`.
    pub fn trimmed(&self, tol: f64) -> LaurentPoly {
        let keep: Vec<usize> = (0..self.coeffs.len()).filter(|&j| self.coeffs[j].norm() > tol).collect();
        match (keep.first(), keep.last()) {
            (Some(&a), Some(&b)) => LaurentPoly::new(self.low + a as i64, self.coeffs[a..=b].to_vec()),
            _ => LaurentPoly::zero(),
        }
    }

    /// Zeroes every coefficient of modulus `<= tol`, then renormalizes.
    pub fn cleaned(&self, tol: f64) -> LaurentPoly {
        LaurentPoly::new(
            self.low,
            self.coeffs
                .iter()
                .map(|c| if c.norm() <= tol { C64::default() } else { *c })
                .collect(),
        )
    }

    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    /// Leading coefficient (highest exponent).
    pub fn leading(&self) -> C64 {
        self.coeffs.last().copied().unwrap_or_default()
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.low.min(rhs.low);
        let hi = self.high().max(rhs.high());
        LaurentPoly::new(lo, (lo..=hi).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut out = vec![C64::default(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        LaurentPoly::new(self.low + rhs.low, out)
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

/// Division with remainder of ordinary polynomials given by ascending
/// coefficients: `a = q b + r` with `deg r < deg b`. `b` must have a
/// nonzero leading coefficient.
pub fn poly_divmod(a: &[C64], b: &[C64]) -> (Vec<C64>, Vec<C64>) {
    let db = b.len() - 1;
    let lead = b[db];
    if a.len() <= db {
        return (Vec::new(), a.to_vec());
    }
    let mut r = a.to_vec();
    let mut q = vec![C64::default(); a.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db] / lead;
        q[k] = c;
        for j in 0..=db {
            r[k + j] -= c * b[j];
        }
    }
    r.truncate(db);
    (q, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn normalization_and_arithmetic() {
        let p = LaurentPoly::new(-2, vec![c(0.0), c(1.0), c(2.0), c(0.0)]);
        assert_eq!(p.low(), -1);
        assert_eq!(p.high(), 0);
        let q = &p * &p;
        assert_eq!(q, LaurentPoly::new(-2, vec![c(1.0), c(4.0), c(4.0)]));
        assert!((&p - &p).is_zero());
        assert_eq!(p.star().star(), p);
    }

    #[test]
    fn star_is_conjugate_on_circle() {
        let p = LaurentPoly::new(-1, vec![C64::new(1.0, 2.0), C64::new(-0.5, 0.1), C64::new(0.0, 3.0)]);
        let z = C64::from_polar(1.0, 0.7);
        assert!((p.star().eval(z) - p.eval(z).conj()).norm() < 1e-14);
    }

    #[test]
    fn division() {
        // (z^2 - 1) = (z + 1)(z - 1)
        let (q, r) = poly_divmod(&[c(-1.0), c(0.0), c(1.0)], &[c(-1.0), c(1.0)]);
        assert_eq!(q, vec![c(1.0), c(1.0)]);
        assert!(r.iter().all(|x| x.norm() < 1e-15));
    }
}
