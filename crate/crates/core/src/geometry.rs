//! Halfspaces `S = Z E_k`, the vector `Y(S)`, spectral masks and slice damping.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::apcore::rational::{self, Rational};
use crate::apcore::{ApMatrix, ApPolynomial, Frequency, FrequencyBasis};
use crate::error::{ApwError, Result};

/// The halfspace `Z E_k`, where `E_k` is the lexicographic cone
/// (first nonzero coordinate positive, together with the origin).
#[derive(Clone, PartialEq, Eq)]
pub struct Halfspace {
    z: Vec<Vec<Rational>>,
    z_inv: Vec<Vec<Rational>>,
}

impl fmt::Debug for Halfspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self
            .z
            .iter()
            .map(|r| r.iter().map(rational::format_rational).collect())
            .collect();
        f.debug_struct("Halfspace").field("Z", &rows).finish()
    }
}

/// Exact lexicographic sign test for frequencies of one basis, with the
/// rows of `Z^{-1} * basis` scaled to integers.
#[derive(Clone, Debug)]
pub struct SignTester {
    rows: Vec<Vec<BigInt>>,
}

impl SignTester {
    /// Sign of the first nonzero coordinate of `Z^{-1} l`.
    pub fn sign(&self, f: &Frequency) -> Ordering {
        for row in &self.rows {
            let s: BigInt = row.iter().zip(&f.0).map(|(a, c)| a * BigInt::from(*c)).sum();
            if !s.is_zero() {
                return if s.is_positive() { Ordering::Greater } else { Ordering::Less };
            }
        }
        Ordering::Equal
    }

    pub fn contains(&self, f: &Frequency) -> bool {
        self.sign(f) != Ordering::Less
    }

    /// First coordinate of `Z^{-1} l` is zero.
    fn on_boundary(&self, f: &Frequency) -> bool {
        self.rows.first().is_none_or(|row| {
            row.iter()
                .zip(&f.0)
                .map(|(a, c)| a * BigInt::from(*c))
                .sum::<BigInt>()
                .is_zero()
        })
    }
}

impl Halfspace {
    pub fn new(z: Vec<Vec<Rational>>) -> Result<Self> {
        let k = z.len();
        if k == 0 {
            return Err(ApwError::Dimension("halfspace needs k >= 1".into()));
        }
        if z.iter().any(|r| r.len() != k) {
            return Err(ApwError::Dimension("Z must be square".into()));
        }
        let z_inv = rational::inverse(&z).ok_or_else(|| ApwError::Domain("Z is singular".into()))?;
        Ok(Halfspace { z, z_inv })
    }

    /// `E_k` itself.
    pub fn standard(k: usize) -> Self {
        let z = (0..k)
            .map(|i| (0..k).map(|j| rational::rat((i == j) as i64)).collect())
            .collect();
        Self::new(z).expect("identity is invertible")
    }

    pub fn dim(&self) -> usize {
        self.z.len()
    }

    pub fn z(&self) -> &[Vec<Rational>] {
        &self.z
    }

    pub fn z_inv(&self) -> &[Vec<Rational>] {
        &self.z_inv
    }

    /// `-S`, presented as `(-Z) E_k`.
    pub fn negated(&self) -> Halfspace {
        let neg = |m: &[Vec<Rational>]| m.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        Halfspace {
            z: neg(&self.z),
            z_inv: neg(&self.z_inv),
        }
    }

    fn check_dim(&self, basis: &FrequencyBasis) -> Result<()> {
        if basis.dim() != self.dim() {
            return Err(ApwError::Dimension(format!(
                "halfspace lives in R^{}, frequencies in R^{}",
                self.dim(),
                basis.dim()
            )));
        }
        Ok(())
    }

    /// Precomputes the sign test for frequencies over `basis`.
    pub fn tester(&self, basis: &FrequencyBasis) -> Result<SignTester> {
        self.check_dim(basis)?;
        let rows = self
            .z_inv
            .iter()
            .map(|zrow| {
                let w: Vec<Rational> = basis
                    .generators()
                    .iter()
                    .map(|g| zrow.iter().zip(g).map(|(a, b)| a * b).sum())
                    .collect();
                rational::clear_denominators(&w)
            })
            .collect();
        Ok(SignTester { rows })
    }

    /// Membership of a rational vector of R^k.
    pub fn contains_vector(&self, v: &[Rational]) -> Result<bool> {
        if v.len() != self.dim() {
            return Err(ApwError::Dimension("vector length differs from k".into()));
        }
        for row in &self.z_inv {
            let s: Rational = row.iter().zip(v).map(|(a, b)| a * b).sum();
            if !s.is_zero() {
                return Ok(s.is_positive());
            }
        }
        Ok(true)
    }

    pub fn contains(&self, basis: &FrequencyBasis, f: &Frequency) -> Result<bool> {
        self.check_dim(basis)?;
        self.contains_vector(&basis.embed(f))
    }

    /// `(Z^{-1})^T e_1` exactly, plus its normalization in floats.
    pub fn y_vector(&self) -> (Vec<Rational>, Vec<f64>) {
        let dir = self.z_inv[0].clone();
        let f: Vec<f64> = dir.iter().map(rational::to_f64).collect();
        let n = f.iter().map(|x| x * x).sum::<f64>().sqrt();
        (dir, f.iter().map(|x| x / n).collect())
    }
}

/// Which part of the spectrum a projection keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaskKind {
    S,
    SMinusZero,
    MinusS,
    MinusSMinusZero,
    /// Frequencies on the boundary hyperplane `<l, Y(S)> = 0`.
    VCap,
    ZeroOnly,
    Predicate,
}

impl MaskKind {
    pub fn name(self) -> &'static str {
        match self {
            MaskKind::S => "S",
            MaskKind::SMinusZero => "S_minus_zero",
            MaskKind::MinusS => "minus_S",
            MaskKind::MinusSMinusZero => "minus_S_minus_zero",
            MaskKind::VCap => "V_cap",
            MaskKind::ZeroOnly => "zero_only",
            MaskKind::Predicate => "predicate",
        }
    }

    pub fn from_name(s: &str) -> Option<MaskKind> {
        Some(match s {
            "S" => MaskKind::S,
            "S_minus_zero" => MaskKind::SMinusZero,
            "minus_S" => MaskKind::MinusS,
            "minus_S_minus_zero" => MaskKind::MinusSMinusZero,
            "V_cap" => MaskKind::VCap,
            "zero_only" => MaskKind::ZeroOnly,
            _ => return None,
        })
    }
}

type FreqPredicate = Arc<dyn Fn(&FrequencyBasis, &Frequency) -> bool + Send + Sync>;

/// A spectral projection selector tied to a halfspace.
#[derive(Clone)]
pub struct SpectralMask {
    pub kind: MaskKind,
    pub halfspace: Halfspace,
    predicate: Option<FreqPredicate>,
}

impl fmt::Debug for SpectralMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralMask")
            .field("kind", &self.kind)
            .field("halfspace", &self.halfspace)
            .finish()
    }
}

impl SpectralMask {
    pub fn new(kind: MaskKind, halfspace: Halfspace) -> Result<Self> {
        if kind == MaskKind::Predicate {
            return Err(ApwError::Domain("use SpectralMask::predicate for custom masks".into()));
        }
        Ok(SpectralMask {
            kind,
            halfspace,
            predicate: None,
        })
    }

    pub fn predicate(
        halfspace: Halfspace,
        keep: impl Fn(&FrequencyBasis, &Frequency) -> bool + Send + Sync + 'static,
    ) -> Self {
        SpectralMask {
            kind: MaskKind::Predicate,
            halfspace,
            predicate: Some(Arc::new(keep)),
        }
    }

    fn selector(&self, basis: &FrequencyBasis) -> Result<impl Fn(&Frequency) -> bool + '_> {
        let t = self.halfspace.tester(basis)?;
        let basis = basis.clone();
        Ok(move |f: &Frequency| {
            let s = t.sign(f);
            match self.kind {
                MaskKind::S => s != Ordering::Less,
                MaskKind::SMinusZero => s == Ordering::Greater,
                MaskKind::MinusS => s != Ordering::Greater,
                MaskKind::MinusSMinusZero => s == Ordering::Less,
                MaskKind::VCap => t.on_boundary(f),
                MaskKind::ZeroOnly => s == Ordering::Equal,
                MaskKind::Predicate => self.predicate.as_ref().is_some_and(|p| p(&basis, f)),
            }
        })
    }

    pub fn accepts(&self, basis: &FrequencyBasis, f: &Frequency) -> Result<bool> {
        Ok(self.selector(basis)?(f))
    }
}

/// `Pi_Lambda f`: keeps the terms whose frequency satisfies the mask.
pub fn project(f: &ApPolynomial, mask: &SpectralMask) -> Result<ApPolynomial> {
    let keep = mask.selector(f.basis())?;
    Ok(f.filter(|l| keep(l)))
}

pub fn project_matrix(g: &ApMatrix, mask: &SpectralMask) -> Result<ApMatrix> {
    let keep = mask.selector(g.basis())?;
    Ok(g.map(|p| p.filter(|l| keep(l))))
}

/// Convenience: projection onto `S` or one of its relatives.
pub fn project_kind(f: &ApPolynomial, s: &Halfspace, kind: MaskKind) -> Result<ApPolynomial> {
    project(f, &SpectralMask::new(kind, s.clone())?)
}

/// `true` when every frequency of `f` lies in `S`.
pub fn spectrum_in(f: &ApPolynomial, s: &Halfspace) -> Result<bool> {
    let t = s.tester(f.basis())?;
    Ok(f.terms().all(|(l, _)| t.contains(l)))
}

pub fn matrix_spectrum_in(g: &ApMatrix, s: &Halfspace) -> Result<bool> {
    let t = s.tester(g.basis())?;
    Ok(g.entries().iter().all(|p| p.terms().all(|(l, _)| t.contains(l))))
}

/// Multiplies the coefficient at `l` by `exp(-<l, Y(S)> y)`.
pub fn slice_damp(f: &ApPolynomial, s: &Halfspace, y: f64) -> Result<ApPolynomial> {
    if !(y > 0.0) {
        return Err(ApwError::Domain(format!("slice parameter must be positive, got {y}")));
    }
    if !spectrum_in(f, s)? {
        return Err(ApwError::Domain("spectrum is not contained in S".into()));
    }
    let (dir, _) = s.y_vector();
    let norm = dir
        .iter()
        .map(rational::to_f64)
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt();
    let basis = f.basis().clone();
    Ok(f.map_coeffs(|l, c| {
        let lam = basis.embed(l);
        let t: Rational = dir.iter().zip(&lam).map(|(a, b)| a * b).sum();
        c * Complex64::new((-rational::to_f64(&t) / norm * y).exp(), 0.0)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apcore::rational::{rat, ratio};

    #[test]
    fn lexicographic_membership() {
        let s = Halfspace::standard(2);
        let b = FrequencyBasis::standard(2);
        assert!(s.contains(&b, &Frequency(vec![0, 0])).unwrap());
        assert!(!s.contains(&b, &Frequency(vec![0, -3])).unwrap());
        assert!(s.contains(&b, &Frequency(vec![0, 3])).unwrap());
        let swap = Halfspace::new(vec![vec![rat(0), rat(1)], vec![rat(1), rat(0)]]).unwrap();
        assert!(swap.contains(&b, &Frequency(vec![-3, 1])).unwrap());
        assert!(s.contains(&FrequencyBasis::standard(3), &Frequency(vec![1, 0, 0])).is_err());
    }

    #[test]
    fn y_vector_scaling() {
        let s = Halfspace::new(vec![vec![rat(2), rat(0)], vec![rat(0), rat(2)]]).unwrap();
        let (dir, unit) = s.y_vector();
        assert_eq!(dir, vec![ratio(1, 2), rat(0)]);
        assert_eq!(unit, vec![1.0, 0.0]);
    }

    #[test]
    fn projection_keeps_plus_side() {
        let b = FrequencyBasis::single(vec![rat(1)]).unwrap().shared();
        let one = Complex64::new(1.0, 0.0);
        let f = ApPolynomial::from_terms(b.clone(), vec![(vec![0], one), (vec![1], one), (vec![-1], one)]).unwrap();
        let s = Halfspace::standard(1);
        let p = project_kind(&f, &s, MaskKind::S).unwrap();
        assert_eq!(p.spectrum().len(), 2);
        let q = project_kind(&f, &s, MaskKind::MinusSMinusZero).unwrap();
        assert_eq!(p.add(&q).unwrap(), f);
        let zero = project_kind(&f, &s, MaskKind::ZeroOnly).unwrap();
        assert_eq!(zero.len(), 1);
    }

    #[test]
    fn damping_single_term() {
        let b = FrequencyBasis::single(vec![rat(1)]).unwrap().shared();
        let f = ApPolynomial::from_terms(b, vec![(vec![2], Complex64::new(1.0, 0.0))]).unwrap();
        let s = Halfspace::standard(1);
        let g = slice_damp(&f, &s, 1.0).unwrap();
        assert!((g.coeff(&Frequency(vec![2])).re - (-2.0f64).exp()).abs() < 1e-15);
        assert!(slice_damp(&f.conj(), &s, 1.0).is_err());
    }
}
