use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::basis::{Frequency, FrequencyBasis};
use super::sampling;
use crate::error::{ApwError, Result};

/// Relative threshold below which coefficients are dropped on normalization.
pub const ZERO_THRESHOLD: f64 = 1e-14;

/// A finite Bohr-Fourier sum `sum_l f_l e^{i<l,x>}` over a fixed frequency basis.
#[derive(Clone, PartialEq)]
pub struct ApPolynomial {
    basis: Arc<FrequencyBasis>,
    terms: BTreeMap<Frequency, Complex64>,
}

impl fmt::Debug for ApPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_map();
        for (k, v) in &self.terms {
            list.entry(&k.0, v);
        }
        list.finish()
    }
}

/// Sum of floats that does not depend on input order and commutes exactly
/// with negation. Positive and negative parts are accumulated separately in
/// order of increasing magnitude.
pub(crate) fn stable_sum(values: &mut Vec<f64>) -> f64 {
    values.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    let pos = values.iter().filter(|v| **v > 0.0).fold(0.0, |a, v| a + v);
    let neg = values.iter().filter(|v| **v < 0.0).fold(0.0, |a, v| a + v);
    pos + neg
}

pub(crate) fn stable_complex_sum(values: &[Complex64]) -> Complex64 {
    let mut re: Vec<f64> = values.iter().map(|c| c.re).collect();
    let mut im: Vec<f64> = values.iter().map(|c| c.im).collect();
    Complex64::new(stable_sum(&mut re), stable_sum(&mut im))
}

fn norm_of<'a>(coeffs: impl Iterator<Item = &'a Complex64>) -> f64 {
    let mut v: Vec<f64> = coeffs.map(|c| c.norm()).collect();
    stable_sum(&mut v)
}

impl ApPolynomial {
    /// Builds a polynomial from `(frequency, coefficient)` pairs, summing
    /// duplicates and dropping sub-threshold coefficients.
    pub fn new<I>(basis: Arc<FrequencyBasis>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Frequency, Complex64)>,
    {
        let r = basis.rank();
        let mut acc: BTreeMap<Frequency, Vec<Complex64>> = BTreeMap::new();
        for (f, c) in terms {
            if f.rank() != r {
                return Err(ApwError::Dimension(format!(
                    "frequency {} has {} coordinates, basis rank is {r}",
                    f,
                    f.rank()
                )));
            }
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(ApwError::Domain(format!("non-finite coefficient at {f}")));
            }
            acc.entry(f).or_default().push(c);
        }
        let terms = acc
            .into_iter()
            .map(|(f, cs)| (f, stable_complex_sum(&cs)))
            .collect();
        Ok(Self::normalized(basis, terms))
    }

    /// Convenience constructor from raw coordinate vectors.
    pub fn from_terms(basis: Arc<FrequencyBasis>, terms: Vec<(Vec<i64>, Complex64)>) -> Result<Self> {
        Self::new(basis, terms.into_iter().map(|(c, v)| (Frequency(c), v)))
    }

    pub(crate) fn normalized(basis: Arc<FrequencyBasis>, mut terms: BTreeMap<Frequency, Complex64>) -> Self {
        let w = norm_of(terms.values());
        let cut = ZERO_THRESHOLD * (1.0 + w);
        terms.retain(|_, c| c.norm() >= cut && *c != Complex64::new(0.0, 0.0));
        ApPolynomial { basis, terms }
    }

    pub fn zero(basis: Arc<FrequencyBasis>) -> Self {
        ApPolynomial {
            basis,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(basis: Arc<FrequencyBasis>, c: Complex64) -> Self {
        let r = basis.rank();
        Self::normalized(basis, BTreeMap::from([(Frequency::zero(r), c)]))
    }

    pub fn one(basis: Arc<FrequencyBasis>) -> Self {
        Self::constant(basis, Complex64::new(1.0, 0.0))
    }

    /// `c * e_f`.
    pub fn monomial(basis: Arc<FrequencyBasis>, f: Frequency, c: Complex64) -> Result<Self> {
        Self::new(basis, [(f, c)])
    }

    pub fn basis(&self) -> &Arc<FrequencyBasis> {
        &self.basis
    }

    pub fn same_basis(&self, other: &ApPolynomial) -> bool {
        Arc::ptr_eq(&self.basis, &other.basis) || *self.basis == *other.basis
    }

    fn check_basis(&self, other: &ApPolynomial) -> Result<()> {
        if self.same_basis(other) {
            Ok(())
        } else {
            Err(ApwError::BasisMismatch)
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Frequency, &Complex64)> {
        self.terms.iter()
    }

    pub fn term_map(&self) -> &BTreeMap<Frequency, Complex64> {
        &self.terms
    }

    pub fn coeff(&self, f: &Frequency) -> Complex64 {
        self.terms.get(f).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &ApPolynomial) -> Result<ApPolynomial> {
        self.check_basis(other)?;
        let mut terms = self.terms.clone();
        for (f, c) in &other.terms {
            *terms.entry(f.clone()).or_default() += c;
        }
        Ok(Self::normalized(self.basis.clone(), terms))
    }

    pub fn sub(&self, other: &ApPolynomial) -> Result<ApPolynomial> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ApPolynomial {
        ApPolynomial {
            basis: self.basis.clone(),
            terms: self.terms.iter().map(|(f, c)| (f.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> ApPolynomial {
        let terms = self.terms.iter().map(|(f, c)| (f.clone(), c * s)).collect();
        Self::normalized(self.basis.clone(), terms)
    }

    pub fn mul(&self, other: &ApPolynomial) -> Result<ApPolynomial> {
        self.check_basis(other)?;
        let mut acc: BTreeMap<Frequency, Vec<Complex64>> = BTreeMap::new();
        for (f, a) in &self.terms {
            for (g, b) in &other.terms {
                acc.entry(f.add(g)).or_default().push(a * b);
            }
        }
        let terms = acc
            .into_iter()
            .map(|(f, cs)| (f, stable_complex_sum(&cs)))
            .collect();
        Ok(Self::normalized(self.basis.clone(), terms))
    }

    /// Pointwise conjugate: `f_l -> conj(f_l)` moved to frequency `-l`.
    pub fn conj(&self) -> ApPolynomial {
        ApPolynomial {
            basis: self.basis.clone(),
            terms: self.terms.iter().map(|(f, c)| (f.neg(), c.conj())).collect(),
        }
    }

    /// Keeps the terms whose frequency satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Frequency) -> bool) -> ApPolynomial {
        ApPolynomial {
            basis: self.basis.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(f, _)| keep(f))
                .map(|(f, c)| (f.clone(), *c))
                .collect(),
        }
    }

    /// Multiplies each coefficient by `factor(frequency)`.
    pub fn map_coeffs(&self, mut factor: impl FnMut(&Frequency, Complex64) -> Complex64) -> ApPolynomial {
        let terms = self
            .terms
            .iter()
            .map(|(f, c)| (f.clone(), factor(f, *c)))
            .collect();
        Self::normalized(self.basis.clone(), terms)
    }

    /// Value at a point of R^k.
    pub fn eval(&self, x: &[f64]) -> Result<Complex64> {
        if x.len() != self.basis.dim() {
            return Err(ApwError::Dimension(format!(
                "point has length {}, expected {}",
                x.len(),
                self.basis.dim()
            )));
        }
        let vals: Vec<Complex64> = self
            .terms
            .iter()
            .map(|(f, c)| {
                let l = self.basis.embed_f64(f);
                let phase: f64 = l.iter().zip(x).map(|(a, b)| a * b).sum();
                c * Complex64::from_polar(1.0, phase)
            })
            .collect();
        Ok(vals.iter().sum())
    }

    /// Value at a point of the r-torus (one angle per basis generator).
    pub fn eval_torus(&self, theta: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(f, c)| {
                let phase: f64 = f.0.iter().zip(theta).map(|(n, t)| *n as f64 * t).sum();
                c * Complex64::from_polar(1.0, phase)
            })
            .sum()
    }

    /// Bohr mean, i.e. the coefficient at frequency zero.
    pub fn bohr_mean(&self) -> Complex64 {
        self.coeff(&Frequency::zero(self.basis.rank()))
    }

    pub fn spectrum(&self) -> BTreeSet<Frequency> {
        self.terms.keys().cloned().collect()
    }

    pub fn wiener_norm(&self) -> f64 {
        norm_of(self.terms.values())
    }

    /// Upper bound for the sup norm (the Wiener norm).
    pub fn sup_norm_bound(&self) -> f64 {
        self.wiener_norm()
    }

    /// Lower estimate of the sup norm: maximum modulus over a deterministic torus grid.
    pub fn sup_norm_estimate(&self, grid_density: usize, seed: u64) -> f64 {
        sampling::torus_grid(self.basis.rank(), grid_density.max(1), seed)
            .iter()
            .map(|t| self.eval_torus(t).norm())
            .fold(0.0, f64::max)
    }

    /// Besicovitch inner product `M{f g*} = sum f_l conj(g_l)`.
    pub fn bohr_inner(&self, other: &ApPolynomial) -> Result<Complex64> {
        self.check_basis(other)?;
        let vals: Vec<Complex64> = self
            .terms
            .iter()
            .filter_map(|(f, a)| other.terms.get(f).map(|b| a * b.conj()))
            .collect();
        Ok(stable_complex_sum(&vals))
    }

    /// `||f - g||_W` computed coefficientwise, without thresholding.
    pub fn wiener_distance(&self, other: &ApPolynomial) -> Result<f64> {
        self.check_basis(other)?;
        let mut diffs: Vec<f64> = Vec::new();
        for (f, a) in &self.terms {
            diffs.push((a - other.coeff(f)).norm());
        }
        for (f, b) in &other.terms {
            if !self.terms.contains_key(f) {
                diffs.push(b.norm());
            }
        }
        Ok(stable_sum(&mut diffs))
    }

    /// Re-expresses the polynomial over another basis containing its spectrum.
    pub fn rebase(&self, target: Arc<FrequencyBasis>) -> Result<ApPolynomial> {
        let terms = self
            .terms
            .iter()
            .map(|(f, c)| Ok((self.basis.rebase(f, &target)?, *c)))
            .collect::<Result<Vec<_>>>()?;
        ApPolynomial::new(target, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apcore::rational::rat;

    fn b1() -> Arc<FrequencyBasis> {
        FrequencyBasis::single(vec![rat(1)]).unwrap().shared()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn merges_and_drops() {
        let p = ApPolynomial::from_terms(b1(), vec![(vec![1], c(1.0)), (vec![1], c(2.0))]).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.coeff(&Frequency(vec![1])), c(3.0));
        let q = ApPolynomial::from_terms(b1(), vec![(vec![0], c(1.0)), (vec![2], c(1e-18))]).unwrap();
        assert_eq!(q.spectrum().len(), 1);
        assert!(ApPolynomial::from_terms(b1(), vec![]).unwrap().is_zero());
        assert!(ApPolynomial::from_terms(b1(), vec![(vec![1, 2], c(1.0))]).is_err());
    }

    #[test]
    fn difference_of_squares() {
        let a = 0.3;
        let p = ApPolynomial::from_terms(b1(), vec![(vec![0], c(1.0)), (vec![1], c(-a))]).unwrap();
        let q = ApPolynomial::from_terms(b1(), vec![(vec![0], c(1.0)), (vec![1], c(a))]).unwrap();
        let r = p.mul(&q).unwrap();
        let expect = ApPolynomial::from_terms(b1(), vec![(vec![0], c(1.0)), (vec![2], c(-a * a))]).unwrap();
        assert!(r.wiener_distance(&expect).unwrap() < 1e-16);
    }

    #[test]
    fn conj_of_i() {
        let p = ApPolynomial::from_terms(b1(), vec![(vec![3], Complex64::i())]).unwrap();
        let q = p.conj();
        assert_eq!(q.coeff(&Frequency(vec![-3])), -Complex64::i());
    }

    #[test]
    fn eval_at_half_turn() {
        let p = ApPolynomial::from_terms(b1(), vec![(vec![0], c(1.0)), (vec![1], c(-1.0))]).unwrap();
        let v = p.eval(&[std::f64::consts::PI]).unwrap();
        assert!((v - c(2.0)).norm() < 1e-15);
        assert!(p.eval(&[0.0, 1.0]).is_err());
    }

    #[test]
    fn norms() {
        let p = ApPolynomial::from_terms(b1(), vec![(vec![0], c(1.0)), (vec![1], c(-0.5))]).unwrap();
        assert_eq!(p.wiener_norm(), 1.5);
        let e = ApPolynomial::from_terms(b1(), vec![(vec![5], c(1.0))]).unwrap();
        assert!((e.sup_norm_estimate(64, 0) - 1.0).abs() < 1e-12);
        let q = ApPolynomial::from_terms(b1(), vec![(vec![0], c(1.0)), (vec![1], c(1.0))]).unwrap();
        assert!((q.sup_norm_estimate(10_000, 0) - 2.0).abs() < 1e-6);
        assert_eq!(q.sup_norm_bound(), 2.0);
    }

    #[test]
    fn mean_and_inner() {
        let p = ApPolynomial::from_terms(b1(), vec![(vec![0], c(3.0)), (vec![1], c(2.0))]).unwrap();
        assert_eq!(p.bohr_mean(), c(3.0));
        assert_eq!(p.bohr_inner(&p).unwrap(), c(13.0));
        let other = FrequencyBasis::single(vec![rat(2)]).unwrap().shared();
        let q = ApPolynomial::one(other);
        assert_eq!(p.add(&q), Err(ApwError::BasisMismatch));
    }
}
