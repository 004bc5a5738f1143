//! Change of variable `e_{n beta} <-> z^n` for spectra inside one cyclic group.

use std::sync::Arc;

use num_complex::Complex64;
use num_integer::Integer;

use super::matrix::{MatSeries, PolyMatrix};
use super::LaurentPoly;
use crate::apcore::{ApMatrix, ApPolynomial, Frequency, FrequencyBasis};
use crate::error::{ApwError, Result};
use crate::geometry::Halfspace;

/// A generator `beta` in `S \ {0}` such that every input frequency is an
/// integer multiple of it; `nbeta` lies in `S` exactly when `n >= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rank1Reduction {
    basis: Arc<FrequencyBasis>,
    /// `None` only for rank-0 bases (constants).
    generator: Option<Frequency>,
}

/// Writes `f = t v` for a primitive `v`, if possible.
fn multiple_of(f: &Frequency, v: &Frequency) -> Option<i64> {
    let i = v.0.iter().position(|&c| c != 0)?;
    if f.0[i] % v.0[i] != 0 {
        return None;
    }
    let t = f.0[i] / v.0[i];
    (v.scale(t) == *f).then_some(t)
}

impl Rank1Reduction {
    /// Finds the generator for a collection of polynomials over one basis.
    pub fn new<'a>(
        basis: &Arc<FrequencyBasis>,
        polys: impl IntoIterator<Item = &'a ApPolynomial>,
        s: &Halfspace,
    ) -> Result<Self> {
        let tester = s.tester(basis)?;
        let mut primitive: Option<Frequency> = None;
        let mut multiples: Vec<i64> = Vec::new();
        for p in polys {
            if !(Arc::ptr_eq(p.basis(), basis) || **p.basis() == **basis) {
                return Err(ApwError::BasisMismatch);
            }
            for (f, _) in p.terms() {
                if f.is_zero() {
                    continue;
                }
                let v = primitive.get_or_insert_with(|| {
                    let g = f.content();
                    Frequency(f.0.iter().map(|c| c / g).collect())
                });
                match multiple_of(f, v) {
                    Some(t) => multiples.push(t),
                    None => return Err(ApwError::NotCommensurable(2)),
                }
            }
        }
        let generator = match primitive {
            Some(v) => {
                let g = multiples.iter().fold(0i64, |acc, t| acc.gcd(t));
                let beta = v.scale(g);
                Some(if tester.contains(&beta) { beta } else { beta.neg() })
            }
            None if basis.rank() > 0 => {
                let mut e = Frequency::zero(basis.rank());
                e.0[0] = 1;
                Some(if tester.contains(&e) { e } else { e.neg() })
            }
            None => None,
        };
        Ok(Rank1Reduction {
            basis: basis.clone(),
            generator,
        })
    }

    pub fn for_matrices(mats: &[&ApMatrix], s: &Halfspace) -> Result<Self> {
        let basis = mats
            .first()
            .map(|m| m.basis().clone())
            .ok_or_else(|| ApwError::Shape("no matrices to reduce".into()))?;
        if mats.iter().any(|m| !(Arc::ptr_eq(m.basis(), &basis) || **m.basis() == *basis)) {
            return Err(ApwError::BasisMismatch);
        }
        Self::new(&basis, mats.iter().flat_map(|m| m.entries().iter()), s)
    }

    pub fn basis(&self) -> &Arc<FrequencyBasis> {
        &self.basis
    }

    pub fn generator(&self) -> Option<&Frequency> {
        self.generator.as_ref()
    }

    /// `n beta` as a frequency of the basis.
    pub fn frequency(&self, n: i64) -> Frequency {
        match &self.generator {
            Some(b) => b.scale(n),
            None => Frequency::zero(self.basis.rank()),
        }
    }

    /// The `n` with `f = n beta`.
    pub fn exponent(&self, f: &Frequency) -> Result<i64> {
        if f.is_zero() {
            return Ok(0);
        }
        self.generator
            .as_ref()
            .and_then(|b| multiple_of(f, b))
            .ok_or(ApwError::NotCommensurable(2))
    }

    pub fn to_laurent(&self, p: &ApPolynomial) -> Result<LaurentPoly> {
        let mut terms: Vec<(i64, Complex64)> = Vec::with_capacity(p.len());
        for (f, c) in p.terms() {
            terms.push((self.exponent(f)?, *c));
        }
        let Some(lo) = terms.iter().map(|t| t.0).min() else {
            return Ok(LaurentPoly::zero());
        };
        let hi = terms.iter().map(|t| t.0).max().unwrap_or(lo);
        let mut coeffs = vec![Complex64::default(); (hi - lo + 1) as usize];
        for (n, c) in terms {
            coeffs[(n - lo) as usize] += c;
        }
        Ok(LaurentPoly::new(lo, coeffs))
    }

    pub fn from_laurent(&self, q: &LaurentPoly) -> ApPolynomial {
        let terms: Vec<(Frequency, Complex64)> = q
            .coeffs()
            .iter()
            .enumerate()
            .map(|(j, c)| (q.low() + j as i64, *c))
            .filter(|(n, _)| self.generator.is_some() || *n == 0)
            .map(|(n, c)| (self.frequency(n), c))
            .collect();
        ApPolynomial::new(self.basis.clone(), terms).expect("frequencies have the basis rank")
    }

    pub fn matrix_to_polys(&self, g: &ApMatrix) -> Result<PolyMatrix> {
        (0..g.rows())
            .map(|i| (0..g.cols()).map(|j| self.to_laurent(g.get(i, j))).collect())
            .collect()
    }

    pub fn matrix_to_series(&self, g: &ApMatrix) -> Result<MatSeries> {
        Ok(MatSeries::from_polys(g.rows(), g.cols(), &self.matrix_to_polys(g)?))
    }

    pub fn polys_to_matrix(&self, rows: usize, cols: usize, m: &PolyMatrix) -> ApMatrix {
        ApMatrix::from_fn(self.basis.clone(), rows, cols, |i, j| self.from_laurent(&m[i][j]))
    }

    pub fn series_to_matrix(&self, s: &MatSeries) -> ApMatrix {
        self.polys_to_matrix(s.rows(), s.cols(), &s.to_polys())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apcore::rational::rat;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn gcd_normalized_generator() {
        let b = FrequencyBasis::single(vec![rat(1)]).unwrap().shared();
        let f = ApPolynomial::from_terms(b.clone(), vec![(vec![0], c(1.0)), (vec![2], c(1.0)), (vec![4], c(1.0))]).unwrap();
        let red = Rank1Reduction::new(&b, [&f], &Halfspace::standard(1)).unwrap();
        assert_eq!(red.generator(), Some(&Frequency(vec![2])));
        assert_eq!(red.to_laurent(&f).unwrap(), LaurentPoly::from_real(0, &[1.0, 1.0, 1.0]));
        assert_eq!(red.from_laurent(&red.to_laurent(&f).unwrap()), f);
    }

    #[test]
    fn negative_frequency_maps_to_inverse_power() {
        let b = FrequencyBasis::single(vec![rat(1)]).unwrap().shared();
        let f = ApPolynomial::from_terms(b.clone(), vec![(vec![-1], c(1.0))]).unwrap();
        let red = Rank1Reduction::new(&b, [&f], &Halfspace::standard(1)).unwrap();
        assert_eq!(red.generator(), Some(&Frequency(vec![1])));
        assert_eq!(red.to_laurent(&f).unwrap(), LaurentPoly::monomial(c(1.0), -1));
    }

    #[test]
    fn independent_frequencies_are_rejected() {
        let b = FrequencyBasis::standard(2).shared();
        let f = ApPolynomial::from_terms(b.clone(), vec![(vec![1, 0], c(1.0)), (vec![0, 1], c(1.0))]).unwrap();
        assert_eq!(
            Rank1Reduction::new(&b, [&f], &Halfspace::standard(2)),
            Err(ApwError::NotCommensurable(2))
        );
    }
}
