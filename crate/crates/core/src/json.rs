//! JSON schemas for polynomials, matrices, halfspaces and factorizations.
//!
//! Frequency bases are written row-major (`k` rows of `r` rational strings);
//! rationals are always `"p/q"`. Every top-level document carries
//! `"apw_schema": 1`.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::apcore::rational::{format_rational, parse_rational};
use crate::apcore::{ApMatrix, ApPolynomial, Frequency, FrequencyBasis};
use crate::error::{ApwError, Result};
use crate::factorization::ApFactorization;
use crate::geometry::Halfspace;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub coord: Vec<i64>,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyJson {
    pub basis: Vec<Vec<String>>,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub basis: Vec<Vec<String>>,
    pub m: usize,
    pub n: usize,
    /// Row-major, one term list per entry.
    pub entries: Vec<Vec<TermJson>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfspaceJson {
    #[serde(rename = "Z")]
    pub z: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaskJson {
    pub kind: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorizationJson {
    pub g_plus: MatrixJson,
    pub indices: Vec<Vec<i64>>,
    pub g_minus: MatrixJson,
    pub residual: f64,
}

pub fn basis_to_json(b: &FrequencyBasis) -> Vec<Vec<String>> {
    b.rows().iter().map(|r| r.iter().map(format_rational).collect()).collect()
}

pub fn basis_from_json(rows: &[Vec<String>]) -> Result<Arc<FrequencyBasis>> {
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(FrequencyBasis::from_rows(&parsed)?.shared())
}

fn terms_to_json(p: &ApPolynomial) -> Vec<TermJson> {
    p.terms()
        .map(|(f, c)| TermJson {
            coord: f.0.clone(),
            re: c.re,
            im: c.im,
        })
        .collect()
}

fn terms_from_json(basis: &Arc<FrequencyBasis>, terms: &[TermJson]) -> Result<ApPolynomial> {
    ApPolynomial::new(
        basis.clone(),
        terms.iter().map(|t| (Frequency(t.coord.clone()), Complex64::new(t.re, t.im))),
    )
}

impl PolyJson {
    pub fn from_poly(p: &ApPolynomial) -> Self {
        PolyJson {
            basis: basis_to_json(p.basis()),
            terms: terms_to_json(p),
        }
    }

    pub fn to_poly(&self) -> Result<ApPolynomial> {
        terms_from_json(&basis_from_json(&self.basis)?, &self.terms)
    }
}

impl MatrixJson {
    pub fn from_matrix(g: &ApMatrix) -> Self {
        MatrixJson {
            basis: basis_to_json(g.basis()),
            m: g.rows(),
            n: g.cols(),
            entries: g.entries().iter().map(terms_to_json).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ApMatrix> {
        self.to_matrix_in(&basis_from_json(&self.basis)?)
    }

    /// Parses against an already-built basis, which must match the stored one.
    pub fn to_matrix_in(&self, basis: &Arc<FrequencyBasis>) -> Result<ApMatrix> {
        if **basis != *basis_from_json(&self.basis)? {
            return Err(ApwError::BasisMismatch);
        }
        if self.entries.len() != self.m * self.n {
            return Err(ApwError::Parse(format!(
                "matrix declares {}x{} but has {} entries",
                self.m,
                self.n,
                self.entries.len()
            )));
        }
        let entries = self
            .entries
            .iter()
            .map(|t| terms_from_json(basis, t))
            .collect::<Result<Vec<_>>>()?;
        ApMatrix::new(basis.clone(), self.m, self.n, entries)
    }
}

impl HalfspaceJson {
    pub fn from_halfspace(s: &Halfspace) -> Self {
        HalfspaceJson {
            z: s.z().iter().map(|r| r.iter().map(format_rational).collect()).collect(),
        }
    }

    pub fn to_halfspace(&self) -> Result<Halfspace> {
        let z = self
            .z
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Halfspace::new(z)
    }
}

impl FactorizationJson {
    pub fn from_factorization(f: &ApFactorization) -> Self {
        FactorizationJson {
            g_plus: MatrixJson::from_matrix(&f.g_plus),
            indices: f.indices.iter().map(|l| l.0.clone()).collect(),
            g_minus: MatrixJson::from_matrix(&f.g_minus),
            residual: f.residual,
        }
    }

    pub fn to_factorization(&self, basis: &Arc<FrequencyBasis>, s: &Halfspace) -> Result<ApFactorization> {
        let indices: Vec<Frequency> = self.indices.iter().map(|c| Frequency(c.clone())).collect();
        if indices.iter().any(|f| f.rank() != basis.rank()) {
            return Err(ApwError::Dimension("index coordinates do not match the basis rank".into()));
        }
        Ok(ApFactorization {
            g_plus: self.g_plus.to_matrix_in(basis)?,
            indices,
            g_minus: self.g_minus.to_matrix_in(basis)?,
            halfspace: s.clone(),
            residual: self.residual,
        })
    }
}

/// Parses a JSON document, keeping serde's line and column in the message.
pub fn parse_document<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| ApwError::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apcore::rational::{rat, ratio};

    #[test]
    fn matrix_round_trip() {
        let b = FrequencyBasis::new(2, vec![vec![rat(1), ratio(1, 2)]]).unwrap().shared();
        let p = ApPolynomial::from_terms(b.clone(), vec![(vec![1], Complex64::new(0.25, -1.0))]).unwrap();
        let g = ApMatrix::from_rows(b, vec![vec![p.clone(), p.conj()]]).unwrap();
        let j = MatrixJson::from_matrix(&g);
        let text = serde_json::to_string(&j).unwrap();
        let back: MatrixJson = parse_document(&text).unwrap();
        assert_eq!(back.to_matrix().unwrap(), g);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
        assert_eq!(j.basis, vec![vec!["1/1".to_string()], vec!["1/2".to_string()]]);
    }

    #[test]
    fn unknown_fields_rejected() {
        let r: Result<TermJson> = parse_document(r#"{"coord":[1],"re":1.0,"im":0.0,"x":1}"#);
        assert!(matches!(r, Err(ApwError::Parse(_))));
    }
}
