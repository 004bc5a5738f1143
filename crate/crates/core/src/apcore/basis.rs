use std::fmt;
use std::sync::Arc;

use num_integer::Integer;

use super::rational::{self, Rational};
use crate::error::{ApwError, Result};

/// A finitely generated subgroup of R^k, given by Q-independent rational
/// generators. Frequencies are integer coordinates over these generators.
#[derive(Clone)]
pub struct FrequencyBasis {
    dim: usize,
    generators: Vec<Vec<Rational>>,
    generators_f64: Vec<Vec<f64>>,
}

impl PartialEq for FrequencyBasis {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.generators == other.generators
    }
}

impl Eq for FrequencyBasis {}

impl fmt::Debug for FrequencyBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<Vec<String>> = self
            .generators
            .iter()
            .map(|g| g.iter().map(rational::format_rational).collect())
            .collect();
        f.debug_struct("FrequencyBasis")
            .field("dim", &self.dim)
            .field("generators", &gens)
            .finish()
    }
}

impl FrequencyBasis {
    /// Builds a basis from generator columns (each of length `dim`).
    pub fn new(dim: usize, generators: Vec<Vec<Rational>>) -> Result<Self> {
        if dim == 0 {
            return Err(ApwError::Dimension("dimension k must be positive".into()));
        }
        if let Some(g) = generators.iter().find(|g| g.len() != dim) {
            return Err(ApwError::Dimension(format!(
                "generator has length {}, expected {dim}",
                g.len()
            )));
        }
        if rational::rank(&generators) != generators.len() {
            return Err(ApwError::Domain(
                "basis generators are not linearly independent over Q".into(),
            ));
        }
        let generators_f64 = generators
            .iter()
            .map(|g| g.iter().map(rational::to_f64).collect())
            .collect();
        Ok(FrequencyBasis {
            dim,
            generators,
            generators_f64,
        })
    }

    /// Builds a basis from the row-major k x r matrix whose columns are generators.
    pub fn from_rows(rows: &[Vec<Rational>]) -> Result<Self> {
        let k = rows.len();
        let r = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != r) {
            return Err(ApwError::Dimension("ragged basis matrix".into()));
        }
        let gens = (0..r).map(|j| rows.iter().map(|row| row[j].clone()).collect()).collect();
        Self::new(k, gens)
    }

    /// The integer lattice Z^k with the standard generators.
    pub fn standard(dim: usize) -> Self {
        let gens = (0..dim)
            .map(|j| (0..dim).map(|i| rational::rat((i == j) as i64)).collect())
            .collect();
        Self::new(dim, gens).expect("standard basis is valid")
    }

    /// Rank-one basis in R^k generated by a single vector.
    pub fn single(generator: Vec<Rational>) -> Result<Self> {
        Self::new(generator.len(), vec![generator])
    }

    pub fn shared(self) -> Arc<Self> {
        Arc::new(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Vec<Rational>] {
        &self.generators
    }

    /// Row-major k x r view of the generator matrix.
    pub fn rows(&self) -> Vec<Vec<Rational>> {
        (0..self.dim)
            .map(|i| self.generators.iter().map(|g| g[i].clone()).collect())
            .collect()
    }

    /// Exact real embedding `basis * coords`.
    pub fn embed(&self, f: &Frequency) -> Vec<Rational> {
        let mut out = vec![rational::rat(0); self.dim];
        for (c, g) in f.0.iter().zip(&self.generators) {
            if *c == 0 {
                continue;
            }
            let c = rational::rat(*c);
            for (o, x) in out.iter_mut().zip(g) {
                *o += &c * x;
            }
        }
        out
    }

    pub fn embed_f64(&self, f: &Frequency) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (c, g) in f.0.iter().zip(&self.generators_f64) {
            for (o, x) in out.iter_mut().zip(g) {
                *o += *c as f64 * x;
            }
        }
        out
    }

    /// Torus angles `<beta_j, x>` of a point of R^k.
    pub fn phases(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim {
            return Err(ApwError::Dimension(format!(
                "point has length {}, expected {}",
                x.len(),
                self.dim
            )));
        }
        Ok(self
            .generators_f64
            .iter()
            .map(|g| g.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Integer coordinates of a real vector over this basis, if it lies in the group.
    pub fn coordinates_of(&self, v: &[Rational]) -> Option<Frequency> {
        if v.len() != self.dim {
            return None;
        }
        let sol = rational::solve_columns(&self.generators, v)?;
        let coords = sol
            .iter()
            .map(|x| {
                if x.is_integer() {
                    num_traits::ToPrimitive::to_i64(&x.to_integer())
                } else {
                    None
                }
            })
            .collect::<Option<Vec<i64>>>()?;
        Some(Frequency(coords))
    }

    /// Re-expresses a frequency of `self` over `target`, failing if it is not
    /// in the target group.
    pub fn rebase(&self, f: &Frequency, target: &FrequencyBasis) -> Result<Frequency> {
        if self.dim != target.dim {
            return Err(ApwError::Dimension("bases live in different R^k".into()));
        }
        target.coordinates_of(&self.embed(f)).ok_or_else(|| {
            ApwError::Domain("frequency does not belong to the target group".into())
        })
    }

    /// A basis whose group contains both inputs: one of them if it already
    /// contains the other, otherwise the concatenation when still Q-independent.
    pub fn unify(a: &FrequencyBasis, b: &FrequencyBasis) -> Result<FrequencyBasis> {
        if a.dim != b.dim {
            return Err(ApwError::Dimension("bases live in different R^k".into()));
        }
        let contains = |outer: &FrequencyBasis, inner: &FrequencyBasis| {
            inner.generators.iter().all(|g| outer.coordinates_of(g).is_some())
        };
        if contains(a, b) {
            return Ok(a.clone());
        }
        if contains(b, a) {
            return Ok(b.clone());
        }
        let mut gens = a.generators.clone();
        gens.extend(b.generators.iter().cloned());
        FrequencyBasis::new(a.dim, gens).map_err(|_| {
            ApwError::Domain("no common basis found by concatenation; rebase explicitly".into())
        })
    }
}

/// Integer coordinates of a frequency with respect to a [`FrequencyBasis`].
/// Ordering is lexicographic on the coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Frequency(pub Vec<i64>);

impl Frequency {
    pub fn new(coords: Vec<i64>) -> Self {
        Frequency(coords)
    }

    pub fn zero(rank: usize) -> Self {
        Frequency(vec![0; rank])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn l1(&self) -> u64 {
        self.0.iter().map(|c| c.unsigned_abs()).sum()
    }

    pub fn add(&self, other: &Frequency) -> Frequency {
        Frequency(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Frequency) -> Frequency {
        Frequency(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Frequency {
        Frequency(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, n: i64) -> Frequency {
        Frequency(self.0.iter().map(|a| a * n).collect())
    }

    /// gcd of the coordinates (0 for the zero frequency).
    pub fn content(&self) -> i64 {
        self.0.iter().fold(0i64, |g, &c| g.gcd(&c))
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}
