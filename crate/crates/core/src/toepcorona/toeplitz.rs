//! Finite sections of block Toeplitz operators on coefficient space.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::apcore::{ApMatrix, Frequency, FrequencyBasis};
use crate::error::{ApwError, Result};
use crate::geometry::Halfspace;
use crate::laurent::MatSeries;

/// Largest dense section (rows or columns) we are willing to build.
pub const MAX_SECTION: usize = 6000;

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedToeplitz {
    pub index_set: Vec<Frequency>,
    pub matrix: DMatrix<Complex64>,
    /// `(m, n)` of the symbol; blocks are `m x n`.
    pub symbol_shape: (usize, usize),
}

fn lattice_ball(rank: usize, radius: i64, prefix: &mut Vec<i64>, out: &mut Vec<Frequency>) {
    if prefix.len() == rank {
        out.push(Frequency(prefix.clone()));
        return;
    }
    let used: i64 = prefix.iter().map(|c| c.abs()).sum();
    let left = radius - used;
    for c in -left..=left {
        prefix.push(c);
        lattice_ball(rank, radius, prefix, out);
        prefix.pop();
    }
}

/// Lattice points `c` with `||c||_1 <= cutoff` and `c` in `S`, ordered by
/// l1 norm and then lexicographically.
pub fn index_set(basis: &FrequencyBasis, s: &Halfspace, cutoff: usize) -> Result<Vec<Frequency>> {
    let t = s.tester(basis)?;
    let mut all = Vec::new();
    lattice_ball(basis.rank(), cutoff as i64, &mut Vec::new(), &mut all);
    let mut set: Vec<Frequency> = all.into_iter().filter(|f| t.contains(f)).collect();
    set.sort_by(|a, b| a.l1().cmp(&b.l1()).then_with(|| a.cmp(b)));
    Ok(set)
}

/// `Pi_S (F phi)` restricted to the index set: block `(mu, nu)` is `F_{mu - nu}`.
pub fn toeplitz_truncate(f: &ApMatrix, s: &Halfspace, cutoff: usize) -> Result<TruncatedToeplitz> {
    let idx = index_set(f.basis(), s, cutoff)?;
    let (m, n) = f.shape();
    if idx.len() * m.max(n) > MAX_SECTION {
        return Err(ApwError::Domain(format!(
            "finite section with {} indices of a {m}x{n} symbol is too large; lower the cutoff",
            idx.len()
        )));
    }
    let mut mat = DMatrix::zeros(idx.len() * m, idx.len() * n);
    for (bi, mu) in idx.iter().enumerate() {
        for (bj, nu) in idx.iter().enumerate() {
            let d = mu.sub(nu);
            for i in 0..m {
                for j in 0..n {
                    if let Some(c) = f.get(i, j).term_map().get(&d) {
                        mat[(bi * m + i, bj * n + j)] = *c;
                    }
                }
            }
        }
    }
    Ok(TruncatedToeplitz {
        index_set: idx,
        matrix: mat,
        symbol_shape: (m, n),
    })
}

/// Section `0..=n` of the block Toeplitz matrix of a Laurent series:
/// block `(i, j)` is the coefficient of `z^{i-j}`.
pub fn laurent_section(series: &MatSeries, n: usize) -> DMatrix<Complex64> {
    let (r, c) = (series.rows(), series.cols());
    let size = n + 1;
    let mut mat = DMatrix::zeros(size * r, size * c);
    if series.is_zero() {
        return mat;
    }
    for i in 0..size {
        for j in 0..size {
            let k = i as i64 - j as i64;
            if k < series.low() || k > series.high() {
                continue;
            }
            mat.view_mut((i * r, j * c), (r, c)).copy_from(&series.coeffs()[(k - series.low()) as usize]);
        }
    }
    mat
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apcore::rational::rat;
    use crate::apcore::ApPolynomial;

    #[test]
    fn shift_section() {
        let b = FrequencyBasis::single(vec![rat(1)]).unwrap().shared();
        let f = ApMatrix::scalar(ApPolynomial::from_terms(b, vec![(vec![1], Complex64::new(1.0, 0.0))]).unwrap());
        let t = toeplitz_truncate(&f, &Halfspace::standard(1), 2).unwrap();
        assert_eq!(t.index_set, vec![Frequency(vec![0]), Frequency(vec![1]), Frequency(vec![2])]);
        let mut expect = DMatrix::zeros(3, 3);
        expect[(1, 0)] = Complex64::new(1.0, 0.0);
        expect[(2, 1)] = Complex64::new(1.0, 0.0);
        assert_eq!(t.matrix, expect);
    }

    #[test]
    fn index_set_rank_two() {
        let b = FrequencyBasis::standard(2);
        let set = index_set(&b, &Halfspace::standard(2), 1).unwrap();
        assert_eq!(set, vec![Frequency(vec![0, 0]), Frequency(vec![0, 1]), Frequency(vec![1, 0])]);
    }
}
