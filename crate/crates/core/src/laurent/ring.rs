//! Euclidean-style column reduction over two rings of Laurent polynomials:
//! the full Laurent ring (units `c z^d`) and the plus algebra restricted to
//! polynomials (units: no roots in the closed unit disc).

use super::matrix::{MatSeries, PolyMatrix};
use super::roots::poly_roots;
use super::split::CIRCLE_TOL;
use super::{poly_divmod, LaurentPoly, C64};
use crate::apcore::sampling;
use crate::error::{ApwError, Result};

/// Relative size below which a computed coefficient is treated as rounding noise.
pub const NOISE_TOL: f64 = 1e-11;

/// A ring with a division step `a u - q b = r`, `u` a unit and
/// `degree(r) < degree(b)`.
pub trait EuclidRing {
    /// Euclidean degree of a nonzero element.
    fn degree(&self, a: &LaurentPoly) -> usize;

    fn is_unit(&self, a: &LaurentPoly) -> bool {
        !a.is_zero() && self.degree(a) == 0
    }

    /// Returns `(u, q)`; the remainder is `a u - q b`.
    fn divide(&self, a: &LaurentPoly, b: &LaurentPoly) -> (LaurentPoly, LaurentPoly);
}

/// Laurent polynomials `C[z, 1/z]`; degree is the exponent span.
#[derive(Clone, Copy, Debug, Default)]
pub struct LaurentRing;

/// Polynomials in `z` viewed inside the plus algebra; degree counts the
/// roots in the closed unit disc (including roots at 0).
#[derive(Clone, Copy, Debug, Default)]
pub struct PlusRing;

impl EuclidRing for LaurentRing {
    fn degree(&self, a: &LaurentPoly) -> usize {
        a.span()
    }

    fn divide(&self, a: &LaurentPoly, b: &LaurentPoly) -> (LaurentPoly, LaurentPoly) {
        let (q, _) = poly_divmod(a.coeffs(), b.coeffs());
        (LaurentPoly::one(), LaurentPoly::new(a.low() - b.low(), q))
    }
}

fn split_disc_roots(b: &LaurentPoly) -> (Vec<C64>, Vec<C64>) {
    poly_roots(b.coeffs())
        .into_iter()
        .partition(|r| r.norm() <= 1.0 + CIRCLE_TOL)
}

impl EuclidRing for PlusRing {
    fn degree(&self, a: &LaurentPoly) -> usize {
        debug_assert!(a.low() >= 0, "plus ring elements have no negative powers");
        let (inside, _) = split_disc_roots(a);
        a.low().max(0) as usize + inside.len()
    }

    fn divide(&self, a: &LaurentPoly, b: &LaurentPoly) -> (LaurentPoly, LaurentPoly) {
        // b = z^low * p_in * b_out with p_in monic carrying the disc roots
        let (inside, _) = split_disc_roots(b);
        let mut p_in = LaurentPoly::one();
        for r in &inside {
            p_in = &p_in * &LaurentPoly::new(0, vec![-r, C64::new(1.0, 0.0)]);
        }
        let (b_out, _) = poly_divmod(b.coeffs(), p_in.coeffs());
        let b_out = LaurentPoly::new(0, b_out);
        let b_in = p_in.shift(b.low());
        let a_full = a.window(0, a.high().max(0));
        let b_in_full = b_in.window(0, b_in.high());
        let (q, _) = poly_divmod(a_full.coeffs(), b_in_full.coeffs());
        let q = LaurentPoly::new(0, q);
        if b_out.span() == 0 {
            (LaurentPoly::one(), q.scale(C64::new(1.0, 0.0) / b_out.coeff(0)))
        } else {
            (b_out, q)
        }
    }
}

/// Result of column-reducing `M` to lower-triangular form: `M E = A`.
#[derive(Clone, Debug)]
pub struct ColumnReduction {
    pub reduced: PolyMatrix,
    pub e: PolyMatrix,
    /// `adj(E) = det(E) E^{-1}`.
    pub adj_e: PolyMatrix,
    pub det_e: LaurentPoly,
}

fn identity(n: usize) -> PolyMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { LaurentPoly::one() } else { LaurentPoly::zero() }).collect())
        .collect()
}

fn clean(p: &LaurentPoly, scale: f64) -> LaurentPoly {
    p.cleaned(NOISE_TOL * scale.max(f64::MIN_POSITIVE))
}

/// Column-reduces `m` (rows x cols) so that row `i` has zeros right of the
/// diagonal, recording the elementary operations.
pub fn reduce_columns<R: EuclidRing>(ring: &R, m: &PolyMatrix) -> Result<ColumnReduction> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a = m.clone();
    let mut e = identity(cols);
    let mut adj = identity(cols);
    let mut det = LaurentPoly::one();
    let mut budget = 64 * (cols + 1) * (rows + 1) + 256;

    for i in 0..rows.min(cols) {
        loop {
            let live: Vec<usize> = (i..cols).filter(|&j| !a[i][j].is_zero()).collect();
            if live.is_empty() {
                break;
            }
            if live.len() == 1 {
                let j = live[0];
                if j != i {
                    for row in a.iter_mut().chain(e.iter_mut()) {
                        row.swap(i, j);
                    }
                    adj.swap(i, j);
                    for row in adj.iter_mut() {
                        for x in row.iter_mut() {
                            *x = -&*x;
                        }
                    }
                    det = -&det;
                }
                break;
            }
            budget = budget
                .checked_sub(1)
                .ok_or_else(|| ApwError::CompletionFailed("column reduction did not terminate".into()))?;
            // pivot: smallest degree, then shortest polynomial, then rightmost
            let pivot = *live
                .iter()
                .min_by_key(|&&j| (ring.degree(&a[i][j]), a[i][j].span(), std::cmp::Reverse(j)))
                .expect("nonempty");
            for &k in live.iter().filter(|&&k| k != pivot) {
                let (u, q) = ring.divide(&a[i][k], &a[i][pivot]);
                // col_k <- u col_k - q col_pivot
                for row in a.iter_mut() {
                    let lhs = &row[k] * &u;
                    let rhs = &q * &row[pivot];
                    let scale = lhs.norm1() + rhs.norm1();
                    row[k] = clean(&(&lhs - &rhs), scale);
                }
                for row in e.iter_mut() {
                    row[k] = &(&row[k] * &u) - &(&q * &row[pivot]);
                }
                // adj <- adj(P) adj: row_p <- u row_p + q row_k, other rows (not k) scaled by u
                let row_k = adj[k].clone();
                for (l, row) in adj.iter_mut().enumerate() {
                    if l == k {
                        continue;
                    }
                    for (c, x) in row.iter_mut().enumerate() {
                        let mut v = &*x * &u;
                        if l == pivot {
                            v = &v + &(&q * &row_k[c]);
                        }
                        *x = v;
                    }
                }
                det = &det * &u;
            }
        }
    }
    Ok(ColumnReduction {
        reduced: a,
        e,
        adj_e: adj,
        det_e: det,
    })
}

/// Reads a numerically unit Laurent polynomial as `c z^d`.
fn as_monomial(g: &LaurentPoly) -> Option<(C64, i64)> {
    let t = g.trimmed(1e-9 * g.norm_inf());
    let t = t.cleaned(1e-9 * g.norm_inf());
    t.is_monomial().then(|| (t.coeff(t.low()), t.low()))
}

/// `b` with `sum a_i b_i = 1` over the Laurent ring, or `None` when the
/// entries share a root in `C \ {0}` (or all vanish).
pub fn bezout_solve(a: &[LaurentPoly]) -> Option<Vec<LaurentPoly>> {
    if a.is_empty() || a.iter().all(LaurentPoly::is_zero) {
        return None;
    }
    let red = reduce_columns(&LaurentRing, &vec![a.to_vec()]).ok()?;
    let (c, d) = as_monomial(&red.reduced[0][0])?;
    let g_inv = LaurentPoly::monomial(C64::new(1.0, 0.0) / c, -d);
    let b: Vec<LaurentPoly> = red.e.iter().map(|row| &row[0] * &g_inv).collect();
    let residual = bezout_residual(a, &b);
    (residual <= 1e-9).then_some(b)
}

/// `||sum a_i b_i - 1||_1`.
pub fn bezout_residual(a: &[LaurentPoly], b: &[LaurentPoly]) -> f64 {
    let s = a
        .iter()
        .zip(b)
        .fold(LaurentPoly::zero(), |acc, (x, y)| &acc + &(x * y));
    (&s - &LaurentPoly::one()).norm1()
}

/// Determinant by cofactor expansion (small matrices).
pub fn poly_det(m: &PolyMatrix) -> LaurentPoly {
    let n = m.len();
    match n {
        0 => LaurentPoly::one(),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        _ => {
            let mut acc = LaurentPoly::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: PolyMatrix = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, p)| p.clone()).collect())
                    .collect();
                let term = &m[0][j] * &poly_det(&minor);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

/// Rows `m..n` that complete the `m x n` matrix `g` to a square matrix whose
/// determinant is a unit of `ring`. Requires the reduced diagonal to consist
/// of units (row-unimodular input).
pub fn completion_rows<R: EuclidRing>(ring: &R, g: &PolyMatrix) -> Result<PolyMatrix> {
    let m = g.len();
    let n = g.first().map_or(0, Vec::len);
    if m > n {
        return Err(ApwError::Shape(format!("cannot complete {m} rows of length {n}")));
    }
    let red = reduce_columns(ring, g)?;
    for i in 0..m {
        let d = &red.reduced[i][i];
        if d.is_zero() || !ring.is_unit(&clean(d, d.norm1())) {
            return Err(ApwError::CompletionFailed(format!(
                "row {i} does not reduce to a unit; the rows are not unimodular"
            )));
        }
    }
    Ok(red.adj_e[m..].to_vec())
}

/// Completes a unimodular row over the Laurent ring to a square matrix with
/// unit determinant; the first row of the result is `a` itself.
pub fn complete_unimodular_row(a: &[LaurentPoly]) -> Result<PolyMatrix> {
    if bezout_solve(a).is_none() {
        return Err(ApwError::CompletionFailed("row is not unimodular".into()));
    }
    let mut f = vec![a.to_vec()];
    f.extend(completion_rows(&LaurentRing, &vec![a.to_vec()])?);
    // determinant must be c z^d: constant modulus on the circle
    let det = poly_det(&f);
    let mods: Vec<f64> = sampling::circle_points(256).into_iter().map(|z| det.eval(z).norm()).collect();
    let (lo, hi) = mods.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &x| (l.min(x), h.max(x)));
    if !(lo > 0.0 && (hi - lo) <= 1e-8 * hi) {
        return Err(ApwError::CompletionFailed(format!(
            "completed determinant is not a unit (modulus range {lo:.3e}..{hi:.3e})"
        )));
    }
    Ok(f)
}

/// Right inverse over the plus algebra of a row-unimodular `m x n` polynomial
/// matrix, truncated to an entrywise l1 residual of `tol`.
pub fn plus_right_inverse(g: &PolyMatrix, tol: f64) -> Result<MatSeries> {
    let m = g.len();
    let n = g.first().map_or(0, Vec::len);
    let red = reduce_columns(&PlusRing, g)?;
    let l: PolyMatrix = (0..m).map(|i| red.reduced[i][..m].to_vec()).collect();
    let l = MatSeries::from_polys(m, m, &l);
    let e_cols: PolyMatrix = red.e.iter().map(|row| row[..m].to_vec()).collect();
    let e_cols = MatSeries::from_polys(n, m, &e_cols);
    let scale = e_cols.max_entry_norm1().max(1.0);
    let l_inv = l.plus_inverse(tol / (scale * m as f64), 1 << 16)?;
    Ok(e_cols.mul(&l_inv))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(low: i64, c: &[f64]) -> LaurentPoly {
        LaurentPoly::from_real(low, c)
    }

    #[test]
    fn bezout_examples() {
        assert_eq!(bezout_solve(&[LaurentPoly::one()]).unwrap(), vec![LaurentPoly::one()]);
        let a = [lp(1, &[1.0]), lp(0, &[1.0, -1.0])];
        let b = bezout_solve(&a).unwrap();
        assert!(bezout_residual(&a, &b) < 1e-12);
        assert!(bezout_solve(&[lp(0, &[-1.0, 1.0]), lp(0, &[-1.0, 0.0, 1.0])]).is_none());
        assert!(bezout_solve(&[LaurentPoly::zero()]).is_none());
    }

    #[test]
    fn completion_examples() {
        let f = complete_unimodular_row(&[LaurentPoly::one(), LaurentPoly::zero()]).unwrap();
        assert_eq!(f[1], vec![LaurentPoly::zero(), LaurentPoly::one()]);
        let a = vec![lp(1, &[1.0]), lp(0, &[1.0, -1.0])];
        let f = complete_unimodular_row(&a).unwrap();
        assert_eq!(f[0], a);
        let det = poly_det(&f);
        assert!(det.trimmed(1e-12).is_monomial());
    }

    #[test]
    fn plus_ring_degree_counts_disc_roots() {
        assert_eq!(PlusRing.degree(&lp(0, &[1.0, -0.5])), 0);
        assert_eq!(PlusRing.degree(&lp(0, &[-0.5, 1.0])), 1);
        assert_eq!(PlusRing.degree(&lp(2, &[1.0])), 2);
    }

    #[test]
    fn plus_right_inverse_of_row() {
        let g = vec![vec![lp(0, &[-0.5, 1.0]), lp(0, &[1.0, 0.3])]];
        let x = plus_right_inverse(&g, 1e-12).unwrap();
        let gm = MatSeries::from_polys(1, 2, &g);
        let r = gm.mul(&x).sub(&MatSeries::identity(1));
        assert!(r.max_entry_norm1() < 1e-10);
        assert!(x.low() >= 0);
    }
}
