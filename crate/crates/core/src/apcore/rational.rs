//! Exact rational helpers: parsing, formatting and small dense linear algebra.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{ApwError, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || ApwError::Parse(format!("invalid rational `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(ApwError::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Rational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(p))
        }
    }
}

/// Canonical `"p/q"` form (reduced, positive denominator, always with a slash).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back on a ratio of big floats for huge numerators/denominators
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Rank over Q of the given column vectors.
pub fn rank(cols: &[Vec<Rational>]) -> usize {
    if cols.is_empty() {
        return 0;
    }
    let rows = cols[0].len();
    // rows of the transposed system: one row per column vector
    let mut m: Vec<Vec<Rational>> = cols.to_vec();
    let mut r = 0;
    for c in 0..rows {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &pivot;
                for j in c..rows {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Inverse of a square rational matrix given row-major; `None` if singular.
pub fn inverse(a: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let pivot = m[c][c].clone();
        for x in m[c].iter_mut() {
            *x = &*x / &pivot;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..2 * n {
                    let delta = &f * &m[c][j];
                    m[i][j] -= delta;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Solves `cols * x = b` exactly for the unique `x`, if one exists.
/// `cols` must be linearly independent.
pub fn solve_columns(cols: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let r = cols.len();
    let k = b.len();
    // augmented k x (r+1)
    let mut m: Vec<Vec<Rational>> = (0..k)
        .map(|i| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::with_capacity(r);
    let mut row = 0;
    for c in 0..r {
        let p = (row..k).find(|&i| !m[i][c].is_zero())?;
        m.swap(row, p);
        let pivot = m[row][c].clone();
        for x in m[row].iter_mut() {
            *x = &*x / &pivot;
        }
        for i in 0..k {
            if i != row && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=r {
                    let delta = &f * &m[row][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(row);
        row += 1;
    }
    if (row..k).any(|i| !m[i][r].is_zero()) {
        return None;
    }
    Some(pivots.into_iter().map(|i| m[i][r].clone()).collect())
}

/// Least common multiple of the denominators of a rational vector.
pub fn denominator_lcm(v: &[Rational]) -> BigInt {
    v.iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Integer vector proportional (with positive factor) to `v`.
pub fn clear_denominators(v: &[Rational]) -> Vec<BigInt> {
    let l = denominator_lcm(v);
    v.iter()
        .map(|x| (x * Rational::from_integer(l.clone())).to_integer())
        .collect()
}

pub fn is_negative(r: &Rational) -> bool {
    r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("6/4").unwrap(), ratio(3, 2));
        assert_eq!(parse_rational("-7").unwrap(), rat(-7));
        assert_eq!(format_rational(&ratio(-6, 4)), "-3/2");
        assert_eq!(format_rational(&rat(2)), "2/1");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn rank_and_inverse() {
        let cols = vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)]];
        assert_eq!(rank(&cols), 1);
        let z = vec![vec![rat(0), rat(1)], vec![rat(1), rat(0)]];
        assert_eq!(inverse(&z).unwrap(), z);
        let singular = vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)]];
        assert!(inverse(&singular).is_none());
    }

    #[test]
    fn solve_overdetermined() {
        let cols = vec![vec![rat(1), rat(0), rat(1)]];
        assert_eq!(solve_columns(&cols, &[rat(2), rat(0), rat(2)]).unwrap(), vec![rat(2)]);
        assert!(solve_columns(&cols, &[rat(2), rat(1), rat(2)]).is_none());
    }
}
