//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use apw_core::apcore::rational::{rat, ratio};
use apw_core::laurent::LaurentPoly;
use apw_core::{ApMatrix, ApPolynomial, FrequencyBasis};
use num_complex::Complex64;

pub fn rank_one() -> Arc<FrequencyBasis> {
    FrequencyBasis::single(vec![rat(1)]).unwrap().shared()
}

pub fn rank_two() -> Arc<FrequencyBasis> {
    FrequencyBasis::new(2, vec![vec![rat(1), rat(0)], vec![ratio(1, 2), rat(1)]])
        .unwrap()
        .shared()
}

/// Dense polynomial on the `(-n..=n)^r` box with deterministic coefficients.
pub fn dense_poly(basis: &Arc<FrequencyBasis>, n: i64) -> ApPolynomial {
    let r = basis.rank();
    let mut terms = Vec::new();
    let mut coord = vec![-n; r];
    let mut k = 0u32;
    loop {
        let x = f64::from(k);
        terms.push((coord.clone(), Complex64::new((0.37 * x).sin(), (0.91 * x).cos()) / (1.0 + x)));
        k += 1;
        let mut i = 0;
        while i < r {
            coord[i] += 1;
            if coord[i] <= n {
                break;
            }
            coord[i] = -n;
            i += 1;
        }
        if i == r {
            break;
        }
    }
    ApPolynomial::from_terms(basis.clone(), terms).unwrap()
}

/// `prod (z - r_j)` with roots alternating inside and outside the circle.
pub fn laurent_with_roots(degree: usize) -> LaurentPoly {
    let mut p = LaurentPoly::one();
    for j in 0..degree {
        let modulus = if j % 2 == 0 { 0.5 } else { 2.0 };
        let r = Complex64::from_polar(modulus, 0.7 * j as f64);
        p = &p * &LaurentPoly::new(0, vec![-r, Complex64::new(1.0, 0.0)]);
    }
    p.shift(-(degree as i64 / 2))
}

pub fn to_ap(basis: &Arc<FrequencyBasis>, p: &LaurentPoly) -> ApPolynomial {
    let terms = (p.low()..=p.high()).map(|k| (vec![k], p.coeff(k))).collect();
    ApPolynomial::from_terms(basis.clone(), terms).unwrap()
}

/// `1 x n` row whose first entry has `degree` roots off the circle.
pub fn row(n: usize, degree: usize) -> ApMatrix {
    let b = rank_one();
    let mut entries = vec![to_ap(&b, &laurent_with_roots(degree))];
    for j in 1..n {
        let q = LaurentPoly::from_real(-1, &[0.3, 1.0 / (j as f64 + 1.0), -0.2]);
        entries.push(to_ap(&b, &q));
    }
    ApMatrix::from_rows(b, vec![entries]).unwrap()
}

/// The two-column corona instance `A = [1 - e/2, e/2]`, `B = [1]`.
pub fn worked_corona() -> (ApMatrix, ApMatrix) {
    let b = rank_one();
    let p = |t: &[(i64, f64)]| {
        ApPolynomial::from_terms(b.clone(), t.iter().map(|&(k, x)| (vec![k], Complex64::new(x, 0.0))).collect())
            .unwrap()
    };
    let a = ApMatrix::from_rows(b.clone(), vec![vec![p(&[(0, 1.0), (1, -0.5)]), p(&[(1, 0.5)])]]).unwrap();
    (a, ApMatrix::identity(b, 1))
}
