use std::sync::Arc;

use apw_core::apcore::rational::rat;
use apw_core::toepcorona::{
    gram_test, index_set, kernel_range_check, right_coprime_from_left, symmetric_factorize, toeplitz_truncate,
};
use apw_core::{ApMatrix, ApwError, ApPolynomial, ErrorClass, Frequency, FrequencyBasis, Halfspace, SolverOptions};
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn basis() -> Arc<FrequencyBasis> {
    FrequencyBasis::single(vec![rat(1)]).unwrap().shared()
}

fn poly(b: &Arc<FrequencyBasis>, terms: &[(i64, f64)]) -> ApPolynomial {
    ApPolynomial::from_terms(b.clone(), terms.iter().map(|&(k, x)| (vec![k], c(x))).collect()).unwrap()
}

fn opts(cutoff: usize) -> SolverOptions {
    SolverOptions {
        cutoff,
        ..SolverOptions::default()
    }
}

/// Lower-triangular section of multiplication by a scalar analytic symbol.
fn analytic_section(coeffs: &[f64], n: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |i, j| {
        if i >= j && i - j < coeffs.len() {
            c(coeffs[i - j])
        } else {
            c(0.0)
        }
    })
}

#[test]
fn index_set_ordering() {
    let b = FrequencyBasis::standard(2);
    let idx = index_set(&b, &Halfspace::standard(2), 1).unwrap();
    assert_eq!(idx, vec![Frequency(vec![0, 0]), Frequency(vec![0, 1]), Frequency(vec![1, 0])]);
}

#[test]
fn section_of_adjoint_symbol_is_adjoint() {
    let b = FrequencyBasis::standard(2).shared();
    let s = Halfspace::standard(2);
    let f = ApPolynomial::from_terms(
        b,
        vec![(vec![1, 0], Complex64::new(1.0, 2.0)), (vec![0, -1], c(0.5)), (vec![-1, 1], Complex64::new(0.0, -1.0))],
    )
    .unwrap();
    let t = toeplitz_truncate(&ApMatrix::scalar(f.clone()), &s, 3).unwrap();
    let ts = toeplitz_truncate(&ApMatrix::scalar(f.conj()), &s, 3).unwrap();
    assert_eq!(ts.matrix, t.matrix.adjoint());
}

#[test]
fn shift_section_is_a_shift() {
    let b = basis();
    let t = toeplitz_truncate(&ApMatrix::scalar(poly(&b, &[(1, 1.0)])), &Halfspace::standard(1), 3).unwrap();
    assert_eq!(t.matrix, analytic_section(&[0.0, 1.0], 4));
}

#[test]
fn gram_margin_matches_direct_section() {
    let b = basis();
    let s = Halfspace::standard(1);
    let a = ApMatrix::from_rows(b.clone(), vec![vec![poly(&b, &[(0, 1.0), (1, -0.5)]), poly(&b, &[(1, 0.5)])]]).unwrap();
    let one = ApMatrix::identity(b, 1);
    for gamma in [1.0, 3.0] {
        let rep = gram_test(&a, &one, gamma, &s, &opts(16)).unwrap();
        let t1 = analytic_section(&[1.0, -0.5], 17);
        let t2 = analytic_section(&[0.0, 0.5], 17);
        let m = &t1 * t1.adjoint() + &t2 * t2.adjoint() - DMatrix::identity(17, 17) * c(1.0 / (gamma * gamma));
        let want = SymmetricEigen::new(m).eigenvalues.min();
        assert!((rep.margin - want).abs() < 1e-12);
        assert_eq!(rep.passes, gamma > 2.0);
        assert_eq!(rep.section_size, 17);
    }
}

#[test]
fn gram_rejects_singular_b() {
    let b = basis();
    let a = ApMatrix::identity(b.clone(), 1);
    let bb = ApMatrix::scalar(poly(&b, &[(0, 1.0), (1, 1.0)]));
    let e = gram_test(&a, &bb, 2.0, &Halfspace::standard(1), &opts(8)).unwrap_err();
    assert_eq!(e.class(), ErrorClass::Domain);
}

#[test]
fn coprime_pair_of_worked_row() {
    let b = basis();
    let s = Halfspace::standard(1);
    let a = ApMatrix::from_rows(b.clone(), vec![vec![poly(&b, &[(0, 1.0), (1, -0.5)]), poly(&b, &[(1, 0.5)])]]).unwrap();
    let one = ApMatrix::identity(b, 1);
    let cp = right_coprime_from_left(&a, &one, &s, &SolverOptions::default()).unwrap();
    assert_eq!(cp.c.shape(), (1, 2));
    assert_eq!(cp.d.shape(), (2, 2));
    assert!(cp.product_residual < 1e-12);
    assert!(cp.bezout_residual < 1e-10);
    // X D + Y C = I, checked independently on the AP side
    let lhs = cp.x.mul(&cp.d).unwrap().add(&cp.y.mul(&cp.c).unwrap()).unwrap();
    assert!(lhs.wiener_distance(&ApMatrix::identity(a.basis().clone(), 2)).unwrap() < 1e-10);
    let kr = kernel_range_check(&a, &one, &cp.c, &cp.d, &s, 12).unwrap();
    assert!(kr.product_residual < 1e-10);
}

#[test]
fn non_coprime_pair_is_rejected() {
    let b = basis();
    let s = Halfspace::standard(1);
    let a = ApMatrix::from_rows(b.clone(), vec![vec![poly(&b, &[(1, 1.0)]), poly(&b, &[(2, 1.0)])]]).unwrap();
    let one = ApMatrix::identity(b, 1);
    assert!(right_coprime_from_left(&a, &one, &s, &SolverOptions::default()).is_ok());
    // z divides both A and B
    let bad = ApMatrix::scalar(poly(a.basis(), &[(1, 1.0)]));
    let e = right_coprime_from_left(&a, &bad, &s, &SolverOptions::default()).unwrap_err();
    assert!(matches!(e.root(), ApwError::NotCoprime(_)), "{e}");
}

#[test]
fn symmetric_outer_factor() {
    let b = basis();
    let h = ApMatrix::scalar(poly(&b, &[(-1, -0.5), (0, 1.25), (1, -0.5)]));
    let sf = symmetric_factorize(&h, &Halfspace::standard(1), &SolverOptions::default()).unwrap();
    assert_eq!(sf.j0, vec![1]);
    assert!(sf.residual < 1e-10);
    let r = sf.r.get(0, 0);
    assert!((r.coeff(&Frequency(vec![0])).norm() - 1.0).abs() < 1e-9);
    assert!((r.coeff(&Frequency(vec![1])).norm() - 0.5).abs() < 1e-9);
}

#[test]
fn symmetric_indefinite_signature() {
    let b = basis();
    let h = ApMatrix::from_rows(
        b.clone(),
        vec![
            vec![poly(&b, &[(0, 2.0)]), poly(&b, &[(1, 0.3)])],
            vec![poly(&b, &[(-1, 0.3)]), poly(&b, &[(0, -3.0)])],
        ],
    )
    .unwrap();
    let sf = symmetric_factorize(&h, &Halfspace::standard(1), &SolverOptions::default()).unwrap();
    assert_eq!(sf.j0, vec![1, -1]);
    let j = ApMatrix::from_rows(
        b.clone(),
        vec![vec![poly(&b, &[(0, 1.0)]), poly(&b, &[])], vec![poly(&b, &[]), poly(&b, &[(0, -1.0)])]],
    )
    .unwrap();
    let back = sf.r.conj_transpose().mul(&j).unwrap().mul(&sf.r).unwrap();
    assert!(back.wiener_distance(&h).unwrap() < 1e-9);
}

#[test]
fn symmetric_rejects_non_hermitian() {
    let b = basis();
    let h = ApMatrix::scalar(poly(&b, &[(0, 1.0), (1, 0.5)]));
    assert!(symmetric_factorize(&h, &Halfspace::standard(1), &SolverOptions::default()).is_err());
}
