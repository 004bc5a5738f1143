use std::sync::Arc;

use apw_core::apcore::rational::rat;
use apw_core::toepcorona::{corona_parametrize, corona_solve, gram_test};
use apw_core::{ApMatrix, ApPolynomial, ApwError, ErrorClass, FrequencyBasis, Halfspace, SolverOptions};
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

fn worked() -> (ApMatrix, ApMatrix) {
    let b = basis();
    let a = ApMatrix::from_rows(b.clone(), vec![vec![poly(&b, &[(0, 1.0), (1, -0.5)]), poly(&b, &[(1, 0.5)])]]).unwrap();
    let bb = ApMatrix::scalar(poly(&b, &[(0, 1.0)]));
    (a, bb)
}

#[test]
fn worked_instance_gamma_three() {
    let (a, b) = worked();
    let s = Halfspace::standard(1);
    let opts = SolverOptions::default();
    let sol = corona_solve(&a, &b, 3.0, &s, &opts).unwrap();
    assert!(sol.residuals["af0_minus_b"] <= 1e-7);
    let g = ApMatrix::scalar(poly(&a.basis().clone(), &[(0, 0.3)]));
    let par = corona_parametrize(&sol, &g, &opts).unwrap();
    assert!(par.residuals["parameter_roundtrip"] <= 1e-6);
}

#[test]
fn worked_instance_gamma_one_fails_gram() {
    let (a, b) = worked();
    let rep = gram_test(&a, &b, 1.0, &Halfspace::standard(1), &SolverOptions::default()).unwrap();
    assert!(!rep.passes && rep.margin < 0.0);
}

#[test]
fn worked_instance_gamma_one_is_infeasible() {
    let (a, b) = worked();
    let e = corona_solve(&a, &b, 1.0, &Halfspace::standard(1), &SolverOptions::default()).unwrap_err();
    assert_eq!(e.class(), ErrorClass::Infeasible);
    assert!(matches!(e, ApwError::Stage { stage: "gram", .. }));
}

#[test]
fn unit_row_has_exact_central_solution() {
    let bs = basis();
    let a = ApMatrix::from_rows(bs.clone(), vec![vec![poly(&bs, &[(0, 1.0)]), poly(&bs, &[])]]).unwrap();
    let b = ApMatrix::identity(bs.clone(), 1);
    let sol = corona_solve(&a, &b, 2.0, &Halfspace::standard(1), &SolverOptions::default()).unwrap();
    let want = ApMatrix::from_rows(bs.clone(), vec![vec![poly(&bs, &[(0, 1.0)])], vec![poly(&bs, &[])]]).unwrap();
    assert!(sol.f0.wiener_distance(&want).unwrap() < 1e-12);
    assert_eq!(sol.j0, vec![1, -1]);
}

#[test]
fn square_case_solution_is_unique() {
    let bs = basis();
    let a = ApMatrix::scalar(poly(&bs, &[(0, 2.0), (1, -0.5)]));
    let b = ApMatrix::identity(bs.clone(), 1);
    let sol = corona_solve(&a, &b, 1.0, &Halfspace::standard(1), &SolverOptions::default()).unwrap();
    assert_eq!(sol.j0, vec![-1]);
    // F0 = 1 / (2 - z/2), whose sup norm is 1 / 1.5
    assert!((sol.residuals["f0_sup_norm"] - 2.0 / 3.0).abs() < 1e-9);
    let x = [0.7];
    let want = Complex64::new(1.0, 0.0) / a.get(0, 0).eval(&x).unwrap();
    assert!((sol.f0.get(0, 0).eval(&x).unwrap() - want).norm() < 1e-9);
}

#[test]
fn random_contractive_parameters_round_trip() {
    let (a, b) = worked();
    let opts = SolverOptions::default();
    let sol = corona_solve(&a, &b, 3.0, &Halfspace::standard(1), &opts).unwrap();
    let bs = a.basis().clone();
    for k in 0..10 {
        let r = 0.95 * (k as f64 + 0.5) / 10.0;
        let g = ApMatrix::scalar(
            ApPolynomial::constant(bs.clone(), Complex64::from_polar(r, 1.3 * k as f64)),
        );
        let par = corona_parametrize(&sol, &g, &opts).unwrap();
        assert!(par.residuals["parameter_roundtrip"] <= 1e-6);
        assert!(par.residuals["af_minus_b"] <= 1e-7);
        assert!(par.residuals["f_sup_norm"] <= 3.0 + 1e-6);
    }
}

#[test]
fn non_contractive_parameter_is_rejected() {
    let (a, b) = worked();
    let opts = SolverOptions::default();
    let sol = corona_solve(&a, &b, 3.0, &Halfspace::standard(1), &opts).unwrap();
    let g = ApMatrix::scalar(poly(&a.basis().clone(), &[(0, 1.5)]));
    assert_eq!(corona_parametrize(&sol, &g, &opts).unwrap_err().class(), ErrorClass::Domain);
}

#[test]
fn spectrum_outside_halfspace_is_rejected() {
    let bs = basis();
    let a = ApMatrix::from_rows(bs.clone(), vec![vec![poly(&bs, &[(0, 1.0), (-1, 0.5)]), poly(&bs, &[])]]).unwrap();
    let b = ApMatrix::identity(bs, 1);
    let e = corona_solve(&a, &b, 3.0, &Halfspace::standard(1), &SolverOptions::default()).unwrap_err();
    assert_eq!(e.class(), ErrorClass::Domain);
}
