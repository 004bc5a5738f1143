use std::sync::Arc;

use apw_core::apcore::rational::{rat, ratio};
use apw_core::geometry::{project, project_kind, MaskKind, SpectralMask};
use apw_core::{ApPolynomial, Frequency, FrequencyBasis, Halfspace, Rational};
use num_complex::Complex64;
use proptest::prelude::*;

fn rank_one() -> Arc<FrequencyBasis> {
    FrequencyBasis::single(vec![rat(1), ratio(1, 3)]).unwrap().shared()
}

fn rank_two() -> Arc<FrequencyBasis> {
    FrequencyBasis::new(2, vec![vec![rat(1), rat(0)], vec![ratio(1, 2), rat(1)]])
        .unwrap()
        .shared()
}

fn bases() -> impl Strategy<Value = Arc<FrequencyBasis>> {
    prop_oneof![Just(rank_one()), Just(rank_two())]
}

fn poly_in(basis: Arc<FrequencyBasis>) -> impl Strategy<Value = ApPolynomial> {
    let r = basis.rank();
    prop::collection::vec(
        (prop::collection::vec(-4i64..=4, r), -2.0f64..2.0, -2.0f64..2.0),
        0..=12,
    )
    .prop_map(move |terms| {
        ApPolynomial::from_terms(
            basis.clone(),
            terms.into_iter().map(|(c, re, im)| (c, Complex64::new(re, im))).collect(),
        )
        .unwrap()
    })
}

fn pair() -> impl Strategy<Value = (ApPolynomial, ApPolynomial)> {
    bases().prop_flat_map(|b| (poly_in(b.clone()), poly_in(b)))
}

fn rational_matrix(k: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    prop::collection::vec(prop::collection::vec((-3i64..=3, 1i64..=3), k), k)
        .prop_map(|rows| rows.into_iter().map(|r| r.into_iter().map(|(n, d)| ratio(n, d)).collect()).collect())
        .prop_filter("invertible", |z: &Vec<Vec<Rational>>| {
            apw_core::apcore::rational::inverse(z).is_some()
        })
}

fn halfspace_and_samples() -> impl Strategy<Value = (Halfspace, Vec<Vec<Rational>>)> {
    (1usize..=4).prop_flat_map(|k| {
        (
            rational_matrix(k),
            prop::collection::vec(prop::collection::vec(-5i64..=5, k), 20),
        )
            .prop_map(|(z, pts)| {
                let pts = pts.into_iter().map(|p| p.into_iter().map(rat).collect()).collect();
                (Halfspace::new(z).unwrap(), pts)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wiener_norm_is_submultiplicative((f, g) in pair()) {
        let fg = f.mul(&g).unwrap();
        let bound = f.wiener_norm() * g.wiener_norm();
        prop_assert!(fg.wiener_norm() <= bound * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn product_spectrum_lies_in_sumset((f, g) in pair()) {
        let fg = f.mul(&g).unwrap();
        let sf = f.spectrum();
        let sg = g.spectrum();
        for l in fg.spectrum() {
            prop_assert!(sf.iter().any(|a| sg.contains(&l.sub(a))));
        }
    }

    #[test]
    fn evaluation_is_multiplicative((f, g) in pair(), x in prop::collection::vec(-10.0f64..10.0, 2)) {
        let fg = f.mul(&g).unwrap();
        let lhs = fg.eval(&x).unwrap();
        let rhs = f.eval(&x).unwrap() * g.eval(&x).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + f.wiener_norm() * g.wiener_norm()));
    }

    #[test]
    fn conjugation_matches_pointwise((f, _g) in pair(), x in prop::collection::vec(-10.0f64..10.0, 2)) {
        let lhs = f.conj().eval(&x).unwrap();
        prop_assert!((lhs - f.eval(&x).unwrap().conj()).norm() <= 1e-12 * (1.0 + f.wiener_norm()));
    }

    #[test]
    fn characters_are_orthonormal(b in bases(), a in prop::collection::vec(-3i64..=3, 2), c in prop::collection::vec(-3i64..=3, 2)) {
        let r = b.rank();
        let fa = Frequency(a[..r].to_vec());
        let fc = Frequency(c[..r].to_vec());
        let ea = ApPolynomial::monomial(b.clone(), fa.clone(), Complex64::new(1.0, 0.0)).unwrap();
        let ec = ApPolynomial::monomial(b, fc.clone(), Complex64::new(1.0, 0.0)).unwrap();
        let ip = ea.bohr_inner(&ec).unwrap();
        let want = if fa == fc { 1.0 } else { 0.0 };
        prop_assert_eq!(ip, Complex64::new(want, 0.0));
    }

    #[test]
    fn halfspace_axioms((s, pts) in halfspace_and_samples()) {
        let zero = vec![rat(0); s.dim()];
        prop_assert!(s.contains_vector(&zero).unwrap());
        let neg = |v: &[Rational]| v.iter().map(|x| -x).collect::<Vec<_>>();
        for v in &pts {
            let a = s.contains_vector(v).unwrap();
            let b = s.contains_vector(&neg(v)).unwrap();
            if v.iter().all(|x| *x == rat(0)) {
                prop_assert!(a && b);
            } else {
                prop_assert!(a != b);
            }
            if a {
                let (dir, _) = s.y_vector();
                let dot: Rational = dir.iter().zip(v).map(|(p, q)| p * q).sum();
                prop_assert!(dot >= rat(0));
                prop_assert!(s.contains_vector(&v.iter().map(|x| x * rat(3)).collect::<Vec<_>>()).unwrap());
                for w in &pts {
                    if s.contains_vector(w).unwrap() {
                        let sum: Vec<Rational> = v.iter().zip(w).map(|(p, q)| p + q).collect();
                        prop_assert!(s.contains_vector(&sum).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn projections_partition((f, _g) in pair()) {
        let s = Halfspace::standard(2);
        let plus = project_kind(&f, &s, MaskKind::S).unwrap();
        let minus = project_kind(&f, &s, MaskKind::MinusSMinusZero).unwrap();
        prop_assert_eq!(plus.add(&minus).unwrap(), f.clone());
        prop_assert_eq!(project_kind(&plus, &s, MaskKind::S).unwrap(), plus.clone());
        let mask = SpectralMask::new(MaskKind::MinusSMinusZero, s).unwrap();
        prop_assert_eq!(project(&minus, &mask).unwrap(), minus);
    }
}

#[test]
fn sumset_of_characters() {
    let b = rank_two();
    let e = |c: Vec<i64>| ApPolynomial::monomial(b.clone(), Frequency(c), Complex64::new(1.0, 0.0)).unwrap();
    let p = e(vec![1, 0]).mul(&e(vec![-1, 2])).unwrap();
    assert_eq!(p.spectrum().into_iter().collect::<Vec<_>>(), vec![Frequency(vec![0, 2])]);
    assert_eq!(p.bohr_mean(), Complex64::new(0.0, 0.0));
}

#[test]
fn projection_in_standard_halfspace() {
    let b = FrequencyBasis::standard(1).shared();
    let f = ApPolynomial::from_terms(
        b,
        vec![(vec![-1], Complex64::new(1.0, 0.0)), (vec![0], Complex64::new(2.0, 0.0)), (vec![1], Complex64::new(3.0, 0.0))],
    )
    .unwrap();
    let plus = project_kind(&f, &Halfspace::standard(1), MaskKind::S).unwrap();
    assert_eq!(plus.len(), 2);
    assert_eq!(plus.coeff(&Frequency(vec![-1])), Complex64::new(0.0, 0.0));
}
