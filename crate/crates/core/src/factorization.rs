//! AP factorizations `G = G+ diag(e_l) G-` for commensurable spectra:
//! scalar symbols, single rows and columns, square augmentation and
//! verification, plus a finite-section test for canonical factorability.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::apcore::{ApMatrix, ApPolynomial, Frequency};
use crate::error::{ApwError, Result};
use crate::geometry::{project_kind, Halfspace, MaskKind};
use crate::laurent::matrix::{MatSeries, PolyMatrix};
use crate::laurent::ring::{completion_rows, plus_right_inverse, poly_det, PlusRing};
use crate::laurent::{laurent_inverse_truncated, spectral_split, LaurentPoly, Rank1Reduction, Side};
use crate::options::SolverOptions;
use crate::toepcorona::toeplitz::laurent_section;

/// `G = g_plus * diag(e_{indices}) * g_minus` over the halfspace `S`.
#[derive(Clone, Debug, PartialEq)]
pub struct ApFactorization {
    pub g_plus: ApMatrix,
    pub indices: Vec<Frequency>,
    pub g_minus: ApMatrix,
    pub halfspace: Halfspace,
    /// Max-entry Wiener distance between `G` and the product.
    pub residual: f64,
}

impl ApFactorization {
    pub fn p(&self) -> usize {
        self.indices.len()
    }

    pub fn is_canonical(&self) -> bool {
        self.indices.iter().all(Frequency::is_zero)
    }

    pub fn middle(&self) -> ApMatrix {
        ApMatrix::diag_characters(self.g_plus.basis().clone(), &self.indices)
            .expect("indices have the basis rank")
    }

    pub fn product(&self) -> Result<ApMatrix> {
        self.g_plus.mul(&self.middle())?.mul(&self.g_minus)
    }

    /// The factorization of `G^T` with respect to `-S`.
    pub fn transposed(&self) -> ApFactorization {
        ApFactorization {
            g_plus: self.g_minus.transpose(),
            indices: self.indices.clone(),
            g_minus: self.g_plus.transpose(),
            halfspace: self.halfspace.negated(),
            residual: self.residual,
        }
    }

    /// Factor data of the first `m` rows: same indices and minus factor.
    pub fn restrict_rows(&self, m: usize) -> ApFactorization {
        ApFactorization {
            g_plus: self.g_plus.submatrix(0..m, 0..self.g_plus.cols()),
            ..self.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorizationStatus {
    Factored,
    Canonical,
    NotInvertible,
    UnsupportedRank,
    CompletionFailed,
}

impl FactorizationStatus {
    pub fn name(self) -> &'static str {
        match self {
            FactorizationStatus::Factored => "factored",
            FactorizationStatus::Canonical => "canonical",
            FactorizationStatus::NotInvertible => "not_invertible",
            FactorizationStatus::UnsupportedRank => "unsupported_rank",
            FactorizationStatus::CompletionFailed => "completion_failed",
        }
    }

    pub fn is_success(self) -> bool {
        matches!(self, FactorizationStatus::Factored | FactorizationStatus::Canonical)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorizationReport {
    pub status: FactorizationStatus,
    pub factorization: Option<ApFactorization>,
    pub diagnostics: String,
    pub certificates: BTreeMap<String, f64>,
}

impl FactorizationReport {
    fn success(fact: ApFactorization, certificates: BTreeMap<String, f64>) -> Self {
        let status = if fact.is_canonical() {
            FactorizationStatus::Canonical
        } else {
            FactorizationStatus::Factored
        };
        FactorizationReport {
            status,
            diagnostics: format!("p = {}, residual {:.3e}", fact.p(), fact.residual),
            factorization: Some(fact),
            certificates,
        }
    }

    /// Maps mathematical failures to a status; input errors stay errors.
    fn failure(err: ApwError) -> Result<Self> {
        let status = match err.root() {
            ApwError::NotCommensurable(_) => FactorizationStatus::UnsupportedRank,
            ApwError::NotInvertible(_) | ApwError::Conditioning(_) => FactorizationStatus::NotInvertible,
            ApwError::CompletionFailed(_) | ApwError::NotCoprime(_) => FactorizationStatus::CompletionFailed,
            _ => return Err(err),
        };
        Ok(FactorizationReport {
            status,
            factorization: None,
            diagnostics: err.to_string(),
            certificates: BTreeMap::new(),
        })
    }

    pub fn into_factorization(self) -> Result<ApFactorization> {
        match self.factorization {
            Some(f) => Ok(f),
            None => Err(match self.status {
                FactorizationStatus::UnsupportedRank => ApwError::NotCommensurable(2),
                FactorizationStatus::CompletionFailed => ApwError::CompletionFailed(self.diagnostics),
                _ => ApwError::NotInvertible(self.diagnostics),
            }),
        }
    }
}

/// `G = [Pi_S G, I_m] [I_n; Pi_{(-S)\0} G]`, with `p = n + m` factors.
///
/// This always exists and is useless as a factorization: it shows why the
/// number of middle factors has to be restricted.
pub fn trivial_representation(g: &ApMatrix, s: &Halfspace) -> Result<(ApMatrix, ApMatrix)> {
    let basis = g.basis().clone();
    let (m, n) = g.shape();
    let plus = g.try_map(|p| project_kind(p, s, MaskKind::S))?;
    let minus = g.try_map(|p| project_kind(p, s, MaskKind::MinusSMinusZero))?;
    let g_plus = plus.hstack(&ApMatrix::identity(basis.clone(), m))?;
    let g_minus = ApMatrix::identity(basis, n).vstack(&minus)?;
    Ok((g_plus, g_minus))
}

fn one_sided_residual(p: &LaurentPoly, inv: &LaurentPoly) -> f64 {
    (&(p * inv) - &LaurentPoly::one()).norm1()
}

struct ScalarParts {
    plus: LaurentPoly,
    w: i64,
    minus: LaurentPoly,
    plus_inv: LaurentPoly,
    minus_inv: LaurentPoly,
}

fn split_scalar(g: &LaurentPoly, tol: f64) -> Result<ScalarParts> {
    let sp = spectral_split(g)?;
    let plus_inv = laurent_inverse_truncated(&sp.plus, Side::Plus, tol)?;
    let minus_inv = laurent_inverse_truncated(&sp.minus, Side::Minus, tol)?;
    Ok(ScalarParts {
        plus: sp.plus,
        w: sp.w,
        minus: sp.minus,
        plus_inv,
        minus_inv,
    })
}

/// Wiener-Hopf factorization `g = g+ e_l g-` of a scalar with rank-1 spectrum.
pub fn scalar_factorize(g: &ApPolynomial, s: &Halfspace, opts: &SolverOptions) -> Result<FactorizationReport> {
    match scalar_inner(g, s, opts) {
        Ok((fact, certs)) => Ok(FactorizationReport::success(fact, certs)),
        Err(e) => FactorizationReport::failure(e),
    }
}

fn scalar_inner(
    g: &ApPolynomial,
    s: &Halfspace,
    opts: &SolverOptions,
) -> Result<(ApFactorization, BTreeMap<String, f64>)> {
    let basis = g.basis().clone();
    let red = Rank1Reduction::new(&basis, [g], s)?;
    let lp = red.to_laurent(g)?;
    let parts = split_scalar(&lp, opts.tail_tol)?;
    let g_plus = ApMatrix::scalar(red.from_laurent(&parts.plus));
    let g_minus = ApMatrix::scalar(red.from_laurent(&parts.minus));
    let mut fact = ApFactorization {
        g_plus,
        indices: vec![red.frequency(parts.w)],
        g_minus,
        halfspace: s.clone(),
        residual: 0.0,
    };
    fact.residual = fact.product()?.wiener_distance(&ApMatrix::scalar(g.clone()))?;
    let mut certs = BTreeMap::new();
    certs.insert("plus_inverse_residual".into(), one_sided_residual(&parts.plus, &parts.plus_inv));
    certs.insert("minus_inverse_residual".into(), one_sided_residual(&parts.minus, &parts.minus_inv));
    certs.insert("winding_index".into(), parts.w as f64);
    certs.insert("relative_residual".into(), fact.residual / g.wiener_norm().max(f64::MIN_POSITIVE));
    Ok((fact, certs))
}

/// Factorization of a `1 x n` row through an invertible pivot entry, with
/// `n` middle factors all equal to the pivot's index.
///
/// Without a pivot the first entry that factorizes is used.
pub fn row_factorize(
    g: &ApMatrix,
    pivot: Option<usize>,
    s: &Halfspace,
    opts: &SolverOptions,
) -> Result<FactorizationReport> {
    if g.rows() != 1 || g.cols() == 0 {
        return Err(ApwError::Shape(format!("expected a nonempty row, got {}x{}", g.rows(), g.cols())));
    }
    if let Some(j) = pivot {
        if j >= g.cols() {
            return Err(ApwError::Shape(format!("pivot {j} out of range for {} columns", g.cols())));
        }
    }
    match row_inner(g, pivot, s, opts) {
        Ok((fact, certs)) => Ok(FactorizationReport::success(fact, certs)),
        Err(e) => FactorizationReport::failure(e),
    }
}

fn row_inner(
    g: &ApMatrix,
    pivot: Option<usize>,
    s: &Halfspace,
    opts: &SolverOptions,
) -> Result<(ApFactorization, BTreeMap<String, f64>)> {
    let n = g.cols();
    let red = Rank1Reduction::for_matrices(&[g], s)?;
    let entries: Vec<LaurentPoly> = (0..n).map(|j| red.to_laurent(g.get(0, j))).collect::<Result<_>>()?;

    let (pivot, parts) = match pivot {
        Some(j) => (j, split_scalar(&entries[j], opts.tail_tol)?),
        None => {
            let mut found = None;
            let mut last_err = None;
            for (j, e) in entries.iter().enumerate() {
                match split_scalar(e, opts.tail_tol) {
                    Ok(p) => {
                        found = Some((j, p));
                        break;
                    }
                    Err(err) => last_err = Some(err),
                }
            }
            found.ok_or_else(|| {
                ApwError::NotInvertible(format!(
                    "no entry of the row is invertible ({})",
                    last_err.map_or_else(String::new, |e| e.to_string())
                ))
            })?
        }
    };

    // pivot first; G = G' P^{-1}
    let mut perm: Vec<usize> = vec![pivot];
    perm.extend((0..n).filter(|&j| j != pivot));
    let inv = (&parts.plus_inv * &parts.minus_inv).shift(-parts.w);

    let mut plus_row = vec![parts.plus.clone()];
    let mut minus_first = vec![parts.minus.clone()];
    for &j in &perm[1..] {
        let x = &inv * &entries[j];
        plus_row.push(&parts.plus * &x.plus_part());
        minus_first.push(&parts.minus * &x.strict_minus_part());
    }
    let zero = LaurentPoly::zero();
    let mut minus_rows: PolyMatrix = vec![minus_first];
    for i in 1..n {
        minus_rows.push((0..n).map(|c| if c == i { parts.minus.clone() } else { zero.clone() }).collect());
    }
    // undo the column permutation on the minus factor
    let mut unpermuted: PolyMatrix = vec![vec![zero.clone(); n]; n];
    for (i, row) in minus_rows.iter().enumerate() {
        for (c, p) in row.iter().enumerate() {
            unpermuted[i][perm[c]] = p.clone();
        }
    }
    let g_plus = red.polys_to_matrix(1, n, &vec![plus_row]);
    let g_minus = red.polys_to_matrix(n, n, &unpermuted);
    let mut fact = ApFactorization {
        g_plus,
        indices: vec![red.frequency(parts.w); n],
        g_minus,
        halfspace: s.clone(),
        residual: 0.0,
    };
    fact.residual = fact.product()?.wiener_distance(g)?;

    let mut certs = BTreeMap::new();
    certs.insert("pivot".into(), pivot as f64);
    // [g1+^{-1}; 0; ...] is a right inverse of G+
    certs.insert(
        "plus_right_inverse_residual".into(),
        one_sided_residual(&parts.plus, &parts.plus_inv),
    );
    certs.insert(
        "minus_inverse_residual".into(),
        one_sided_residual(&parts.minus, &parts.minus_inv),
    );
    certs.insert("relative_residual".into(), fact.residual / g.max_wiener_norm().max(f64::MIN_POSITIVE));
    Ok((fact, certs))
}

/// Column case by duality: factor `G^T` over `-S` and transpose back.
pub fn column_factorize(
    g: &ApMatrix,
    pivot: Option<usize>,
    s: &Halfspace,
    opts: &SolverOptions,
) -> Result<FactorizationReport> {
    if g.cols() != 1 {
        return Err(ApwError::Shape(format!("expected a column, got {}x{}", g.rows(), g.cols())));
    }
    let mut rep = row_factorize(&g.transpose(), pivot, &s.negated(), opts)?;
    rep.factorization = rep.factorization.map(|f| f.transposed());
    if let Some(v) = rep.certificates.remove("plus_right_inverse_residual") {
        rep.certificates.insert("minus_left_inverse_residual".into(), v);
    }
    if let Some(v) = rep.certificates.remove("minus_inverse_residual") {
        rep.certificates.insert("plus_inverse_residual".into(), v);
    }
    Ok(rep)
}

/// Dispatches on the shape: scalars, rows and columns are supported.
pub fn factorize(g: &ApMatrix, s: &Halfspace, opts: &SolverOptions) -> Result<FactorizationReport> {
    match g.shape() {
        (1, 1) => scalar_factorize(g.get(0, 0), s, opts),
        (1, _) => row_factorize(g, None, s, opts),
        (_, 1) => column_factorize(g, None, s, opts),
        (m, n) => Err(ApwError::Domain(format!(
            "factorization of {m}x{n} matrices is only available through augmentation of a row or column"
        ))),
    }
}

/// Winding number of `det` on the circle by a phase integral.
fn phase_winding(p: &LaurentPoly, samples: usize) -> (i64, f64) {
    let pts = crate::apcore::sampling::circle_points(samples);
    let vals: Vec<Complex64> = pts.iter().map(|z| p.eval(*z)).collect();
    let min_mod = vals.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
    let mut total = 0.0;
    for k in 0..vals.len() {
        let a = vals[k];
        let b = vals[(k + 1) % vals.len()];
        total += (b / a).arg();
    }
    ((total / std::f64::consts::TAU).round() as i64, min_mod)
}

/// Extends a factored `m x n` matrix (`m < n`) to a square matrix by adding
/// rows, keeping the indices and the minus factor; `m > n` adds columns.
pub fn augment_to_square(
    g: &ApMatrix,
    fact: &ApFactorization,
    opts: &SolverOptions,
) -> Result<(ApMatrix, ApFactorization)> {
    let (m, n) = g.shape();
    if m > n {
        let (ft, fact_t) = augment_to_square(&g.transpose(), &fact.transposed(), opts)?;
        return Ok((ft.transpose(), fact_t.transposed()));
    }
    if fact.g_plus.shape() != (m, n) || fact.g_minus.shape() != (n, n) {
        return Err(ApwError::Shape("factor shapes do not match p = max(m, n)".into()));
    }
    if m == n {
        return Ok((g.clone(), fact.clone()));
    }
    let s = &fact.halfspace;
    let red = Rank1Reduction::for_matrices(&[g, &fact.g_plus, &fact.g_minus], s)?;
    let plus = red.matrix_to_polys(&fact.g_plus)?;
    if plus.iter().flatten().any(|p| !p.is_zero() && p.low() < 0) {
        return Err(ApwError::Domain("plus factor has frequencies outside S".into()));
    }
    let scale = plus.iter().flatten().map(LaurentPoly::norm_inf).fold(0.0, f64::max);
    let cleaned: PolyMatrix = plus
        .iter()
        .map(|row| row.iter().map(|p| p.cleaned(opts.tail_tol * scale)).collect())
        .collect();
    let extra = completion_rows(&PlusRing, &cleaned)?;
    let mut f_plus_polys = plus.clone();
    f_plus_polys.extend(extra.iter().cloned());
    let det = poly_det(&f_plus_polys);
    let (wind, min_mod) = phase_winding(&det, 4096);
    if wind != 0 || !(min_mod > 1e-9 * det.norm1()) {
        return Err(ApwError::CompletionFailed(format!(
            "completed plus factor has determinant with winding {wind}, min modulus {min_mod:.3e}"
        )));
    }
    let extra_m = red.polys_to_matrix(n - m, n, &extra);
    let f_plus = fact.g_plus.vstack(&extra_m)?;
    let tail = extra_m.mul(&fact.middle())?.mul(&fact.g_minus)?;
    let f = g.vstack(&tail)?;
    let mut out = ApFactorization {
        g_plus: f_plus,
        indices: fact.indices.clone(),
        g_minus: fact.g_minus.clone(),
        halfspace: s.clone(),
        residual: 0.0,
    };
    out.residual = out.product()?.wiener_distance(&f)?;
    Ok((f, out))
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub residual: f64,
    pub mask_violations: usize,
    pub indices_ordered: bool,
    pub shapes_ok: bool,
    pub plus_right_inverse_residual: Option<f64>,
    pub minus_left_inverse_residual: Option<f64>,
}

impl VerifyReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.shapes_ok
            && self.mask_violations == 0
            && self.indices_ordered
            && self.residual <= tol
            && self.plus_right_inverse_residual.is_none_or(|r| r <= tol)
            && self.minus_left_inverse_residual.is_none_or(|r| r <= tol)
    }
}

fn right_inverse_residual(g: &PolyMatrix, rows: usize, cols: usize, tol: f64) -> Option<f64> {
    if rows > cols || rows == 0 {
        return None;
    }
    let scale = g.iter().flatten().map(LaurentPoly::norm_inf).fold(0.0, f64::max);
    let cleaned: PolyMatrix = g
        .iter()
        .map(|row| row.iter().map(|p| p.cleaned(tol * scale)).collect())
        .collect();
    let x = plus_right_inverse(&cleaned, tol).ok()?;
    let gm = MatSeries::from_polys(rows, cols, g);
    Some(gm.mul(&x).distance(&MatSeries::identity(rows)))
}

/// Checks the defining properties of a factorization of `g`.
pub fn verify_factorization(g: &ApMatrix, fact: &ApFactorization, opts: &SolverOptions) -> Result<VerifyReport> {
    let (m, n) = g.shape();
    let p = fact.p();
    let shapes_ok = fact.g_plus.shape() == (m, p) && fact.g_minus.shape() == (p, n);
    if !shapes_ok {
        return Ok(VerifyReport {
            residual: f64::INFINITY,
            mask_violations: 0,
            indices_ordered: false,
            shapes_ok,
            plus_right_inverse_residual: None,
            minus_left_inverse_residual: None,
        });
    }
    let s = &fact.halfspace;
    let t = s.tester(g.basis())?;
    let plus_bad = fact.g_plus.entries().iter().flat_map(|e| e.terms()).filter(|(l, _)| !t.contains(l)).count();
    let minus_bad = fact
        .g_minus
        .entries()
        .iter()
        .flat_map(|e| e.terms())
        .filter(|(l, _)| !t.contains(&l.neg()))
        .count();
    let indices_ordered = fact.indices.windows(2).all(|w| t.contains(&w[1].sub(&w[0])));
    let residual = fact.product()?.wiener_distance(g)?;

    let (plus_inv, minus_inv) = match Rank1Reduction::for_matrices(&[g, &fact.g_plus, &fact.g_minus], s) {
        Ok(red) if plus_bad + minus_bad == 0 => {
            let tol = opts.tail_tol.max(1e-14);
            let gp = red.matrix_to_polys(&fact.g_plus)?;
            let plus = right_inverse_residual(&gp, m, p, tol);
            // Y G- = I  <=>  reflect(G-)^T reflect(Y)^T = I with reflect(G-)^T plus
            let gm = red.matrix_to_series(&fact.g_minus)?.reflect().transpose();
            let minus = right_inverse_residual(&gm.to_polys(), n, p, tol);
            (plus, minus)
        }
        _ => (None, None),
    };
    Ok(VerifyReport {
        residual,
        mask_violations: plus_bad + minus_bad,
        indices_ordered,
        shapes_ok,
        plus_right_inverse_residual: plus_inv,
        minus_left_inverse_residual: minus_inv,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CanonicalVerdict {
    LikelyCanonical,
    NotCanonicalEvidence,
    Inconclusive,
}

impl CanonicalVerdict {
    pub fn name(self) -> &'static str {
        match self {
            CanonicalVerdict::LikelyCanonical => "likely_canonical",
            CanonicalVerdict::NotCanonicalEvidence => "not_canonical_evidence",
            CanonicalVerdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalReport {
    pub verdict: CanonicalVerdict,
    /// `(section size, sigma_min / sigma_max)` at each cutoff, in generator steps.
    pub samples: Vec<(usize, f64)>,
}

const SIGMA_FLOOR: f64 = 1e-6;

/// Finite-section heuristic for invertibility of the Toeplitz operator of
/// `G^T`: watches the relative smallest singular value at cutoffs
/// `c/4, c/2, c`. Stabilization above `1e-6` suggests a canonical
/// factorization; geometric decay is taken as evidence against one.
pub fn canonical_test(g: &ApMatrix, s: &Halfspace, cutoff: usize) -> Result<CanonicalReport> {
    if g.rows() != g.cols() {
        return Err(ApwError::Shape("canonical test needs a square symbol".into()));
    }
    let red = Rank1Reduction::for_matrices(&[g], s)?;
    let series = red.matrix_to_series(g)?.transpose();
    let c = cutoff.max(4);
    let mut samples = Vec::new();
    for n in [c / 4, c / 2, c] {
        let t = laurent_section(&series, n);
        let sv = t.singular_values();
        let max = sv.max();
        let rel = if max > 0.0 { sv.min() / max } else { 0.0 };
        samples.push((n, rel));
    }
    let (s1, s2, s3) = (samples[0].1, samples[1].1, samples[2].1);
    let verdict = if s3 < SIGMA_FLOOR {
        CanonicalVerdict::NotCanonicalEvidence
    } else if s2 >= SIGMA_FLOOR && s3 >= 0.9 * s2 {
        CanonicalVerdict::LikelyCanonical
    } else if s3 < 0.5 * s2 && s2 < 0.9 * s1 {
        CanonicalVerdict::NotCanonicalEvidence
    } else {
        CanonicalVerdict::Inconclusive
    };
    Ok(CanonicalReport { verdict, samples })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::apcore::rational::rat;
    use crate::apcore::FrequencyBasis;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn basis() -> Arc<FrequencyBasis> {
        FrequencyBasis::single(vec![rat(1)]).unwrap().shared()
    }

    fn poly(b: &Arc<FrequencyBasis>, terms: &[(i64, f64)]) -> ApPolynomial {
        ApPolynomial::from_terms(b.clone(), terms.iter().map(|&(k, x)| (vec![k], c(x))).collect()).unwrap()
    }

    #[test]
    fn scalar_examples() {
        let b = basis();
        let s = Halfspace::standard(1);
        let opts = SolverOptions::default();
        let rep = scalar_factorize(&poly(&b, &[(0, 1.0), (1, -0.5)]), &s, &opts).unwrap();
        assert_eq!(rep.status, FactorizationStatus::Canonical);
        let rep = scalar_factorize(&poly(&b, &[(-1, 1.0), (0, -0.5)]), &s, &opts).unwrap();
        assert_eq!(rep.status, FactorizationStatus::Factored);
        let f = rep.factorization.unwrap();
        assert_eq!(f.indices, vec![Frequency(vec![-1])]);
        assert!(f.residual < 1e-12);
        let rep = scalar_factorize(&poly(&b, &[(-1, 1.0), (1, 1.0)]), &s, &opts).unwrap();
        assert_eq!(rep.status, FactorizationStatus::NotInvertible);
    }

    #[test]
    fn row_and_augment() {
        let b = basis();
        let s = Halfspace::standard(1);
        let opts = SolverOptions::default();
        let g = ApMatrix::from_rows(b.clone(), vec![vec![poly(&b, &[(0, 1.0), (1, -0.5)]), poly(&b, &[(1, 1.0)])]]).unwrap();
        let rep = row_factorize(&g, None, &s, &opts).unwrap();
        assert_eq!(rep.status, FactorizationStatus::Canonical);
        let fact = rep.factorization.unwrap();
        assert!(fact.residual < 1e-10);
        let v = verify_factorization(&g, &fact, &opts).unwrap();
        assert!(v.passes(1e-8), "{v:?}");
        let (f, ff) = augment_to_square(&g, &fact, &opts).unwrap();
        assert_eq!(f.submatrix(0..1, 0..2), g);
        assert!(ff.residual < 1e-8);
        assert_eq!(ff.restrict_rows(1), fact);
    }

    #[test]
    fn canonical_verdicts() {
        let b = basis();
        let s = Halfspace::standard(1);
        let g = ApMatrix::scalar(poly(&b, &[(0, 1.0), (1, -0.5)]));
        assert_eq!(canonical_test(&g, &s, 32).unwrap().verdict, CanonicalVerdict::LikelyCanonical);
        let g = ApMatrix::scalar(poly(&b, &[(1, 1.0)]));
        assert_eq!(canonical_test(&g, &s, 32).unwrap().verdict, CanonicalVerdict::NotCanonicalEvidence);
    }
}
