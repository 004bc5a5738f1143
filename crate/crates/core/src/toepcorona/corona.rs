//! The Toeplitz corona solver: a `gamma`-bounded solution of `A F = B` over
//! the plus algebra, and the linear-fractional family of all such solutions.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::coprime::coprime_series;
use super::gram::{check_b_invertible, check_corona_shapes, gram_test};
use super::symmetric::{signature_matrix, symmetric_core};
use crate::apcore::ApMatrix;
use crate::error::{ApwError, Result};
use crate::geometry::{matrix_spectrum_in, Halfspace};
use crate::laurent::split::MAX_SERIES_LEN;
use crate::laurent::{MatSeries, Rank1Reduction};
use crate::options::SolverOptions;

type C64 = Complex64;

/// Gram margins below this are treated as the semidefinite boundary and rejected.
pub const STRICT_MARGIN: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct CoronaSolution {
    pub a: ApMatrix,
    pub b: ApMatrix,
    pub gamma: f64,
    pub halfspace: Halfspace,
    /// Right coprime pair for `B^{-1} A / gamma`: `p x m` and `m x m`.
    pub c: ApMatrix,
    pub d: ApMatrix,
    /// `D*D - C*C = R* J0 R`.
    pub r: ApMatrix,
    pub j0: Vec<i8>,
    pub theta11: ApMatrix,
    pub theta12: ApMatrix,
    pub theta21: ApMatrix,
    pub theta22: ApMatrix,
    /// The solution at parameter `G = 0`.
    pub f0: ApMatrix,
    pub residuals: BTreeMap<String, f64>,
}

impl CoronaSolution {
    pub fn m(&self) -> usize {
        self.a.cols()
    }

    pub fn p(&self) -> usize {
        self.a.rows()
    }

    pub fn theta(&self) -> Result<ApMatrix> {
        let top = self.theta11.hstack(&self.theta12)?;
        let bottom = self.theta21.hstack(&self.theta22)?;
        top.vstack(&bottom)
    }
}

fn staged<T>(stage: &'static str, r: Result<T>) -> Result<T> {
    r.map_err(|e| e.at(stage))
}

fn j_matrix(pos: usize, neg: usize) -> DMatrix<C64> {
    let mut v = vec![1i8; pos];
    v.extend(std::iter::repeat_n(-1i8, neg));
    signature_matrix(&v)
}

pub fn corona_solve(a: &ApMatrix, b: &ApMatrix, gamma: f64, s: &Halfspace, opts: &SolverOptions) -> Result<CoronaSolution> {
    let (p, m) = a.shape();
    staged("input", check_corona_shapes(a, b, gamma, s))?;
    if m < p || p == 0 {
        return Err(ApwError::Shape(format!("need 0 < p <= m, got p = {p}, m = {m}")).at("input"));
    }
    staged("input", check_b_invertible(b, opts))?;
    let gram = staged("gram", gram_test(a, b, gamma, s, opts))?;
    if gram.margin < STRICT_MARGIN {
        return Err(ApwError::Infeasible(format!(
            "Gram margin {:.3e} at gamma = {gamma}, cutoff {} (need >= {STRICT_MARGIN:.0e})",
            gram.margin, opts.cutoff
        ))
        .at("gram"));
    }

    let b_scaled = b.scale(C64::new(1.0 / gamma, 0.0));
    let cs = staged("coprime", coprime_series(a, &b_scaled, s, opts))?;
    let red = cs.red.clone();
    let (c, d) = (cs.c.clone(), cs.d.clone());
    let min_det_d = d.min_abs_det_on_circle(opts.grid_density.clamp(64, 4096));
    if !(min_det_d >= 1e-9) {
        return Err(ApwError::NotInvertible(format!("sampled min |det D| = {min_det_d:.3e}")).at("coprime"));
    }

    let h = d.adjoint().mul(&d).sub(&c.adjoint().mul(&c));
    let sym = staged("symmetric", symmetric_core(&h, &red, s, opts))?;
    let mut expect = vec![1i8; m - p];
    expect.extend(std::iter::repeat_n(-1i8, p));
    if sym.j0 != expect {
        return Err(ApwError::Inconsistent(format!("signature {:?}, expected {:?}", sym.j0, expect)).at("signature"));
    }

    let theta = d.vstack(&c).mul(&sym.q);
    let t11 = theta.submatrix(0..m, 0..m - p);
    let t12 = theta.submatrix(0..m, m - p..m);
    let t21 = theta.submatrix(m..m + p, 0..m - p);
    let t22 = theta.submatrix(m..m + p, m - p..m);
    let t22_inv = staged(
        "theta",
        t22.plus_inverse(opts.tail_tol / (1.0 + t12.max_entry_norm1()), MAX_SERIES_LEN),
    )?;
    let f0 = t12.mul(&t22_inv).scale(C64::new(gamma, 0.0));

    let isometry = theta
        .adjoint()
        .mul(&MatSeries::constant(j_matrix(m, p)))
        .mul(&theta)
        .distance(&MatSeries::constant(j_matrix(m - p, p)));
    let f0_m = red.series_to_matrix(&f0);
    let af0 = staged("certify", a.mul(&f0_m).and_then(|x| x.wiener_distance(b)))?;
    let sup = f0_m.sup_norm_estimate(opts.grid_density, opts.seed);

    let mut residuals = BTreeMap::new();
    residuals.insert("gram_margin".to_string(), gram.margin);
    residuals.insert("bezout_residual".to_string(), cs.bezout_residual);
    residuals.insert("symmetric_residual".to_string(), sym.residual);
    residuals.insert("r_inverse_residual".to_string(), sym.inverse_residual);
    residuals.insert("theta_isometry".to_string(), isometry);
    residuals.insert("af0_minus_b".to_string(), af0);
    residuals.insert("f0_sup_norm".to_string(), sup);
    residuals.insert("min_abs_det_d".to_string(), min_det_d);

    if isometry > 1e-8 {
        return Err(ApwError::Inconsistent(format!("theta isometry defect {isometry:.3e}")).at("certify"));
    }
    if af0 > 1e-7 {
        return Err(ApwError::Inconsistent(format!("||A F0 - B||_W = {af0:.3e}")).at("certify"));
    }
    if sup > gamma + 1e-6 {
        return Err(ApwError::Inconsistent(format!("sampled ||F0|| = {sup:.6} exceeds gamma = {gamma}")).at("certify"));
    }

    Ok(CoronaSolution {
        a: a.clone(),
        b: b.clone(),
        gamma,
        halfspace: s.clone(),
        c: red.series_to_matrix(&c),
        d: red.series_to_matrix(&d),
        r: red.series_to_matrix(&sym.r),
        j0: sym.j0,
        theta11: red.series_to_matrix(&t11),
        theta12: red.series_to_matrix(&t12),
        theta21: red.series_to_matrix(&t21),
        theta22: red.series_to_matrix(&t22),
        f0: f0_m,
        residuals,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParametrizedSolution {
    pub f: ApMatrix,
    pub residuals: BTreeMap<String, f64>,
}

struct ThetaSeries {
    t11: MatSeries,
    t12: MatSeries,
    t21: MatSeries,
    t22: MatSeries,
    g: MatSeries,
}

fn theta_series(sol: &CoronaSolution, g: &ApMatrix) -> Result<(Rank1Reduction, ThetaSeries)> {
    let mats = [&sol.theta11, &sol.theta12, &sol.theta21, &sol.theta22, g];
    let red = Rank1Reduction::for_matrices(&mats, &sol.halfspace)?;
    let ts = ThetaSeries {
        t11: red.matrix_to_series(&sol.theta11)?,
        t12: red.matrix_to_series(&sol.theta12)?,
        t21: red.matrix_to_series(&sol.theta21)?,
        t22: red.matrix_to_series(&sol.theta22)?,
        g: red.matrix_to_series(g)?,
    };
    Ok((red, ts))
}

/// `F = gamma (T11 G + T12)(T21 G + T22)^{-1}` for a contractive parameter
/// `G` with spectrum in `S`.
pub fn corona_parametrize(sol: &CoronaSolution, g: &ApMatrix, opts: &SolverOptions) -> Result<ParametrizedSolution> {
    let (m, p) = (sol.m(), sol.p());
    if g.shape() != (m - p, p) {
        return Err(ApwError::Shape(format!(
            "parameter must be {}x{p}, got {}x{}",
            m - p,
            g.rows(),
            g.cols()
        )));
    }
    if !(std::sync::Arc::ptr_eq(g.basis(), sol.a.basis()) || g.basis() == sol.a.basis()) {
        return Err(ApwError::BasisMismatch);
    }
    if !matrix_spectrum_in(g, &sol.halfspace)? {
        return Err(ApwError::Domain("parameter spectrum must lie in S".into()));
    }
    let g_sup = g.sup_norm_estimate(opts.grid_density, opts.seed);
    if g_sup > 1.0 + 1e-12 {
        return Err(ApwError::Domain(format!("parameter is not contractive: sampled norm {g_sup:.6}")));
    }
    let (red, ts) = theta_series(sol, g)?;
    let num = ts.t11.mul(&ts.g).add(&ts.t12);
    let den = ts.t21.mul(&ts.g).add(&ts.t22);
    let min_det = den.min_abs_det_on_circle(opts.grid_density.clamp(64, 4096));
    if !(min_det >= 1e-8) {
        return Err(ApwError::Conditioning(format!(
            "denominator T21 G + T22 is nearly singular (min |det| {min_det:.3e})"
        )));
    }
    let den_inv = den.plus_inverse(opts.tail_tol / (1.0 + num.max_entry_norm1()), MAX_SERIES_LEN)?;
    let f = num.mul(&den_inv).scale(C64::new(sol.gamma, 0.0));
    let f_m = red.series_to_matrix(&f);
    let af = sol.a.mul(&f_m)?.wiener_distance(&sol.b)?;
    let sup = f_m.sup_norm_estimate(opts.grid_density, opts.seed);
    let roundtrip = parameter_roundtrip_error(sol, g, &f_m, 512)?;
    let mut residuals = BTreeMap::new();
    residuals.insert("af_minus_b".to_string(), af);
    residuals.insert("f_sup_norm".to_string(), sup);
    residuals.insert("parameter_roundtrip".to_string(), roundtrip);
    residuals.insert("min_abs_det_denominator".to_string(), min_det);
    if af > 1e-6 {
        return Err(ApwError::Inconsistent(format!("||A F - B||_W = {af:.3e}")));
    }
    if sup > sol.gamma + 1e-4 {
        return Err(ApwError::Inconsistent(format!("sampled ||F|| = {sup:.6} exceeds gamma")));
    }
    Ok(ParametrizedSolution { f: f_m, residuals })
}

/// Recovers the parameter of `F` pointwise on the circle through
/// `G = (T11* F' - T21*)(T22* - T12* F')^{-1}`, `F' = F / gamma`, and
/// returns the largest deviation from `g`.
pub fn parameter_roundtrip_error(sol: &CoronaSolution, g: &ApMatrix, f: &ApMatrix, samples: usize) -> Result<f64> {
    let (red, ts) = theta_series(sol, g)?;
    let fs = red.matrix_to_series(f)?;
    let mut worst: f64 = 0.0;
    for z in crate::apcore::sampling::circle_points(samples.max(1)) {
        let fp = fs.eval(z) / C64::new(sol.gamma, 0.0);
        let t11 = ts.t11.eval(z).adjoint();
        let t12 = ts.t12.eval(z).adjoint();
        let t21 = ts.t21.eval(z).adjoint();
        let t22 = ts.t22.eval(z).adjoint();
        let num = &t11 * &fp - t21;
        let den = t22 - &t12 * &fp;
        let den_inv = den
            .try_inverse()
            .ok_or_else(|| ApwError::Conditioning("singular denominator in the inverse formula".into()))?;
        let rec = num * den_inv;
        worst = worst.max((rec - ts.g.eval(z)).norm());
    }
    Ok(worst)
}
