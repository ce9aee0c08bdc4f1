//! K-functional between `X = L^p(d^{αp})` and `Y = W^{1,p}(d^{αp}, d^{(α+1)p})`,
//! the interpolation norm built from it, and the equivalence table against the
//! fractional norms.
//!
//! Every value computed here comes from an explicit decomposition `f = g + h`
//! and is therefore an upper bound on the true infimum.

mod objective;
mod path;
mod subgradient;

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::domain::{sci, DistanceField, GridDomain};
use crate::error::{invalid, Result};
use crate::norms::{
    check_len, delta_seminorm, tilde_seminorm, weighted_lp_norm, FracParams, GridFunction,
};
use crate::quadrature::{log_grid, log_trapezoid};
use crate::whitney::Approximator;
pub use objective::{KParams, KParts};
use objective::Objective;
pub use path::PathSettings;
use path::QuadraticPath;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KMethod {
    Variational,
    Constructive,
    TrivialTail,
}

impl fmt::Display for KMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KMethod::Variational => "variational",
            KMethod::Constructive => "constructive",
            KMethod::TrivialTail => "trivial-tail",
        })
    }
}

/// Iteration limits for the variational solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverBudget {
    pub max_iter: usize,
    pub window: usize,
    pub rel_tol: f64,
    pub path: PathSettings,
}

impl Default for SolverBudget {
    fn default() -> Self {
        Self {
            max_iter: 10_000,
            window: 50,
            rel_tol: 1e-6,
            path: PathSettings::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct KDecomposition {
    pub lambda: f64,
    pub g: GridFunction,
    pub h: GridFunction,
    pub parts: KParts,
    /// `‖g‖_X + λ‖h‖_Y`
    pub value: f64,
    pub method: KMethod,
    pub iterations: usize,
    pub objective_gap: f64,
    /// `‖∇h‖_Y` with the analytic gradient of the approximant (constructive only)
    pub analytic_grad_norm: Option<f64>,
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(invalid("lambda", format!("must be positive, got {lambda}")));
    }
    Ok(())
}

fn check_finite(f: &GridFunction) -> Result<()> {
    if f.values().iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(crate::Error::NonFinite)
    }
}

/// Per-`(f, p, α)` solver state shared by all `λ`.
struct Solver<'a> {
    f: &'a GridFunction,
    obj: Objective,
    budget: SolverBudget,
}

impl<'a> Solver<'a> {
    fn new(f: &'a GridFunction, d: &DistanceField, params: KParams, budget: SolverBudget) -> Result<Self> {
        check_finite(f)?;
        Ok(Self {
            f,
            obj: Objective::new(f, d, params)?,
            budget,
        })
    }

    fn decomposition(&self, lambda: f64, h: Vec<f64>, method: KMethod, iterations: usize, gap: f64) -> Result<KDecomposition> {
        let parts = self.obj.parts(self.f.values(), &h);
        let dom = self.f.domain().clone();
        let g: Vec<f64> = self.f.values().iter().zip(&h).map(|(a, b)| a - b).collect();
        Ok(KDecomposition {
            lambda,
            g: GridFunction::new(dom.clone(), g)?,
            h: GridFunction::new(dom, h)?,
            value: parts.value(lambda),
            parts,
            method,
            iterations,
            objective_gap: gap,
            analytic_grad_norm: None,
        })
    }

    fn trivial(&self, lambda: f64) -> Result<KDecomposition> {
        self.decomposition(lambda, vec![0.0; self.f.len()], KMethod::TrivialTail, 0, 0.0)
    }

    /// Runs the variational solver at each `λ`; `λ ≥ 1` gets the trivial decomposition.
    fn variational(&self, lambdas: &[f64]) -> Result<Vec<KDecomposition>> {
        let n = self.f.len();
        let f = self.f.values();
        let zero = vec![0.0; n];
        let path = (self.obj.p == 2.0 && lambdas.iter().any(|&l| l < 1.0))
            .then(|| QuadraticPath::new(&self.obj, f, self.budget.path));
        let mut out = Vec::with_capacity(lambdas.len());
        for (i, &lambda) in lambdas.iter().enumerate() {
            check_lambda(lambda)?;
            if lambda >= 1.0 {
                out.push(self.trivial(lambda)?);
                continue;
            }
            let (h, iterations, gap) = match &path {
                Some(path) => {
                    let sol = path.minimize(lambda);
                    let it = sol.iterations + if i == 0 { path.iterations } else { 0 };
                    (sol.h, it, sol.gap)
                }
                None => {
                    let b = &self.budget;
                    let r = subgradient::descend(&self.obj, f, lambda, b.max_iter, b.window, b.rel_tol);
                    (r.h, r.iterations, r.gap)
                }
            };
            // h = 0 and h = f are always feasible fallbacks
            let candidates = [h, zero.clone(), f.to_vec()];
            let best = candidates
                .into_iter()
                .min_by(|a, b| {
                    let va = self.obj.parts(f, a).value(lambda);
                    let vb = self.obj.parts(f, b).value(lambda);
                    va.total_cmp(&vb)
                })
                .expect("nonempty");
            out.push(self.decomposition(lambda, best, KMethod::Variational, iterations, gap)?);
        }
        Ok(out)
    }
}

/// Minimizes the K objective at one `λ` and returns the best decomposition found.
pub fn k_variational(
    f: &GridFunction,
    d: &DistanceField,
    lambda: f64,
    params: KParams,
    budget: &SolverBudget,
) -> Result<KDecomposition> {
    check_lambda(lambda)?;
    let solver = Solver::new(f, d, params, *budget)?;
    Ok(solver.variational(&[lambda])?.remove(0))
}

/// Decomposition `h = h^{λ'}` with `λ' = min(coupling·λ, 1)`, `g = f - h`;
/// `λ > 1` gives the trivial decomposition `h = 0`.
pub fn k_constructive(
    f: &GridFunction,
    d: &DistanceField,
    lambda: f64,
    params: KParams,
    coupling: f64,
) -> Result<KDecomposition> {
    check_lambda(lambda)?;
    if !(coupling > 0.0 && coupling.is_finite()) {
        return Err(invalid("coupling", format!("must be positive, got {coupling}")));
    }
    let solver = Solver::new(f, d, params, SolverBudget::default())?;
    if lambda > 1.0 {
        return solver.trivial(lambda);
    }
    let approx = Approximator::new(f.domain().clone(), d, (coupling * lambda).min(1.0))?.apply(f)?;
    let mut dec = solver.decomposition(lambda, approx.values.into_values(), KMethod::Constructive, 0, 0.0)?;
    dec.analytic_grad_norm = Some(solver.obj.field_norm(&approx.gradient));
    Ok(dec)
}

/// Log-spaced `λ` grid on `[lambda_min, 1]`; `lambda_min` defaults to the grid spacing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaGrid {
    pub points: usize,
    #[serde(default)]
    pub lambda_min: Option<f64>,
}

impl Default for LambdaGrid {
    fn default() -> Self {
        Self {
            points: 32,
            lambda_min: None,
        }
    }
}

impl LambdaGrid {
    pub fn values(&self, dom: &GridDomain) -> Result<Vec<f64>> {
        let lo = self.lambda_min.unwrap_or(dom.spacing());
        if !(lo > 0.0 && lo < 1.0) {
            return Err(invalid("lambda_min", format!("must lie in (0,1), got {lo}")));
        }
        if self.points < 2 {
            return Err(invalid("points", "a λ grid needs at least 2 points"));
        }
        Ok(log_grid(lo, 1.0, self.points))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KPoint {
    pub lambda: f64,
    pub k: f64,
    pub method: KMethod,
    pub iterations: usize,
    pub objective_gap: f64,
}

#[derive(Debug, Clone)]
pub struct KFunctionalCurve {
    pub points: Vec<KPoint>,
    pub params: KParams,
    /// `‖f‖_X`
    pub f_norm: f64,
    /// `‖f‖_Y`
    pub f_w_norm: f64,
}

impl KFunctionalCurve {
    /// Variational K on `lambdas`. Each decomposition found is feasible at
    /// every `λ`, so the curve reports the lower envelope of all of them.
    pub fn variational(
        f: &GridFunction,
        d: &DistanceField,
        lambdas: &[f64],
        params: KParams,
        budget: &SolverBudget,
    ) -> Result<Self> {
        let solver = Solver::new(f, d, params, *budget)?;
        let decs = solver.variational(lambdas)?;
        let fv = f.values();
        let trivial = solver.obj.parts(fv, &vec![0.0; f.len()]);
        let full = solver.obj.parts(fv, fv);
        let pool: Vec<KParts> = decs.iter().map(|d| d.parts).chain([trivial, full]).collect();
        let points = decs
            .iter()
            .map(|dec| {
                let env = pool
                    .iter()
                    .map(|p| p.value(dec.lambda))
                    .fold(dec.value, f64::min);
                KPoint {
                    lambda: dec.lambda,
                    k: env,
                    method: dec.method,
                    iterations: dec.iterations,
                    objective_gap: dec.objective_gap,
                }
            })
            .collect();
        Ok(Self {
            points,
            params,
            f_norm: trivial.g_norm,
            f_w_norm: full.h_norm + full.grad_norm,
        })
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.lambda).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.k).collect()
    }

    /// Points where `K` drops by more than `tol` relative.
    pub fn monotonicity_violations(&self, tol: f64) -> usize {
        self.points
            .windows(2)
            .filter(|w| w[1].k < w[0].k * (1.0 - tol))
            .count()
    }

    /// Interior points lying more than `tol` (relative) below the chord of their neighbors.
    pub fn concavity_violations(&self, tol: f64) -> usize {
        self.points
            .windows(3)
            .filter(|w| {
                let (a, b, c) = (w[0], w[1], w[2]);
                let chord = ((c.lambda - b.lambda) * a.k + (b.lambda - a.lambda) * c.k) / (c.lambda - a.lambda);
                b.k < chord * (1.0 - tol)
            })
            .count()
    }

    /// Points exceeding `min(‖f‖_X, λ‖f‖_Y)` by more than `tol` relative.
    pub fn bound_violations(&self, tol: f64) -> usize {
        self.points
            .iter()
            .filter(|p| p.k > self.f_norm.min(p.lambda * self.f_w_norm) * (1.0 + tol))
            .count()
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["lambda", "K", "method", "iterations", "objective_gap"])?;
        for p in &self.points {
            w.write_record([
                sci(p.lambda),
                sci(p.k),
                p.method.to_string(),
                p.iterations.to_string(),
                sci(p.objective_gap),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Interpolation norm with its quadrature pieces (all as `p`-th powers).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterpolationNorm {
    pub value: f64,
    /// log-trapezoid over `[λ_min, 1]`
    pub body: f64,
    /// `(0, λ_min)` with `K ≤ λ‖f‖_Y`
    pub head_upper: f64,
    /// `(0, λ_min)` with `K ≥ K(λ_min)·λ/λ_min` (concavity)
    pub head_lower: f64,
    /// `(1, ∞)` where `K = ‖f‖_X`
    pub tail: f64,
}

/// `(∫₀^∞ λ^{-sp} K(λ)^p dλ/λ)^{1/p}` from a curve whose grid ends at `λ = 1`.
pub fn interpolation_norm_from_curve(curve: &KFunctionalCurve, s: f64) -> Result<InterpolationNorm> {
    if !(s > 0.0 && s < 1.0) {
        return Err(invalid("s", format!("must lie in (0,1), got {s}")));
    }
    let lambdas = curve.lambdas();
    let ks = curve.values();
    let (Some(&lo), Some(&hi)) = (lambdas.first(), lambdas.last()) else {
        return Err(invalid("lambdas", "empty λ grid"));
    };
    if hi != 1.0 {
        return Err(invalid("lambdas", "the λ grid must end at 1"));
    }
    let p = curve.params.p;
    let sp = s * p;
    let g: Vec<f64> = lambdas
        .iter()
        .zip(&ks)
        .map(|(l, k)| l.powf(-sp) * k.powf(p))
        .collect();
    let body = log_trapezoid(&lambdas, &g);
    let tail = curve.f_norm.powf(p) / sp;
    let q = (1.0 - s) * p;
    let head_upper = curve.f_w_norm.powf(p) * lo.powf(q) / q;
    let head_lower = (ks[0] / lo).powf(p) * lo.powf(q) / q;
    Ok(InterpolationNorm {
        value: (body + head_upper + tail).powf(1.0 / p),
        body,
        head_upper,
        head_lower,
        tail,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn interpolation_norm(
    f: &GridFunction,
    d: &DistanceField,
    s: f64,
    p: f64,
    alpha: f64,
    grid: &LambdaGrid,
    budget: &SolverBudget,
) -> Result<InterpolationNorm> {
    let lambdas = grid.values(f.domain())?;
    let curve = KFunctionalCurve::variational(f, d, &lambdas, KParams::new(p, alpha)?, budget)?;
    interpolation_norm_from_curve(&curve, s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceRow {
    pub function_id: String,
    pub interp_norm: f64,
    /// `‖f‖_X + restricted seminorm`
    pub tilde_norm: f64,
    /// `‖f‖_X + full δ-weighted seminorm`
    pub delta_norm: f64,
    pub ratio_it: f64,
    pub ratio_id: f64,
    pub ratio_td: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub s: f64,
    pub p: f64,
    pub alpha: f64,
    pub rows: Vec<EquivalenceRow>,
}

fn spread(values: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    hi / lo
}

impl EquivalenceReport {
    pub fn spread_it(&self) -> f64 {
        spread(self.rows.iter().map(|r| r.ratio_it))
    }

    pub fn spread_id(&self) -> f64 {
        spread(self.rows.iter().map(|r| r.ratio_id))
    }

    pub fn spread_td(&self) -> f64 {
        spread(self.rows.iter().map(|r| r.ratio_td))
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record([
            "function_id",
            "interp_norm",
            "tilde_norm",
            "delta_norm",
            "ratio_it",
            "ratio_id",
            "ratio_td",
        ])?;
        for r in &self.rows {
            w.write_record([
                r.function_id.clone(),
                sci(r.interp_norm),
                sci(r.tilde_norm),
                sci(r.delta_norm),
                sci(r.ratio_it),
                sci(r.ratio_id),
                sci(r.ratio_td),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// One row of the equivalence table from a precomputed K curve.
pub fn equivalence_row(
    id: &str,
    f: &GridFunction,
    d: &DistanceField,
    curve: &KFunctionalCurve,
    s: f64,
) -> Result<EquivalenceRow> {
    let KParams { p, alpha } = curve.params;
    let params = FracParams::matched(s, p, alpha)?;
    let lp = weighted_lp_norm(f, d, alpha * p, p);
    let interp = interpolation_norm_from_curve(curve, s)?.value;
    let tilde = lp + tilde_seminorm(f, d, &params)?;
    let delta = lp + delta_seminorm(f, d, s, p, params.beta)?;
    Ok(EquivalenceRow {
        function_id: id.to_string(),
        interp_norm: interp,
        tilde_norm: tilde,
        delta_norm: delta,
        ratio_it: interp / tilde,
        ratio_id: interp / delta,
        ratio_td: tilde / delta,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn equivalence_report(
    dom: &Arc<GridDomain>,
    d: &DistanceField,
    functions: &[(String, GridFunction)],
    s: f64,
    p: f64,
    alpha: f64,
    grid: &LambdaGrid,
    budget: &SolverBudget,
) -> Result<EquivalenceReport> {
    check_len(dom.len(), d.len())?;
    let params = KParams::new(p, alpha)?;
    let lambdas = grid.values(dom)?;
    let rows = functions
        .iter()
        .map(|(id, f)| {
            let curve = KFunctionalCurve::variational(f, d, &lambdas, params, budget)?;
            equivalence_row(id, f, d, &curve, s)
        })
        .collect::<Result<_>>()?;
    Ok(EquivalenceReport { s, p, alpha, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{build_domain, distance_to_boundary, DomainSpec};

    fn setup(n: usize) -> (Arc<GridDomain>, DistanceField) {
        let dom = Arc::new(build_domain(&DomainSpec::UnitSquare, n).unwrap());
        let d = distance_to_boundary(&dom);
        (dom, d)
    }

    #[test]
    fn zero_function_has_zero_k() {
        let (dom, d) = setup(16);
        let f = GridFunction::constant(dom, 0.0).unwrap();
        let k = k_variational(&f, &d, 0.3, KParams::new(2.0, 0.0).unwrap(), &SolverBudget::default()).unwrap();
        assert_eq!(k.value, 0.0);
        assert!(k.g.max_abs() == 0.0 && k.h.max_abs() == 0.0);
    }

    #[test]
    fn beats_the_scaled_family_scan() {
        let (dom, d) = setup(32);
        let f = GridFunction::from_fn(dom, |p| p[0]).unwrap();
        let params = KParams::new(2.0, 0.0).unwrap();
        let k = k_variational(&f, &d, 0.1, params, &SolverBudget::default()).unwrap();
        let obj = Objective::new(&f, &d, params).unwrap();
        let family = (0..=100)
            .map(|i| {
                let h: Vec<f64> = f.values().iter().map(|v| v * i as f64 / 100.0).collect();
                obj.parts(f.values(), &h).value(0.1)
            })
            .fold(f64::INFINITY, f64::min);
        assert!(k.value <= family * 1.01, "{} vs {family}", k.value);
        let fnorm = weighted_lp_norm(&f, &d, 0.0, 2.0);
        assert!(k.value <= fnorm);
        for (a, (g, h)) in f.values().iter().zip(k.g.values().iter().zip(k.h.values())) {
            assert_eq!(*a, g + h);
        }
    }

    #[test]
    fn subgradient_solver_improves_on_trivial_decompositions() {
        let (dom, d) = setup(16);
        let f = GridFunction::from_fn(dom, |p| (3.0 * p[0]).sin() + p[1]).unwrap();
        let params = KParams::new(1.5, 0.5).unwrap();
        let budget = SolverBudget {
            max_iter: 2000,
            ..Default::default()
        };
        let k = k_variational(&f, &d, 0.2, params, &budget).unwrap();
        let obj = Objective::new(&f, &d, params).unwrap();
        let zero = obj.parts(f.values(), &vec![0.0; f.len()]).value(0.2);
        let full = obj.parts(f.values(), f.values()).value(0.2);
        assert!(k.value <= zero.min(full));
        assert!(k.iterations > 0);
    }

    #[test]
    fn constructive_reproduces_constants() {
        let (dom, d) = setup(16);
        let f = GridFunction::constant(dom, 2.0).unwrap();
        let params = KParams::new(2.0, 0.0).unwrap();
        let k = k_constructive(&f, &d, 0.5, params, 1.0).unwrap();
        assert!(k.parts.g_norm < 1e-12);
        let c_norm = weighted_lp_norm(&f, &d, 0.0, 2.0);
        assert!((k.value - 0.5 * c_norm).abs() < 1e-9 * c_norm);
        let t = k_constructive(&f, &d, 2.0, params, 1.0).unwrap();
        assert_eq!(t.method, KMethod::TrivialTail);
        assert_eq!(t.value, c_norm);
    }

    #[test]
    fn curve_is_monotone_concave_and_bounded() {
        let (dom, d) = setup(16);
        let f = GridFunction::from_fn(dom.clone(), |p| (std::f64::consts::PI * p[0]).sin() * p[1]).unwrap();
        let lambdas = LambdaGrid::default().values(&dom).unwrap();
        let curve = KFunctionalCurve::variational(&f, &d, &lambdas, KParams::new(2.0, 0.5).unwrap(), &SolverBudget::default()).unwrap();
        assert_eq!(curve.monotonicity_violations(0.0), 0);
        assert_eq!(curve.concavity_violations(1e-12), 0);
        assert_eq!(curve.bound_violations(1e-12), 0);
        assert_eq!(curve.points.last().unwrap().method, KMethod::TrivialTail);
        let norm = interpolation_norm_from_curve(&curve, 0.5).unwrap();
        assert!(norm.head_lower <= norm.head_upper);
        assert!(norm.value > 0.0);
    }
}
