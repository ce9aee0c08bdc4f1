//! Verification suites. Each returns a data table and a list of assertions.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{ExperimentConfig, Suite};
use super::functions::TestFunction;
use crate::domain::{build_domain, distance_to_boundary, sci, DistanceField, GridDomain};
use crate::error::Result;
use crate::kfunctional::{
    equivalence_row, k_constructive, KFunctionalCurve, KParams, SolverBudget,
};
use crate::norms::{
    bbm_ratio, delta_seminorm, off_region_weights, restricted_weight_bracket, tilde_seminorm,
    weighted_lp_norm, weighted_power_sum, FracParams, GridFunction,
};
use crate::whitney::{expanded_cover, partition_of_unity, refine_lambda, whitney_decompose};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    AtMost,
    Below,
    AtLeast,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::AtMost => "<=",
            Relation::Below => "<",
            Relation::AtLeast => ">=",
        }
    }

    fn holds(self, measured: f64, bound: f64) -> bool {
        match self {
            Relation::AtMost => measured <= bound,
            Relation::Below => measured < bound,
            Relation::AtLeast => measured >= bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assertion {
    pub suite: Suite,
    pub name: String,
    pub measured: f64,
    pub relation: Relation,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Column `name` of every row, parsed as `f64`.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        self.rows.iter().map(|r| r[k].parse().ok()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutput {
    pub suite: Suite,
    pub table: Table,
    pub assertions: Vec<Assertion>,
}

impl SuiteOutput {
    pub fn all_pass(&self) -> bool {
        self.assertions.iter().all(|a| a.pass)
    }

    pub fn assertion(&self, name: &str) -> Option<&Assertion> {
        self.assertions.iter().find(|a| a.name == name)
    }
}

struct Recorder {
    suite: Suite,
    table: Table,
    assertions: Vec<Assertion>,
}

impl Recorder {
    fn new(suite: Suite, header: &[&str]) -> Self {
        Self {
            suite,
            table: Table::new(header),
            assertions: Vec::new(),
        }
    }

    fn check(&mut self, name: impl Into<String>, measured: f64, relation: Relation, bound: f64) {
        self.assertions.push(Assertion {
            suite: self.suite,
            name: name.into(),
            measured,
            relation,
            bound,
            pass: relation.holds(measured, bound),
        });
    }

    fn zero(&mut self, name: impl Into<String>, count: usize) {
        self.check(name, count as f64, Relation::AtMost, 0.0);
    }

    fn finish(self) -> SuiteOutput {
        SuiteOutput {
            suite: self.suite,
            table: self.table,
            assertions: self.assertions,
        }
    }
}

struct Grid {
    dom: Arc<GridDomain>,
    d: DistanceField,
}

fn grid(cfg: &ExperimentConfig, resolution: usize) -> Result<Grid> {
    let dom = Arc::new(build_domain(&cfg.domain.spec, resolution)?);
    let d = distance_to_boundary(&dom);
    Ok(Grid { dom, d })
}

fn sampled(cfg: &ExperimentConfig, g: &Grid) -> Result<Vec<(TestFunction, GridFunction)>> {
    cfg.test_functions()?
        .into_iter()
        .map(|f| {
            let v = f.sample(&g.dom)?;
            Ok((f, v))
        })
        .collect()
}

/// `max(a/b, b/a)`; 1 when both vanish.
fn fold_change(a: f64, b: f64) -> f64 {
    if a == b {
        1.0
    } else {
        (a / b).max(b / a)
    }
}

fn spread(values: &[f64]) -> f64 {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi == lo {
        1.0
    } else {
        hi / lo
    }
}

fn param_label(s: f64, p: f64, alpha: f64) -> String {
    format!("s{s}/p{p}/a{alpha}")
}

/// Worst fold change of `values[key]` between consecutive resolutions.
fn stability<K: Ord + Clone>(
    rec: &mut Recorder,
    resolutions: &[usize],
    values: &BTreeMap<(usize, K), f64>,
    name: impl Fn(&K) -> String,
) {
    for w in resolutions.windows(2) {
        let mut worst: BTreeMap<K, f64> = BTreeMap::new();
        for ((n, key), v) in values {
            if *n != w[0] {
                continue;
            }
            if let Some(u) = values.get(&(w[1], key.clone())) {
                worst.insert(key.clone(), fold_change(*v, *u));
            }
        }
        for (key, change) in worst {
            rec.check(
                format!("n{}-n{}/{}", w[0], w[1], name(&key)),
                change,
                Relation::Below,
                2.0,
            );
        }
    }
}

pub fn run(cfg: &ExperimentConfig, suite: Suite) -> Result<SuiteOutput> {
    match suite {
        Suite::WhitneyProps => whitney_props(cfg),
        Suite::PouProps => pou_props(cfg),
        Suite::Lemma21 => lemma21(cfg),
        Suite::Remark22 => remark22(cfg),
        Suite::Lemma31 => lemma31(cfg),
        Suite::Kfunc => kfunc(cfg),
        Suite::Theorem11 => theorem11(cfg),
        Suite::Bbm => bbm(cfg),
    }
}

/// Counts stored as exact integers, other values in `sci` form.
fn count(n: usize) -> String {
    n.to_string()
}

fn whitney_props(cfg: &ExperimentConfig) -> Result<SuiteOutput> {
    let mut rec = Recorder::new(Suite::WhitneyProps, &["resolution", "lambda", "quantity", "value"]);
    let mut overlaps = Vec::new();
    for n in cfg.resolutions() {
        let g = grid(cfg, n)?;
        let w = whitney_decompose(&g.dom);
        let r = w.check(&g.dom);
        let base = [
            ("cubes", r.cubes),
            ("subgrid_cubes", r.subgrid_cubes),
            ("uncovered_nodes", r.uncovered_nodes),
            ("interior_overlaps", r.interior_overlaps),
            ("size_checked", r.size_checked),
            ("size_violations", r.size_violations),
            ("touching_pairs", r.touching_pairs),
            ("neighbor_violations", r.neighbor_violations),
            ("maximality_violations", r.maximality_violations),
        ];
        for (q, v) in base {
            rec.table.push(vec![count(n), String::new(), q.into(), count(v)]);
        }
        rec.zero(format!("n{n}/uncovered_nodes"), r.uncovered_nodes);
        rec.zero(format!("n{n}/interior_overlaps"), r.interior_overlaps);
        rec.zero(format!("n{n}/size_violations"), r.size_violations);
        rec.zero(format!("n{n}/neighbor_violations"), r.neighbor_violations);
        rec.zero(format!("n{n}/maximality_violations"), r.maximality_violations);

        for &lam in &cfg.refinement_lambdas {
            let refined = refine_lambda(&w, lam)?;
            let bracket = refined.bracket_violations();
            let cells = refined.len();
            let cover = expanded_cover(refined, &g.dom, &g.d)?;
            let (checked, bad) = cover.comparability();
            let overlap = cover.max_overlap();
            overlaps.push(overlap as f64);
            for (q, v) in [
                ("refined_cells", cells),
                ("bracket_violations", bracket),
                ("uncovered_nodes", cover.uncovered_nodes()),
                ("max_overlap", overlap as usize),
                ("comparability_checked", checked),
                ("comparability_violations", bad),
            ] {
                rec.table.push(vec![count(n), sci(lam), q.into(), count(v)]);
            }
            let tag = format!("n{n}/lambda{lam}");
            rec.zero(format!("{tag}/bracket_violations"), bracket);
            rec.zero(format!("{tag}/cover_uncovered_nodes"), cover.uncovered_nodes());
            rec.zero(format!("{tag}/comparability_violations"), bad);
            rec.check(format!("{tag}/max_overlap"), overlap as f64, Relation::AtMost, 12.0);
        }
    }
    if !overlaps.is_empty() {
        rec.check("overlap_spread", spread(&overlaps), Relation::AtMost, 2.0);
    }
    Ok(rec.finish())
}

fn pou_props(cfg: &ExperimentConfig) -> Result<SuiteOutput> {
    let mut rec = Recorder::new(
        Suite::PouProps,
        &["resolution", "lambda", "cells", "sum_defect", "max_scaled_gradient"],
    );
    let mut constants = Vec::new();
    for n in cfg.resolutions() {
        let g = grid(cfg, n)?;
        let w = whitney_decompose(&g.dom);
        let h = g.dom.spacing();
        for &lam in &cfg.pou_lambdas {
            let cover = expanded_cover(refine_lambda(&w, lam)?, &g.dom, &g.d)?;
            let pu = partition_of_unity(&cover, &g.dom)?;
            let defect = pu.sum_defect(&g.dom, |k| g.d.get(k) > 2.0 * h);
            let scan = pu.gradient_scan(&g.dom, cfg.gradient_scan);
            constants.push(scan.max_scaled);
            rec.table.push(vec![
                count(n),
                sci(lam),
                count(pu.len()),
                sci(defect),
                sci(scan.max_scaled),
            ]);
            rec.check(format!("n{n}/lambda{lam}/sum_defect"), defect, Relation::AtMost, 1e-10);
        }
    }
    if !constants.is_empty() {
        rec.check("gradient_constant_spread", spread(&constants), Relation::AtMost, 2.0);
    }
    Ok(rec.finish())
}

fn lemma21(cfg: &ExperimentConfig) -> Result<SuiteOutput> {
    let mut rec = Recorder::new(
        Suite::Lemma21,
        &[
            "resolution",
            "function",
            "s",
            "p",
            "alpha",
            "lp",
            "tilde_norm",
            "delta_norm",
            "delta_over_tilde",
            "off_region_ratio",
        ],
    );
    let resolutions = cfg.resolutions();
    type Key = (u64, u64, u64);
    let key = |s: f64, p: f64, a: f64| -> Key { (s.to_bits(), p.to_bits(), a.to_bits()) };
    let mut c_meas: BTreeMap<(usize, Key), f64> = BTreeMap::new();
    let mut off: BTreeMap<(usize, (Key, String)), f64> = BTreeMap::new();
    let mut labels: BTreeMap<Key, String> = BTreeMap::new();
    for &n in &resolutions {
        let g = grid(cfg, n)?;
        let funcs = sampled(cfg, &g)?;
        for &p in &cfg.p {
            for &s in &cfg.s {
                for &a in &cfg.alpha {
                    let params = FracParams::matched(s, p, a)?;
                    let label = param_label(s, p, a);
                    labels.insert(key(s, p, a), label.clone());
                    let br = restricted_weight_bracket(&g.dom, &g.d, params.tau, params.beta)?;
                    let lower = 2f64.powf(-params.beta);
                    rec.check(format!("n{n}/{label}/weight_ratio_min"), br.min_ratio, Relation::AtLeast, lower);
                    rec.check(format!("n{n}/{label}/weight_ratio_max"), br.max_ratio, Relation::AtMost, 1.0);
                    let off_weights = off_region_weights(&g.dom, &g.d, s, p, a, params.tau)?;
                    let mut ratios = Vec::new();
                    for (tf, f) in &funcs {
                        let lp = weighted_lp_norm(f, &g.d, a * p, p);
                        let tilde = lp + tilde_seminorm(f, &g.d, &params)?;
                        let delta = lp + delta_seminorm(f, &g.d, s, p, params.beta)?;
                        let ratio = delta / tilde;
                        ratios.push(ratio);
                        let off_ratio = if lp > 0.0 {
                            weighted_power_sum(f, &off_weights, p) / lp.powf(p)
                        } else {
                            0.0
                        };
                        off.insert((n, (key(s, p, a), tf.id().to_string())), off_ratio);
                        rec.table.push(vec![
                            count(n),
                            tf.id().to_string(),
                            sci(s),
                            sci(p),
                            sci(a),
                            sci(lp),
                            sci(tilde),
                            sci(delta),
                            sci(ratio),
                            sci(off_ratio),
                        ]);
                    }
                    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
                    let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    rec.check(format!("n{n}/{label}/delta_over_tilde_min"), lo, Relation::AtLeast, 1.0);
                    c_meas.insert((n, key(s, p, a)), hi);
                }
            }
        }
    }
    stability(&mut rec, &resolutions, &c_meas, |k| format!("{}/upper_constant", labels[k]));
    stability(&mut rec, &resolutions, &off, |(k, id)| {
        format!("{}/{id}/off_region_ratio", labels[k])
    });
    Ok(rec.finish())
}

fn remark22(cfg: &ExperimentConfig) -> Result<SuiteOutput> {
    let mut rec = Recorder::new(
        Suite::Remark22,
        &["resolution", "function", "s", "p", "alpha", "tau", "tilde_seminorm", "full_ratio"],
    );
    let resolutions = cfg.resolutions();
    let mut taus = cfg.tau.clone();
    taus.sort_by(f64::total_cmp);
    taus.dedup();
    let mut ratios: BTreeMap<(usize, (String, String, u64)), f64> = BTreeMap::new();
    for &n in &resolutions {
        let g = grid(cfg, n)?;
        let funcs = sampled(cfg, &g)?;
        let mut monotone_violations = 0;
        for &p in &cfg.p {
            for &s in &cfg.s {
                for &a in &cfg.alpha {
                    let label = param_label(s, p, a);
                    for (tf, f) in &funcs {
                        let lp = weighted_lp_norm(f, &g.d, a * p, p);
                        let semis = taus
                            .iter()
                            .map(|&t| tilde_seminorm(f, &g.d, &FracParams::matched(s, p, a)?.with_tau(t)?))
                            .collect::<Result<Vec<f64>>>()?;
                        monotone_violations += semis.windows(2).filter(|w| w[1] < w[0]).count();
                        let reference = lp + semis[0];
                        for (&t, &semi) in taus.iter().zip(&semis) {
                            let r = if reference > 0.0 { (lp + semi) / reference } else { 1.0 };
                            ratios.insert((n, (label.clone(), tf.id().to_string(), t.to_bits())), r);
                            rec.table.push(vec![
                                count(n),
                                tf.id().to_string(),
                                sci(s),
                                sci(p),
                                sci(a),
                                sci(t),
                                sci(semi),
                                sci(r),
                            ]);
                        }
                    }
                }
            }
        }
        rec.zero(format!("n{n}/tau_monotonicity_violations"), monotone_violations);
    }
    // one assertion per resolution pair: the worst over every (params, function, τ)
    for w in resolutions.windows(2) {
        let worst = ratios
            .iter()
            .filter(|((n, _), _)| *n == w[0])
            .filter_map(|((_, k), v)| ratios.get(&(w[1], k.clone())).map(|u| fold_change(*v, *u)))
            .fold(1.0, f64::max);
        rec.check(format!("n{}-n{}/full_ratio_change", w[0], w[1]), worst, Relation::Below, 2.0);
    }
    Ok(rec.finish())
}

/// Draws `w` uniformly from the open disk of radius 1/2.
fn draw_shift(rng: &mut ChaCha8Rng) -> [f64; 2] {
    let r = 0.5 * rng.gen::<f64>().sqrt();
    let th = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
    [r * th.cos(), r * th.sin()]
}

fn lemma31(cfg: &ExperimentConfig) -> Result<SuiteOutput> {
    let mut rec = Recorder::new(
        Suite::Lemma31,
        &["seed", "triple", "function", "w_x", "w_y", "t", "shifted", "plain", "ratio"],
    );
    let n = cfg.resolutions()[0];
    let g = grid(cfg, n)?;
    let funcs = cfg.test_functions()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let area = g.dom.cell_area();
    let bound = 4.0 * 1.05;
    let mut worst: f64 = 0.0;
    let mut violations = 0;
    for triple in 0..cfg.triples {
        let tf = &funcs[rng.gen_range(0..funcs.len())];
        let w = draw_shift(&mut rng);
        let t: f64 = rng.gen();
        let phi = |x: [f64; 2]| tf.eval(&g.dom, x).powi(2);
        let (mut shifted, mut plain) = (0.0, 0.0);
        for k in 0..g.dom.len() {
            let x = g.dom.node(k);
            let r = t * g.d.get(k);
            shifted += phi([x[0] + r * w[0], x[1] + r * w[1]]);
            plain += phi(x);
        }
        shifted *= area;
        plain *= area;
        let ratio = if plain > 0.0 { shifted / plain } else { 1.0 };
        worst = worst.max(ratio);
        if ratio > bound {
            violations += 1;
        }
        rec.table.push(vec![
            cfg.seed.to_string(),
            count(triple),
            tf.id().to_string(),
            sci(w[0]),
            sci(w[1]),
            sci(t),
            sci(shifted),
            sci(plain),
            sci(ratio),
        ]);
    }
    rec.check(format!("n{n}/max_ratio"), worst, Relation::AtMost, bound);
    rec.zero(format!("n{n}/violations"), violations);
    Ok(rec.finish())
}

fn kfunc(cfg: &ExperimentConfig) -> Result<SuiteOutput> {
    let mut rec = Recorder::new(
        Suite::Kfunc,
        &["resolution", "function", "p", "alpha", "lambda", "method", "K", "iterations", "objective_gap"],
    );
    let budget = SolverBudget::default();
    for n in cfg.resolutions() {
        let g = grid(cfg, n)?;
        let funcs = sampled(cfg, &g)?;
        let lambdas = cfg.lambda_grid.values(&g.dom)?;
        let mut constructive: Vec<f64> = cfg.constructive_lambdas.clone();
        constructive.sort_by(f64::total_cmp);
        constructive.dedup();
        for &p in &cfg.p {
            for &a in &cfg.alpha {
                let params = KParams::new(p, a)?;
                let label = format!("n{n}/p{p}/a{a}");
                let (mut mono, mut conc, mut bound) = (0, 0, 0);
                let (mut below, mut worst_ratio) = (0, 0.0f64);
                for (tf, f) in &funcs {
                    let curve = KFunctionalCurve::variational(f, &g.d, &lambdas, params, &budget)?;
                    mono += curve.monotonicity_violations(0.01);
                    conc += curve.concavity_violations(0.01);
                    bound += curve.bound_violations(0.01);
                    let mut emit = |pt: &crate::kfunctional::KPoint| {
                        rec.table.push(vec![
                            count(n),
                            tf.id().to_string(),
                            sci(p),
                            sci(a),
                            sci(pt.lambda),
                            pt.method.to_string(),
                            sci(pt.k),
                            count(pt.iterations),
                            sci(pt.objective_gap),
                        ]);
                    };
                    curve.points.iter().for_each(&mut emit);
                    if constructive.is_empty() {
                        continue;
                    }
                    let reference = KFunctionalCurve::variational(f, &g.d, &constructive, params, &budget)?;
                    for pt in &reference.points {
                        let c = k_constructive(f, &g.d, pt.lambda, params, cfg.coupling)?;
                        emit(&crate::kfunctional::KPoint {
                            lambda: pt.lambda,
                            k: c.value,
                            method: c.method,
                            iterations: c.iterations,
                            objective_gap: c.objective_gap,
                        });
                        if c.value < pt.k {
                            below += 1;
                        }
                        if tf.gradient([0.5, 0.5]).is_some() && pt.k > 0.0 {
                            worst_ratio = worst_ratio.max(c.value / pt.k);
                        }
                    }
                }
                rec.zero(format!("{label}/monotonicity_violations"), mono);
                rec.zero(format!("{label}/concavity_violations"), conc);
                rec.zero(format!("{label}/bound_violations"), bound);
                if !constructive.is_empty() {
                    rec.zero(format!("{label}/constructive_below_variational"), below);
                    rec.check(
                        format!("{label}/smooth_constructive_ratio_max"),
                        worst_ratio,
                        Relation::AtMost,
                        10.0,
                    );
                }
            }
        }
    }
    Ok(rec.finish())
}

fn theorem11(cfg: &ExperimentConfig) -> Result<SuiteOutput> {
    let mut rec = Recorder::new(
        Suite::Theorem11,
        &[
            "resolution",
            "function",
            "s",
            "p",
            "alpha",
            "interp_norm",
            "tilde_norm",
            "delta_norm",
            "ratio_it",
            "ratio_id",
            "ratio_td",
        ],
    );
    let budget = SolverBudget::default();
    let resolutions = cfg.resolutions();
    let mut spreads: BTreeMap<(usize, String), f64> = BTreeMap::new();
    for &n in &resolutions {
        let g = grid(cfg, n)?;
        let funcs = sampled(cfg, &g)?;
        let lambdas = cfg.lambda_grid.values(&g.dom)?;
        for &p in &cfg.p {
            for &a in &cfg.alpha {
                let params = KParams::new(p, a)?;
                let curves = funcs
                    .iter()
                    .map(|(_, f)| KFunctionalCurve::variational(f, &g.d, &lambdas, params, &budget))
                    .collect::<Result<Vec<_>>>()?;
                for &s in &cfg.s {
                    let label = param_label(s, p, a);
                    let mut ratios = Vec::new();
                    for ((tf, f), curve) in funcs.iter().zip(&curves) {
                        let row = equivalence_row(tf.id(), f, &g.d, curve, s)?;
                        ratios.push(row.ratio_it);
                        rec.table.push(vec![
                            count(n),
                            row.function_id.clone(),
                            sci(s),
                            sci(p),
                            sci(a),
                            sci(row.interp_norm),
                            sci(row.tilde_norm),
                            sci(row.delta_norm),
                            sci(row.ratio_it),
                            sci(row.ratio_id),
                            sci(row.ratio_td),
                        ]);
                    }
                    let sp = spread(&ratios);
                    rec.check(format!("n{n}/{label}/spread_interp_over_tilde"), sp, Relation::Below, 25.0);
                    spreads.insert((n, label), sp);
                }
            }
        }
    }
    stability(&mut rec, &resolutions, &spreads, |l| format!("{l}/spread_change"));
    Ok(rec.finish())
}

fn bbm(cfg: &ExperimentConfig) -> Result<SuiteOutput> {
    let mut rec = Recorder::new(Suite::Bbm, &["resolution", "function", "p", "s", "beta", "ratio"]);
    let Some(&s_top) = cfg.bbm_s.iter().max_by(|a, b| a.total_cmp(b)) else {
        return Ok(rec.finish());
    };
    for n in cfg.resolutions() {
        let g = grid(cfg, n)?;
        let funcs = sampled(cfg, &g)?;
        for &p in &cfg.p {
            let mut top = Vec::new();
            for (tf, f) in funcs.iter().filter(|(tf, _)| !tf.is_constant()) {
                for &s in &cfg.bbm_s {
                    let r = bbm_ratio(f, &g.d, s, p, cfg.bbm_beta)?;
                    if s == s_top {
                        top.push(r);
                    }
                    rec.table.push(vec![
                        count(n),
                        tf.id().to_string(),
                        sci(p),
                        sci(s),
                        sci(cfg.bbm_beta),
                        sci(r),
                    ]);
                }
            }
            if !top.is_empty() {
                rec.check(
                    format!("n{n}/p{p}/s{s_top}/ratio_spread"),
                    spread(&top),
                    Relation::AtMost,
                    1.15,
                );
            }
        }
    }
    Ok(rec.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(extra: &str) -> ExperimentConfig {
        let text = format!(
            r#"{{"domain": {{"kind": "unit_square", "resolution": 16}}, "functions": ["linear", "sine"] {extra}}}"#
        );
        ExperimentConfig::from_json(&text).unwrap()
    }

    #[test]
    fn relations() {
        assert!(Relation::AtMost.holds(1.0, 1.0));
        assert!(!Relation::Below.holds(1.0, 1.0));
        assert!(Relation::AtLeast.holds(1.0, 1.0));
        assert!(!Relation::AtLeast.holds(f64::NAN, 1.0));
    }

    #[test]
    fn whitney_suite_passes_on_a_small_square() {
        let out = run(&config(r#", "resolutions": [16, 32]"#), Suite::WhitneyProps).unwrap();
        assert!(out.all_pass(), "{:?}", out.assertions.iter().filter(|a| !a.pass).collect::<Vec<_>>());
        assert!(out.assertion("overlap_spread").is_some());
    }

    #[test]
    fn lemma31_is_seeded() {
        let a = run(&config(r#", "triples": 10"#), Suite::Lemma31).unwrap();
        let b = run(&config(r#", "triples": 10"#), Suite::Lemma31).unwrap();
        let c = run(&config(r#", "triples": 10, "seed": 7"#), Suite::Lemma31).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.table.rows, c.table.rows);
        assert!(a.all_pass());
    }

    #[test]
    fn stability_compares_matching_keys() {
        let mut rec = Recorder::new(Suite::Lemma21, &["x"]);
        let mut v = BTreeMap::new();
        v.insert((16, 1u8), 1.0);
        v.insert((32, 1u8), 3.0);
        v.insert((32, 2u8), 1.0);
        stability(&mut rec, &[16, 32], &v, |k| k.to_string());
        assert_eq!(rec.assertions.len(), 1);
        assert_eq!(rec.assertions[0].measured, 3.0);
        assert!(!rec.assertions[0].pass);
    }
}
