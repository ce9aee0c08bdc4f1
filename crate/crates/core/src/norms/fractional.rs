//! Double sums over node pairs for the fractional seminorms.
//!
//! The singular kernel `|x-y|^{-(2+sp)}` depends only on the integer offset
//! between two nodes, so it is tabulated once per `(s, p)` with the `h⁴` pair
//! weight folded in. Every sum is organised as one row sum per node `x`
//! (sequential, fixed order) followed by a fixed-tree reduction of the rows, so
//! results are bit-identical for any number of threads.

use rayon::prelude::*;

use super::{abs_pow, check_len, FracParams, GridFunction};
use crate::domain::{DistanceField, GridDomain, Point};
use crate::error::{invalid, Result};
use crate::quadrature::pairwise_sum;

struct PairKernel {
    stride: usize,
    table: Vec<f64>,
}

impl PairKernel {
    fn new(dom: &GridDomain, s: f64, p: f64) -> Self {
        let [nx, ny] = dom.cells();
        let h = dom.spacing();
        let stride = ny + 1;
        let exponent = 2.0 + s * p;
        let h4 = h.powi(4);
        let mut table = vec![0.0; (nx + 1) * stride];
        for di in 0..=nx {
            for dj in 0..=ny {
                if di == 0 && dj == 0 {
                    continue;
                }
                let r = h * ((di * di + dj * dj) as f64).sqrt();
                table[di * stride + dj] = h4 / r.powf(exponent);
            }
        }
        Self { stride, table }
    }

    #[inline]
    fn get(&self, di: i64, dj: i64) -> f64 {
        self.table[di.unsigned_abs() as usize * self.stride + dj.unsigned_abs() as usize]
    }
}

#[inline]
fn distance(a: Point, b: Point) -> f64 {
    let (dx, dy) = (a[0] - b[0], a[1] - b[1]);
    (dx * dx + dy * dy).sqrt()
}

fn reduce_rows(n: usize, row: impl Fn(usize) -> f64 + Sync + Send) -> f64 {
    let rows: Vec<f64> = (0..n).into_par_iter().map(row).collect();
    pairwise_sum(&rows)
}

/// Visits every `y ≠ x` with `|x-y| < tau_r` (the restricted region of `x`)
/// as `(y, di, dj)`.
#[inline]
fn for_each_restricted(
    dom: &GridDomain,
    x: usize,
    tau_r: f64,
    mut visit: impl FnMut(usize, i64, i64),
) {
    let [i, j] = dom.node_index(x);
    let (i, j) = (i as i64, j as i64);
    let px = dom.node(x);
    let reach = (tau_r / dom.spacing()).ceil() as i64;
    for dj in -reach..=reach {
        for di in -reach..=reach {
            if di == 0 && dj == 0 {
                continue;
            }
            let Some(y) = dom.interior_at(i + di, j + dj) else {
                continue;
            };
            if distance(px, dom.grid_point(i + di, j + dj)) < tau_r {
                visit(y, di, dj);
            }
        }
    }
}

fn check_inputs(f: &GridFunction, d: &DistanceField) -> Result<()> {
    check_len(f.len(), d.len())
}

fn check_sp(s: f64, p: f64, beta: f64) -> Result<()> {
    FracParams::new(s, p, 0.0, beta, 0.5).map(|_| ())
}

/// Restricted seminorm with weight `d(x)^β` over `0 < |x-y| < τ·d(x)`.
pub fn tilde_seminorm(f: &GridFunction, d: &DistanceField, params: &FracParams) -> Result<f64> {
    params.validate()?;
    check_inputs(f, d)?;
    let dom = f.domain();
    let kernel = PairKernel::new(dom, params.s, params.p);
    let dbeta = d.powf(params.beta);
    let (u, p, tau) = (f.values(), params.p, params.tau);
    let total = reduce_rows(dom.len(), |x| {
        let mut acc = 0.0;
        for_each_restricted(dom, x, tau * d.get(x), |y, di, dj| {
            acc += abs_pow(u[x] - u[y], p) * kernel.get(di, dj);
        });
        acc * dbeta[x]
    });
    Ok(total.powf(1.0 / p))
}

/// Restricted region, but weighted by `δ(x,y)^β` instead of `d(x)^β`.
pub fn restricted_delta_seminorm(
    f: &GridFunction,
    d: &DistanceField,
    params: &FracParams,
) -> Result<f64> {
    params.validate()?;
    check_inputs(f, d)?;
    let dom = f.domain();
    let kernel = PairKernel::new(dom, params.s, params.p);
    let dbeta = d.powf(params.beta);
    let (u, p, tau) = (f.values(), params.p, params.tau);
    let total = reduce_rows(dom.len(), |x| {
        let mut acc = 0.0;
        for_each_restricted(dom, x, tau * d.get(x), |y, di, dj| {
            acc += abs_pow(u[x] - u[y], p) * kernel.get(di, dj) * dbeta[x].min(dbeta[y]);
        });
        acc
    });
    Ok(total.powf(1.0 / p))
}

/// Full seminorm over all ordered pairs of distinct nodes with weight `δ(x,y)^β`.
pub fn delta_seminorm(
    f: &GridFunction,
    d: &DistanceField,
    s: f64,
    p: f64,
    beta: f64,
) -> Result<f64> {
    check_sp(s, p, beta)?;
    check_inputs(f, d)?;
    let dom = f.domain();
    let kernel = PairKernel::new(dom, s, p);
    let dbeta = d.powf(beta);
    let u = f.values();
    let idx = dom.node_indices();
    // the summand is symmetric in (x, y): sum y < x and double
    let total = reduce_rows(dom.len(), |x| {
        let [ix, jx] = idx[x];
        let (ux, bx) = (u[x], dbeta[x]);
        let mut acc = 0.0;
        for (y, &[iy, jy]) in idx[..x].iter().enumerate() {
            let k = kernel.get(ix as i64 - iy as i64, jx as i64 - jy as i64);
            acc += abs_pow(ux - u[y], p) * k * bx.min(dbeta[y]);
        }
        acc
    });
    Ok((2.0 * total).powf(1.0 / p))
}

/// `Σ_{y: |x-y| ≥ τ d(x)} δ(x,y)^{(α+s)p} / |x-y|^{2+sp}` for every node `x`.
pub fn off_region_weights(
    dom: &GridDomain,
    d: &DistanceField,
    s: f64,
    p: f64,
    alpha: f64,
    tau: f64,
) -> Result<Vec<f64>> {
    let params = FracParams::matched(s, p, alpha)?.with_tau(tau)?;
    check_len(dom.len(), d.len())?;
    let kernel = PairKernel::new(dom, s, p);
    let dbeta = d.powf(params.beta);
    let idx = dom.node_indices();
    Ok((0..dom.len())
        .into_par_iter()
        .map(|x| {
            let [ix, jx] = idx[x];
            let px = dom.node(x);
            let tau_r = tau * d.get(x);
            let mut acc = 0.0;
            for (y, &[iy, jy]) in idx.iter().enumerate() {
                if y == x || distance(px, dom.node(y)) < tau_r {
                    continue;
                }
                let k = kernel.get(ix as i64 - iy as i64, jx as i64 - jy as i64);
                acc += k * dbeta[x].min(dbeta[y]);
            }
            acc
        })
        .collect())
}

/// `Σ_x |f(x)|^p` times the [`off_region_weights`]: the part of the full
/// seminorm that the restricted one leaves out, with `|f(y)|` dropped.
pub fn off_region_term(
    f: &GridFunction,
    d: &DistanceField,
    s: f64,
    p: f64,
    alpha: f64,
    tau: f64,
) -> Result<f64> {
    check_inputs(f, d)?;
    let w = off_region_weights(f.domain(), d, s, p, alpha, tau)?;
    Ok(weighted_power_sum(f, &w, p))
}

/// `Σ_x |f(x)|^p w(x)`.
pub fn weighted_power_sum(f: &GridFunction, w: &[f64], p: f64) -> f64 {
    let terms: Vec<f64> = f.values().iter().zip(w).map(|(v, w)| abs_pow(*v, p) * w).collect();
    pairwise_sum(&terms)
}

/// Extremes of `δ(x,y)^β / d(x)^β` over the restricted region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightBracket {
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub pairs: usize,
}

pub fn restricted_weight_bracket(
    dom: &GridDomain,
    d: &DistanceField,
    tau: f64,
    beta: f64,
) -> Result<WeightBracket> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(invalid("tau", format!("must lie in (0,1), got {tau}")));
    }
    check_len(dom.len(), d.len())?;
    let dbeta = d.powf(beta);
    let mut out = WeightBracket {
        min_ratio: f64::INFINITY,
        max_ratio: f64::NEG_INFINITY,
        pairs: 0,
    };
    for x in 0..dom.len() {
        for_each_restricted(dom, x, tau * d.get(x), |y, _, _| {
            let r = dbeta[x].min(dbeta[y]) / dbeta[x];
            out.min_ratio = out.min_ratio.min(r);
            out.max_ratio = out.max_ratio.max(r);
            out.pairs += 1;
        });
    }
    Ok(out)
}
