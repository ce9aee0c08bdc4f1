//! Smooth partition of unity subordinate to the expanded cover.
//!
//! Each cell carries a tensor-product bump `b_j(x) = θ(u₁)θ(u₂)` with
//! `u = (x - x_j) / r_j` and `r_j` the half-width of the expanded cell. The
//! profile `θ` is 1 on `|t| ≤ 8/9` (the cell itself), 0 on `|t| ≥ 1` and a
//! quintic smoothstep in between. `ψ_j = b_j / Σ_k b_k`.

use rayon::prelude::*;

use super::refine::ExpandedCover;
use crate::domain::{GridDomain, Point};
use crate::error::{Error, Result};

const INNER: f64 = 8.0 / 9.0;

/// `θ(t)` and `θ'(t)`.
fn profile(t: f64) -> (f64, f64) {
    let a = t.abs();
    if a <= INNER {
        return (1.0, 0.0);
    }
    if a >= 1.0 {
        return (0.0, 0.0);
    }
    let s = (1.0 - a) / (1.0 - INNER);
    let v = s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
    let dv = 30.0 * s * s * (1.0 - s) * (1.0 - s);
    (v, -dv / (1.0 - INNER) * t.signum())
}

/// One nonzero term of the partition at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PuTerm {
    pub cell: usize,
    pub value: f64,
    pub gradient: [f64; 2],
}

#[derive(Debug, Clone, Copy)]
pub struct PartitionOfUnity<'a> {
    cover: &'a ExpandedCover,
}

/// Wraps the cover after checking that every interior node has denominator ≥ 1.
pub fn partition_of_unity<'a>(
    cover: &'a ExpandedCover,
    dom: &GridDomain,
) -> Result<PartitionOfUnity<'a>> {
    let pu = PartitionOfUnity { cover };
    for k in 0..dom.len() {
        if pu.denominator(dom.node(k)) < 1.0 - 1e-12 {
            return Err(Error::ZeroPartitionDenominator { node: k });
        }
    }
    Ok(pu)
}

/// Result of the finite-difference gradient scan.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientScan {
    /// `max |∇ψ_j| · ℓ_j` per cell; 0 for cells with no admissible sample
    pub per_cell: Vec<f64>,
    pub max_scaled: f64,
}

impl<'a> PartitionOfUnity<'a> {
    pub fn cover(&self) -> &'a ExpandedCover {
        self.cover
    }

    pub fn len(&self) -> usize {
        self.cover.cells().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `b_j(x)` and its gradient.
    pub fn bump(&self, j: usize, x: Point) -> (f64, [f64; 2]) {
        let c = &self.cover.cells()[j];
        let r = c.expanded_half();
        let (v0, d0) = profile((x[0] - c.center[0]) / r);
        let (v1, d1) = profile((x[1] - c.center[1]) / r);
        (v0 * v1, [d0 * v1 / r, v0 * d1 / r])
    }

    pub fn denominator(&self, x: Point) -> f64 {
        self.cover
            .candidates(x)
            .iter()
            .map(|&j| self.bump(j as usize, x).0)
            .sum()
    }

    /// `ψ_j(x)`; 0 where no cell is active.
    pub fn value(&self, j: usize, x: Point) -> f64 {
        let b = self.bump(j, x).0;
        if b == 0.0 {
            return 0.0;
        }
        b / self.denominator(x)
    }

    /// Fills `out` with every cell active at `x` and returns `Σ_k b_k(x)`.
    pub fn terms_at(&self, x: Point, out: &mut Vec<PuTerm>) -> f64 {
        out.clear();
        let (mut sum, mut grad_sum) = (0.0, [0.0, 0.0]);
        for &j in self.cover.candidates(x) {
            let (b, g) = self.bump(j as usize, x);
            if b == 0.0 {
                continue;
            }
            sum += b;
            grad_sum[0] += g[0];
            grad_sum[1] += g[1];
            out.push(PuTerm {
                cell: j as usize,
                value: b,
                gradient: g,
            });
        }
        if sum > 0.0 {
            for t in out.iter_mut() {
                let psi = t.value / sum;
                t.gradient = [
                    (t.gradient[0] - psi * grad_sum[0]) / sum,
                    (t.gradient[1] - psi * grad_sum[1]) / sum,
                ];
                t.value = psi;
            }
        }
        sum
    }

    /// `max |Σ_j ψ_j(x) - 1|` over interior nodes accepted by `keep`.
    pub fn sum_defect(&self, dom: &GridDomain, keep: impl Fn(usize) -> bool) -> f64 {
        let mut terms = Vec::new();
        let mut worst: f64 = 0.0;
        for k in (0..dom.len()).filter(|&k| keep(k)) {
            self.terms_at(dom.node(k), &mut terms);
            let s: f64 = terms.iter().map(|t| t.value).sum();
            worst = worst.max((s - 1.0).abs());
        }
        worst
    }

    /// Central finite differences of `ψ_j` on a `per_axis × per_axis` lattice
    /// of points inside each expanded cell (points outside `Ω` skipped).
    pub fn gradient_scan(&self, dom: &GridDomain, per_axis: usize) -> GradientScan {
        let per_cell: Vec<f64> = (0..self.len())
            .into_par_iter()
            .map(|j| {
                let c = &self.cover.cells()[j];
                let r = c.expanded_half();
                let eps = 1e-4 * c.edge;
                let mut worst: f64 = 0.0;
                for b in 0..per_axis {
                    for a in 0..per_axis {
                        let t = |k: usize| -1.0 + (2 * k + 1) as f64 / per_axis as f64;
                        let p = [c.center[0] + r * t(a), c.center[1] + r * t(b)];
                        if !dom.contains(p) {
                            continue;
                        }
                        let shifted = [
                            [p[0] + eps, p[1]],
                            [p[0] - eps, p[1]],
                            [p[0], p[1] + eps],
                            [p[0], p[1] - eps],
                        ];
                        let den = shifted.map(|q| self.denominator(q));
                        if den.iter().any(|&s| s <= 0.0) {
                            continue;
                        }
                        let v = [0, 1, 2, 3].map(|k| self.bump(j, shifted[k]).0 / den[k]);
                        let gx = (v[0] - v[1]) / (2.0 * eps);
                        let gy = (v[2] - v[3]) / (2.0 * eps);
                        worst = worst.max(gx.hypot(gy) * c.edge);
                    }
                }
                worst
            })
            .collect();
        let max_scaled = per_cell.iter().copied().fold(0.0, f64::max);
        GradientScan {
            per_cell,
            max_scaled,
        }
    }
}
