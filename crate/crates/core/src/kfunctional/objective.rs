//! The K objective `‖f-h‖_X + λ(‖h‖_X + ‖∇h‖_Y)` on grid functions, with
//! `X = L^p(d^{αp})` and `Y = L^p(d^{(α+1)p})`.

use crate::domain::DistanceField;
use crate::error::{invalid, Result};
use crate::norms::{abs_pow, check_len, GradientOperator, GridFunction};
use crate::quadrature::pairwise_sum;

/// Exponents shared by every K evaluation of one curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KParams {
    pub p: f64,
    pub alpha: f64,
}

impl KParams {
    pub fn new(p: f64, alpha: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(invalid("p", format!("must lie in [1,∞), got {p}")));
        }
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(invalid("alpha", format!("must be nonnegative, got {alpha}")));
        }
        Ok(Self { p, alpha })
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Objective {
    pub(crate) p: f64,
    /// `h² d^{αp}` per node
    pub(crate) mass: Vec<f64>,
    /// `h² d^{(α+1)p}` per node
    pub(crate) grad_weight: Vec<f64>,
    pub(crate) grad: GradientOperator,
}

/// `‖g‖_X`, `‖h‖_X`, `‖∇h‖_Y` of one decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KParts {
    pub g_norm: f64,
    pub h_norm: f64,
    pub grad_norm: f64,
}

impl KParts {
    pub fn value(&self, lambda: f64) -> f64 {
        self.g_norm + lambda * (self.h_norm + self.grad_norm)
    }
}

impl Objective {
    pub(crate) fn new(f: &GridFunction, d: &DistanceField, params: KParams) -> Result<Self> {
        check_len(f.len(), d.len())?;
        let dom = f.domain();
        let area = dom.cell_area();
        let (p, a) = (params.p, params.alpha);
        Ok(Self {
            p,
            mass: d.values().iter().map(|&x| area * x.powf(a * p)).collect(),
            grad_weight: d.values().iter().map(|&x| area * x.powf((a + 1.0) * p)).collect(),
            grad: GradientOperator::new(dom),
        })
    }

    pub(crate) fn norm(&self, v: &[f64]) -> f64 {
        let terms: Vec<f64> = v
            .iter()
            .zip(&self.mass)
            .map(|(x, w)| abs_pow(*x, self.p) * w)
            .collect();
        pairwise_sum(&terms).powf(1.0 / self.p)
    }

    pub(crate) fn field_norm(&self, g: &[[f64; 2]]) -> f64 {
        let terms: Vec<f64> = g
            .iter()
            .zip(&self.grad_weight)
            .map(|(v, w)| abs_pow(v[0].hypot(v[1]), self.p) * w)
            .collect();
        pairwise_sum(&terms).powf(1.0 / self.p)
    }

    pub(crate) fn grad_norm(&self, h: &[f64]) -> f64 {
        self.field_norm(&self.grad.apply(h))
    }

    pub(crate) fn parts(&self, f: &[f64], h: &[f64]) -> KParts {
        let g: Vec<f64> = f.iter().zip(h).map(|(a, b)| a - b).collect();
        KParts {
            g_norm: self.norm(&g),
            h_norm: self.norm(h),
            grad_norm: self.grad_norm(h),
        }
    }

    /// `⟨u, v⟩` in the weight of `X` (meaningful for `p = 2`).
    pub(crate) fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        let terms: Vec<f64> = u
            .iter()
            .zip(v)
            .zip(&self.mass)
            .map(|((a, b), w)| a * b * w)
            .collect();
        pairwise_sum(&terms)
    }
}
