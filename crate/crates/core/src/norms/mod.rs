//! Weighted Lebesgue, Sobolev and fractional (semi)norms on grid functions.
//!
//! All integrals use the node rule with weight `h²` per interior node; double
//! integrals use `h⁴` per ordered pair of distinct nodes.

mod fractional;
mod gradient;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::domain::{sci, DistanceField, GridDomain, Point};
use crate::error::{invalid, Error, Result};
pub use fractional::{
    delta_seminorm, off_region_term, off_region_weights, restricted_delta_seminorm,
    restricted_weight_bracket, tilde_seminorm, weighted_power_sum, WeightBracket,
};
pub use gradient::GradientOperator;

/// Scalar samples on the interior nodes of a domain.
#[derive(Debug, Clone)]
pub struct GridFunction {
    domain: Arc<GridDomain>,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(domain: Arc<GridDomain>, values: Vec<f64>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::DomainMismatch {
                expected: domain.len(),
                got: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { domain, values })
    }

    /// Samples `f(point)` at every interior node.
    pub fn from_fn(domain: Arc<GridDomain>, f: impl Fn(Point) -> f64) -> Result<Self> {
        let values = (0..domain.len()).map(|k| f(domain.node(k))).collect();
        Self::new(domain, values)
    }

    pub fn constant(domain: Arc<GridDomain>, c: f64) -> Result<Self> {
        let n = domain.len();
        Self::new(domain, vec![c; n])
    }

    pub fn domain(&self) -> &Arc<GridDomain> {
        &self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scaled(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            domain: self.domain.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Node-wise `self + other`; both must live on the same domain.
    pub fn add(&self, other: &GridFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &GridFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &GridFunction, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::DomainMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self {
            domain: self.domain.clone(),
            values,
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Exponents `(s, p, α, β, τ)` of the fractional norms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FracParams {
    pub s: f64,
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    pub tau: f64,
}

impl FracParams {
    pub fn new(s: f64, p: f64, alpha: f64, beta: f64, tau: f64) -> Result<Self> {
        let params = Self {
            s,
            p,
            alpha,
            beta,
            tau,
        };
        params.validate()?;
        Ok(params)
    }

    /// The pairing of the main equivalence: `β = (α+s)p`, `τ = 1/2`.
    pub fn matched(s: f64, p: f64, alpha: f64) -> Result<Self> {
        Self::new(s, p, alpha, (alpha + s) * p, 0.5)
    }

    pub fn with_tau(self, tau: f64) -> Result<Self> {
        Self::new(self.s, self.p, self.alpha, self.beta, tau)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s > 0.0 && self.s < 1.0) {
            return Err(invalid("s", format!("must lie in (0,1), got {}", self.s)));
        }
        if !(self.p >= 1.0 && self.p.is_finite()) {
            return Err(invalid("p", format!("must lie in [1,∞), got {}", self.p)));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(invalid("alpha", format!("must be ≥ 0, got {}", self.alpha)));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(invalid("beta", format!("must be ≥ 0, got {}", self.beta)));
        }
        if !(self.tau > 0.0 && self.tau < 1.0) {
            return Err(invalid("tau", format!("must lie in (0,1), got {}", self.tau)));
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn abs_pow(v: f64, p: f64) -> f64 {
    if p == 2.0 {
        v * v
    } else if p == 1.0 {
        v.abs()
    } else {
        v.abs().powf(p)
    }
}

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DomainMismatch { expected, got });
    }
    Ok(())
}

/// `(Σ |v|^p d^γ h²)^{1/p}` over interior nodes.
pub fn weighted_lp_norm(f: &GridFunction, d: &DistanceField, gamma: f64, p: f64) -> f64 {
    lp_of_values(f.values(), d, f.domain().cell_area(), gamma, p)
}

pub(crate) fn lp_of_values(v: &[f64], d: &DistanceField, area: f64, gamma: f64, p: f64) -> f64 {
    debug_assert_eq!(v.len(), d.len());
    let terms: Vec<f64> = if gamma == 0.0 {
        v.iter().map(|&x| abs_pow(x, p)).collect()
    } else {
        v.iter()
            .zip(d.values())
            .map(|(&x, &dk)| abs_pow(x, p) * dk.powf(gamma))
            .collect()
    };
    (crate::quadrature::pairwise_sum(&terms) * area).powf(1.0 / p)
}

/// Weighted norm of the Euclidean magnitude of a vector field.
pub(crate) fn lp_of_vectors(
    v: &[[f64; 2]],
    d: &DistanceField,
    area: f64,
    gamma: f64,
    p: f64,
) -> f64 {
    let mags: Vec<f64> = v.iter().map(|g| g[0].hypot(g[1])).collect();
    lp_of_values(&mags, d, area, gamma, p)
}

/// Nodal gradient (see [`GradientOperator`] for the stencil rules).
pub fn gradient(f: &GridFunction) -> Vec<[f64; 2]> {
    GradientOperator::new(f.domain()).apply(f.values())
}

/// `‖f‖_{L^p(d^{γ₀})} + ‖∇f‖_{L^p(d^{γ₁})}`.
pub fn w1p_weighted_norm(
    f: &GridFunction,
    d: &DistanceField,
    gamma0: f64,
    gamma1: f64,
    p: f64,
) -> f64 {
    let area = f.domain().cell_area();
    weighted_lp_norm(f, d, gamma0, p) + lp_of_vectors(&gradient(f), d, area, gamma1, p)
}

/// Limit diagnostic `(1-s) |f|^p / ‖∇f‖_{L^p}^p` for the restricted seminorm
/// with weight exponent `beta` and `τ = 1/2`.
pub fn bbm_ratio(f: &GridFunction, d: &DistanceField, s: f64, p: f64, beta: f64) -> Result<f64> {
    let grad = lp_of_vectors(&gradient(f), d, f.domain().cell_area(), 0.0, p);
    if grad == 0.0 {
        return Err(Error::ZeroGradient);
    }
    let params = FracParams::new(s, p, 0.0, beta, 0.5)?;
    let semi = tilde_seminorm(f, d, &params)?;
    Ok((1.0 - s) * semi.powf(p) / grad.powf(p))
}

/// All norms of one function for one parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormReport {
    /// `‖f‖_{L^p(d^{αp})}`
    pub lp: f64,
    /// `‖f‖_{W^{1,p}(d^{αp}, d^{(α+1)p})}`
    pub w1p: f64,
    pub tilde_seminorm: f64,
    pub delta_seminorm: f64,
    pub params: FracParams,
}

impl NormReport {
    pub fn compute(f: &GridFunction, d: &DistanceField, params: &FracParams) -> Result<Self> {
        params.validate()?;
        let (a, p) = (params.alpha, params.p);
        Ok(Self {
            lp: weighted_lp_norm(f, d, a * p, p),
            w1p: w1p_weighted_norm(f, d, a * p, (a + 1.0) * p, p),
            tilde_seminorm: tilde_seminorm(f, d, params)?,
            delta_seminorm: delta_seminorm(f, d, params.s, p, params.beta)?,
            params: *params,
        })
    }

    pub const CSV_HEADER: [&'static str; 11] = [
        "domain",
        "resolution",
        "s",
        "p",
        "alpha",
        "beta",
        "tau",
        "lp",
        "w1p",
        "tilde",
        "delta",
    ];

    pub fn csv_row(&self, dom: &GridDomain) -> Vec<String> {
        let q = &self.params;
        vec![
            dom.spec().label(),
            dom.resolution().to_string(),
            sci(q.s),
            sci(q.p),
            sci(q.alpha),
            sci(q.beta),
            sci(q.tau),
            sci(self.lp),
            sci(self.w1p),
            sci(self.tilde_seminorm),
            sci(self.delta_seminorm),
        ]
    }
}
