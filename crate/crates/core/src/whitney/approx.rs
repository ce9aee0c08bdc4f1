//! The smooth approximant `h^λ = Σ_j f_j ψ_j` built from local averages.

use std::sync::Arc;

use rayon::prelude::*;

use super::mollifier::{interpolate, local_average};
use super::pou::{partition_of_unity, PuTerm};
use super::refine::{expanded_cover, refine_lambda, ExpandedCover};
use super::whitney_decompose;
use crate::domain::{DistanceField, GridDomain};
use crate::error::{Error, Result};
use crate::norms::GridFunction;

#[derive(Debug, Clone)]
pub struct SmoothApproximant {
    pub values: GridFunction,
    /// `Σ_j f_j ∇ψ_j` at each interior node
    pub gradient: Vec<[f64; 2]>,
    /// `f_j` per refined cell
    pub cell_averages: Vec<f64>,
    /// subgrid cells whose double-mollifier support leaves `Ω`; their
    /// average is replaced by the interpolated value of `f` at the center
    pub fallback_cells: usize,
}

/// Whitney cover at a fixed λ, reusable across functions on the same domain.
#[derive(Debug, Clone)]
pub struct Approximator {
    dom: Arc<GridDomain>,
    cover: ExpandedCover,
}

impl Approximator {
    pub fn new(dom: Arc<GridDomain>, d: &DistanceField, lambda: f64) -> Result<Self> {
        let w = whitney_decompose(&dom);
        let cover = expanded_cover(refine_lambda(&w, lambda)?, &dom, d)?;
        partition_of_unity(&cover, &dom)?;
        Ok(Self { dom, cover })
    }

    pub fn cover(&self) -> &ExpandedCover {
        &self.cover
    }

    pub fn apply(&self, f: &GridFunction) -> Result<SmoothApproximant> {
        crate::norms::check_len(self.dom.len(), f.len())?;
        let averages: Vec<(f64, bool)> = self
            .cover
            .cells()
            .par_iter()
            .map(|c| match local_average(f, c.center, c.edge) {
                Ok(v) => Ok((v, false)),
                Err(Error::SupportEscapesDomain { .. }) if c.subgrid => interpolate(f, c.center)
                    .map(|v| (v, true))
                    .ok_or(Error::NonFinite),
                Err(e) => Err(e),
            })
            .collect::<Result<_>>()?;
        let fallback_cells = averages.iter().filter(|a| a.1).count();
        let cell_averages: Vec<f64> = averages.into_iter().map(|a| a.0).collect();

        let pu = partition_of_unity(&self.cover, &self.dom)?;
        let (values, gradient): (Vec<f64>, Vec<[f64; 2]>) = (0..self.dom.len())
            .into_par_iter()
            .map_init(Vec::<PuTerm>::new, |terms, k| {
                pu.terms_at(self.dom.node(k), terms);
                let (mut v, mut g) = (0.0, [0.0, 0.0]);
                for t in terms.iter() {
                    let fj = cell_averages[t.cell];
                    v += fj * t.value;
                    g[0] += fj * t.gradient[0];
                    g[1] += fj * t.gradient[1];
                }
                (v, g)
            })
            .unzip();
        Ok(SmoothApproximant {
            values: GridFunction::new(self.dom.clone(), values)?,
            gradient,
            cell_averages,
            fallback_cells,
        })
    }
}

pub fn smooth_approximant(
    f: &GridFunction,
    d: &DistanceField,
    lambda: f64,
) -> Result<SmoothApproximant> {
    Approximator::new(f.domain().clone(), d, lambda)?.apply(f)
}
