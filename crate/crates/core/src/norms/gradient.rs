//! Discrete gradient on the interior nodes.
//!
//! Central differences where both axis-neighbors are interior, one-sided
//! differences where only one is, and a zero component where neither is. Every
//! case is written as `(u[plus] - u[minus]) * coef`.

use crate::domain::GridDomain;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Stencil {
    plus: u32,
    minus: u32,
    coef: f64,
}

/// Sparse linear map from nodal values to nodal gradient vectors.
#[derive(Debug, Clone)]
pub struct GradientOperator {
    stencils: Vec<[Stencil; 2]>,
}

impl GradientOperator {
    pub fn new(dom: &GridDomain) -> Self {
        let h = dom.spacing();
        let stencils = (0..dom.len())
            .map(|k| {
                let [i, j] = dom.node_index(k);
                let (i, j) = (i as i64, j as i64);
                let axis = |di: i64, dj: i64| {
                    let fwd = dom.interior_at(i + di, j + dj);
                    let bwd = dom.interior_at(i - di, j - dj);
                    match (fwd, bwd) {
                        (Some(f), Some(b)) => Stencil {
                            plus: f as u32,
                            minus: b as u32,
                            coef: 0.5 / h,
                        },
                        (Some(f), None) => Stencil {
                            plus: f as u32,
                            minus: k as u32,
                            coef: 1.0 / h,
                        },
                        (None, Some(b)) => Stencil {
                            plus: k as u32,
                            minus: b as u32,
                            coef: 1.0 / h,
                        },
                        (None, None) => Stencil {
                            plus: k as u32,
                            minus: k as u32,
                            coef: 0.0,
                        },
                    }
                };
                [axis(1, 0), axis(0, 1)]
            })
            .collect();
        Self { stencils }
    }

    pub fn len(&self) -> usize {
        self.stencils.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stencils.is_empty()
    }

    /// True when node `k` uses a central difference along `axis`.
    pub fn is_central(&self, k: usize, axis: usize) -> bool {
        let s = self.stencils[k][axis];
        s.coef != 0.0 && s.plus as usize != k && s.minus as usize != k
    }

    pub fn apply(&self, u: &[f64]) -> Vec<[f64; 2]> {
        self.stencils
            .iter()
            .map(|st| st.map(|s| (u[s.plus as usize] - u[s.minus as usize]) * s.coef))
            .collect()
    }

    /// `Gᵀ v` for a per-node vector field `v`.
    pub fn apply_transpose(&self, v: &[[f64; 2]]) -> Vec<f64> {
        let mut out = vec![0.0; self.stencils.len()];
        self.add_transpose(v, &mut out);
        out
    }

    fn add_transpose(&self, v: &[[f64; 2]], out: &mut [f64]) {
        for (st, vk) in self.stencils.iter().zip(v) {
            for a in 0..2 {
                let s = st[a];
                let c = s.coef * vk[a];
                out[s.plus as usize] += c;
                out[s.minus as usize] -= c;
            }
        }
    }

    /// `out += Gᵀ diag(w) G u`, with one scalar weight per node shared by both components.
    pub fn add_weighted_laplacian(&self, w: &[f64], u: &[f64], out: &mut [f64]) {
        for (k, st) in self.stencils.iter().enumerate() {
            for s in st {
                if s.coef == 0.0 {
                    continue;
                }
                let g = (u[s.plus as usize] - u[s.minus as usize]) * s.coef * w[k] * s.coef;
                out[s.plus as usize] += g;
                out[s.minus as usize] -= g;
            }
        }
    }

    /// Diagonal of `Gᵀ diag(w) G`.
    pub fn weighted_laplacian_diagonal(&self, w: &[f64]) -> Vec<f64> {
        let mut diag = vec![0.0; self.stencils.len()];
        for (k, st) in self.stencils.iter().enumerate() {
            for s in st {
                if s.coef == 0.0 || s.plus == s.minus {
                    continue;
                }
                let c = s.coef * s.coef * w[k];
                diag[s.plus as usize] += c;
                diag[s.minus as usize] += c;
            }
        }
        diag
    }
}
