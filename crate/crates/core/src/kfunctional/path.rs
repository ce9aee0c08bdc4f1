//! Exact minimization of the `p = 2` objective along the smoothing path.
//!
//! For `p = 2` every stationary point of
//! `‖f-h‖_M + λ(‖h‖_M + ‖Gh‖_W)` solves
//! `(M(1/A + λ/B) + (λ/C) L) h = M f / A` with `A, B, C` the three norms and
//! `L = Gᵀ W G`. So the minimizer is `c·u_ν` with `u_ν = (M + νL)⁻¹ M f` for
//! some `ν ≥ 0` and `c ≥ 0`. The path `ν ↦ u_ν` does not depend on `λ`: it is
//! solved once on a log grid, and for each `λ` the optimal `c` is explicit, the
//! best `ν` is located on the grid and then polished by successive parabolic
//! interpolation in `ln ν`.

use super::objective::Objective;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSettings {
    pub nu_min: f64,
    pub nu_max: f64,
    pub per_decade: usize,
    pub cg_tol: f64,
    pub cg_max_iter: usize,
    pub polish_steps: usize,
}

impl Default for PathSettings {
    fn default() -> Self {
        Self {
            nu_min: 1e-7,
            nu_max: 1e2,
            per_decade: 6,
            cg_tol: 1e-10,
            cg_max_iter: 20_000,
            polish_steps: 3,
        }
    }
}

#[derive(Debug, Clone)]
struct Entry {
    /// `ln ν`; `None` for the two closed-form endpoints
    log_nu: Option<f64>,
    u: Vec<f64>,
    /// `‖u‖²_M`
    a: f64,
    /// `⟨f, u⟩_M`
    b: f64,
    grad_norm: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct QuadraticPath<'a> {
    obj: &'a Objective,
    f: Vec<f64>,
    q: f64,
    entries: Vec<Entry>,
    settings: PathSettings,
    pub(crate) iterations: usize,
}

/// Best decomposition found for one `λ`.
#[derive(Debug, Clone)]
pub(crate) struct PathSolution {
    pub(crate) h: Vec<f64>,
    pub(crate) iterations: usize,
    /// relative improvement of polishing over the best grid point
    pub(crate) gap: f64,
}

/// `min_{c ≥ 0} sqrt(q - 2cb + c²a) + κc` and its argmin.
fn best_scale(a: f64, b: f64, q: f64, kappa: f64) -> (f64, f64) {
    let eval = |c: f64| (q - 2.0 * c * b + c * c * a).max(0.0).sqrt() + kappa * c;
    if a <= 0.0 {
        return (0.0, eval(0.0));
    }
    let c0 = b / a;
    let m = (q - b * b / a).max(0.0);
    let c = if a > kappa * kappa {
        (c0 - kappa * (m / (a * (a - kappa * kappa))).sqrt()).max(0.0)
    } else {
        0.0
    };
    (c, eval(c))
}

impl<'a> QuadraticPath<'a> {
    pub(crate) fn new(obj: &'a Objective, f: &[f64], settings: PathSettings) -> Self {
        let mut path = Self {
            obj,
            f: f.to_vec(),
            q: obj.inner(f, f),
            entries: Vec::new(),
            settings,
            iterations: 0,
        };
        path.push(None, f.to_vec());
        let total_mass: f64 = obj.mass.iter().sum();
        let mean = obj.mass.iter().zip(f).map(|(w, v)| w * v).sum::<f64>() / total_mass;
        path.push(None, vec![mean; f.len()]);

        let decades = (settings.nu_max / settings.nu_min).log10();
        let n = (decades * settings.per_decade as f64).round() as usize + 1;
        let (lo, hi) = (settings.nu_min.ln(), settings.nu_max.ln());
        let mut warm = f.to_vec();
        for k in 0..n {
            let x = lo + (hi - lo) * k as f64 / (n - 1) as f64;
            let (u, it) = path.solve(x.exp(), &warm);
            path.iterations += it;
            warm.clone_from(&u);
            path.push(Some(x), u);
        }
        path
    }

    fn push(&mut self, log_nu: Option<f64>, u: Vec<f64>) {
        let e = self.entry(log_nu, u);
        self.entries.push(e);
    }

    fn entry(&self, log_nu: Option<f64>, u: Vec<f64>) -> Entry {
        Entry {
            log_nu,
            a: self.obj.inner(&u, &u),
            b: self.obj.inner(&self.f, &u),
            grad_norm: self.obj.grad_norm(&u),
            u,
        }
    }

    fn value(&self, e: &Entry, lambda: f64) -> (f64, f64) {
        best_scale(e.a, e.b, self.q, lambda * (e.a.sqrt() + e.grad_norm))
    }

    /// `(M + νL) u = M f` by Jacobi-preconditioned conjugate gradients.
    fn solve(&self, nu: f64, warm: &[f64]) -> (Vec<f64>, usize) {
        let obj = self.obj;
        let n = self.f.len();
        let scaled: Vec<f64> = obj.grad_weight.iter().map(|w| nu * w).collect();
        let apply = |u: &[f64], out: &mut Vec<f64>| {
            out.clear();
            out.extend(u.iter().zip(&obj.mass).map(|(x, m)| m * x));
            obj.grad.add_weighted_laplacian(&scaled, u, out);
        };
        let lap_diag = obj.grad.weighted_laplacian_diagonal(&scaled);
        let precond: Vec<f64> = obj
            .mass
            .iter()
            .zip(&lap_diag)
            .map(|(m, l)| 1.0 / (m + l))
            .collect();
        let rhs: Vec<f64> = self.f.iter().zip(&obj.mass).map(|(v, m)| m * v).collect();
        let rhs_norm = rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut u = warm.to_vec();
        if rhs_norm == 0.0 {
            return (vec![0.0; n], 0);
        }
        let mut au = Vec::with_capacity(n);
        apply(&u, &mut au);
        let mut r: Vec<f64> = rhs.iter().zip(&au).map(|(b, a)| b - a).collect();
        let mut z: Vec<f64> = r.iter().zip(&precond).map(|(r, p)| r * p).collect();
        let mut dir = z.clone();
        let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let mut ad = Vec::with_capacity(n);
        for it in 0..self.settings.cg_max_iter {
            let rn = r.iter().map(|v| v * v).sum::<f64>().sqrt();
            if rn <= self.settings.cg_tol * rhs_norm {
                return (u, it);
            }
            apply(&dir, &mut ad);
            let step = rz / dir.iter().zip(&ad).map(|(a, b)| a * b).sum::<f64>();
            for k in 0..n {
                u[k] += step * dir[k];
                r[k] -= step * ad[k];
                z[k] = r[k] * precond[k];
            }
            let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
            let beta = rz_new / rz;
            rz = rz_new;
            for k in 0..n {
                dir[k] = z[k] + beta * dir[k];
            }
        }
        (u, self.settings.cg_max_iter)
    }

    pub(crate) fn minimize(&self, lambda: f64) -> PathSolution {
        let mut best = (f64::INFINITY, 0usize, 0.0);
        for (k, e) in self.entries.iter().enumerate() {
            let (c, v) = self.value(e, lambda);
            if v < best.0 {
                best = (v, k, c);
            }
        }
        let grid_best = best.0;
        let mut iterations = 0;
        let mut polished: Option<(f64, Entry, f64)> = None;

        // successive parabolic interpolation in ln ν around the best grid point
        let mut samples: Vec<(f64, f64)> = self
            .entries
            .iter()
            .filter_map(|e| e.log_nu.map(|x| (x, self.value(e, lambda).1)))
            .collect();
        let step = (10f64).ln() / self.settings.per_decade as f64;
        if self.entries[best.1].log_nu.is_some() {
            for _ in 0..self.settings.polish_steps {
                samples.sort_by(|a, b| a.0.total_cmp(&b.0));
                let i = samples
                    .iter()
                    .enumerate()
                    .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
                    .map(|(i, _)| i)
                    .unwrap_or(0);
                if i == 0 || i + 1 >= samples.len() {
                    break;
                }
                let [(x1, y1), (x2, y2), (x3, y3)] = [samples[i - 1], samples[i], samples[i + 1]];
                let num = (x2 - x1).powi(2) * (y2 - y3) - (x2 - x3).powi(2) * (y2 - y1);
                let den = (x2 - x1) * (y2 - y3) - (x2 - x3) * (y2 - y1);
                if den == 0.0 {
                    break;
                }
                let x = x2 - 0.5 * num / den;
                if !(x > x1 && x < x3) || samples.iter().any(|s| (s.0 - x).abs() < 1e-3 * step) {
                    break;
                }
                let warm = match &polished {
                    Some((_, e, _)) => &e.u,
                    None => &self.entries[best.1].u,
                };
                let (u, it) = self.solve(x.exp(), warm);
                iterations += it;
                let e = self.entry(Some(x), u);
                let (c, v) = self.value(&e, lambda);
                samples.push((x, v));
                if v < polished.as_ref().map_or(best.0, |p| p.0) {
                    polished = Some((v, e, c));
                }
            }
        }
        let (value, h) = match polished {
            Some((v, e, c)) if v < best.0 => (v, e.u.iter().map(|x| c * x).collect()),
            _ => (
                best.0,
                self.entries[best.1].u.iter().map(|x| best.2 * x).collect(),
            ),
        };
        PathSolution {
            h,
            iterations,
            gap: if value > 0.0 { (grid_best - value) / value } else { 0.0 },
        }
    }
}
