//! Diminishing-step subgradient descent for general `p`.

use super::objective::Objective;
use crate::norms::abs_pow;

#[derive(Debug, Clone)]
pub(crate) struct DescentResult {
    pub(crate) h: Vec<f64>,
    pub(crate) iterations: usize,
    /// relative decrease of the best value over the last window
    pub(crate) gap: f64,
}

/// `∂‖v‖` for the weighted `p`-norm, added with factor `scale` into `out`.
fn add_norm_subgradient(obj: &Objective, v: &[f64], scale: f64, out: &mut [f64]) {
    let n = obj.norm(v);
    if n == 0.0 {
        return;
    }
    let p = obj.p;
    let c = scale / n.powf(p - 1.0);
    for ((o, x), w) in out.iter_mut().zip(v).zip(&obj.mass) {
        *o += c * w * abs_pow(*x, p - 1.0) * x.signum();
    }
}

fn add_grad_subgradient(obj: &Objective, h: &[f64], scale: f64, out: &mut [f64]) {
    let g = obj.grad.apply(h);
    let n = obj.field_norm(&g);
    if n == 0.0 {
        return;
    }
    let p = obj.p;
    let c = scale / n.powf(p - 1.0);
    let field: Vec<[f64; 2]> = g
        .iter()
        .zip(&obj.grad_weight)
        .map(|(v, w)| {
            let m = v[0].hypot(v[1]);
            if m == 0.0 {
                [0.0, 0.0]
            } else {
                let k = c * w * m.powf(p - 2.0);
                [k * v[0], k * v[1]]
            }
        })
        .collect();
    for (o, t) in out.iter_mut().zip(obj.grad.apply_transpose(&field)) {
        *o += t;
    }
}

fn objective(obj: &Objective, f: &[f64], h: &[f64], lambda: f64) -> f64 {
    obj.parts(f, h).value(lambda)
}

/// Starts at `h = f`; steps `η₀·‖f‖_∞/√(k+1)` along the mass-preconditioned
/// subgradient normalized in the max norm; keeps the best iterate.
pub(crate) fn descend(
    obj: &Objective,
    f: &[f64],
    lambda: f64,
    max_iter: usize,
    window: usize,
    rel_tol: f64,
) -> DescentResult {
    let n = f.len();
    let scale = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut h = f.to_vec();
    let mut best_h = h.clone();
    let mut best = objective(obj, f, &h, lambda);
    let mut history = vec![best];
    let mut sub = vec![0.0; n];
    let mut iterations = 0;
    let mut gap = 0.0;
    if scale == 0.0 {
        return DescentResult {
            h,
            iterations,
            gap,
        };
    }
    for k in 0..max_iter {
        iterations = k + 1;
        sub.iter_mut().for_each(|s| *s = 0.0);
        let g: Vec<f64> = f.iter().zip(&h).map(|(a, b)| a - b).collect();
        add_norm_subgradient(obj, &g, -1.0, &mut sub);
        add_norm_subgradient(obj, &h, lambda, &mut sub);
        add_grad_subgradient(obj, &h, lambda, &mut sub);
        for (s, m) in sub.iter_mut().zip(&obj.mass) {
            *s /= m;
        }
        let peak = sub.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if peak == 0.0 {
            break;
        }
        let step = 0.1 * scale / ((k + 1) as f64).sqrt() / peak;
        for (x, s) in h.iter_mut().zip(&sub) {
            *x -= step * s;
        }
        let v = objective(obj, f, &h, lambda);
        if v < best {
            best = v;
            best_h.clone_from(&h);
        }
        history.push(best);
        if history.len() > window {
            let old = history[history.len() - 1 - window];
            gap = if best > 0.0 { (old - best) / best } else { 0.0 };
            if gap < rel_tol {
                break;
            }
        }
    }
    DescentResult {
        h: best_h,
        iterations,
        gap,
    }
}
