//! Radial mollifier supported in `B(0, 1/4)` and convolutions of grid functions.
//!
//! Convolutions use a fixed polar rule (Gauss-Legendre in the radius, equally
//! spaced angles) whose weights are normalized to sum to exactly 1, with the
//! grid function read off by masked bilinear interpolation. The rule is
//! symmetric under `w ↦ -w`, so constants and affine functions are reproduced
//! up to rounding.

use std::f64::consts::PI;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::domain::Point;
use crate::error::{invalid, Error, Result};
use crate::norms::GridFunction;
use crate::quadrature::gauss_legendre;

/// Support radius of the unscaled profile.
pub const SUPPORT: f64 = 0.25;

const RADIAL_NODES: usize = 8;
const ANGLES: usize = 16;

fn shape(r2: f64) -> f64 {
    // r2 = |4x|²
    if r2 >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - r2)).exp()
    }
}

struct Cache {
    scale: f64,
    /// unit-support offsets `ρ(cos θ, sin θ)`, `ρ ∈ (0,1)`, with weights summing to 1
    rule: Vec<(Point, f64)>,
}

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| {
        // ∫φ = c · 2π/16 · ∫₀¹ exp(-1/(1-ρ²)) ρ dρ, by 1250 panels × 8 Gauss points
        let (gx, gw) = gauss_legendre(8);
        let panels = 1250;
        let mut radial = Vec::with_capacity(panels * gx.len());
        for k in 0..panels {
            let (a, b) = (k as f64 / panels as f64, (k + 1) as f64 / panels as f64);
            for (x, w) in gx.iter().zip(&gw) {
                let rho = 0.5 * (a + b) + 0.5 * (b - a) * x;
                radial.push(0.5 * (b - a) * w * shape(rho * rho) * rho);
            }
        }
        let integral = crate::quadrature::pairwise_sum(&radial) * 2.0 * PI / 16.0;

        let (rx, rw) = gauss_legendre(RADIAL_NODES);
        let mut rule = Vec::with_capacity(RADIAL_NODES * ANGLES);
        for (x, w) in rx.iter().zip(&rw) {
            let rho = 0.5 * (1.0 + x);
            let wr = 0.5 * w * shape(rho * rho) * rho;
            for a in 0..ANGLES {
                let th = 2.0 * PI * a as f64 / ANGLES as f64;
                rule.push(([rho * th.cos(), rho * th.sin()], wr));
            }
        }
        let total: f64 = rule.iter().map(|r| r.1).sum();
        for r in &mut rule {
            r.1 /= total;
        }
        Cache {
            scale: 1.0 / integral,
            rule,
        }
    })
}

/// `φ(x) = c·exp(-1/(1-|4x|²))` for `|x| < 1/4`, else 0.
pub fn profile(x: Point) -> f64 {
    cache().scale * shape(16.0 * (x[0] * x[0] + x[1] * x[1]))
}

/// `φ_t(x) = t⁻²φ(x/t)`.
pub fn mollifier_eval(t: f64, x: Point) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(invalid("t", format!("must be positive, got {t}")));
    }
    Ok(profile([x[0] / t, x[1] / t]) / (t * t))
}

/// Value of `f` at an arbitrary point: bilinear on the enclosing grid cell,
/// renormalized over its interior corners, or the nearest interior node
/// within two cells when no corner is interior.
pub fn interpolate(f: &GridFunction, p: Point) -> Option<f64> {
    let dom = f.domain();
    let o = dom.origin();
    let h = dom.spacing();
    let fx = (p[0] - o[0]) / h;
    let fy = (p[1] - o[1]) / h;
    let (i, j) = (fx.floor() as i64, fy.floor() as i64);
    let (ax, ay) = (fx - i as f64, fy - j as f64);
    let u = f.values();
    let (mut acc, mut wsum) = (0.0, 0.0);
    for (di, dj, w) in [
        (0, 0, (1.0 - ax) * (1.0 - ay)),
        (1, 0, ax * (1.0 - ay)),
        (0, 1, (1.0 - ax) * ay),
        (1, 1, ax * ay),
    ] {
        if let Some(k) = dom.interior_at(i + di, j + dj) {
            acc += w * u[k];
            wsum += w;
        }
    }
    if wsum > 1e-12 {
        return Some(acc / wsum);
    }
    let mut best: Option<(f64, usize)> = None;
    for dj in -2..=3 {
        for di in -2..=3 {
            if let Some(k) = dom.interior_at(i + di, j + dj) {
                let q = dom.node(k);
                let r = (q[0] - p[0]).hypot(q[1] - p[1]);
                if best.is_none_or(|b| r < b.0) {
                    best = Some((r, k));
                }
            }
        }
    }
    best.map(|(_, k)| u[k])
}

fn check_support(f: &GridFunction, x: Point, radius: f64) -> Result<()> {
    if f.domain().distance_at(x) > radius {
        Ok(())
    } else {
        Err(Error::SupportEscapesDomain {
            x: x[0],
            y: x[1],
            radius,
        })
    }
}

/// `(f * φ_t)(x)` without the support check.
fn convolve_unchecked(f: &GridFunction, t: f64, x: Point) -> Result<f64> {
    let r = SUPPORT * t;
    let mut acc = 0.0;
    for &(w, wt) in &cache().rule {
        let v = interpolate(f, [x[0] - r * w[0], x[1] - r * w[1]]).ok_or(Error::NonFinite)?;
        acc += wt * v;
    }
    Ok(acc)
}

/// `(f * φ_t)(x)`; the ball `B(x, t/4)` must lie inside `Ω`.
pub fn convolve_at(f: &GridFunction, t: f64, x: Point) -> Result<f64> {
    mollifier_eval(t, [0.0, 0.0])?;
    check_support(f, x, SUPPORT * t)?;
    convolve_unchecked(f, t, x)
}

/// `f * φ_t` at every interior node whose support ball lies inside `Ω`, `None` elsewhere.
pub fn convolve(f: &GridFunction, t: f64) -> Result<Vec<Option<f64>>> {
    mollifier_eval(t, [0.0, 0.0])?;
    let dom = f.domain();
    (0..dom.len())
        .into_par_iter()
        .map(|k| match convolve_at(f, t, dom.node(k)) {
            Ok(v) => Ok(Some(v)),
            Err(Error::SupportEscapesDomain { .. }) => Ok(None),
            Err(e) => Err(e),
        })
        .collect()
}

/// `∫ (f * φ_t)(z) φ_t(z - center) dz`; all points involved stay within `t/2`
/// of `center`, which must therefore be farther than `t/2` from `∂Ω`.
pub fn local_average(f: &GridFunction, center: Point, t: f64) -> Result<f64> {
    mollifier_eval(t, [0.0, 0.0])?;
    check_support(f, center, 2.0 * SUPPORT * t)?;
    let r = SUPPORT * t;
    let mut acc = 0.0;
    for &(w, wt) in &cache().rule {
        let z = [center[0] + r * w[0], center[1] + r * w[1]];
        acc += wt * convolve_unchecked(f, t, z)?;
    }
    Ok(acc)
}
