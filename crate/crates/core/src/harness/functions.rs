//! Closed-form test functions, evaluable at any point of a domain.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::domain::{GridDomain, Point};
use crate::error::{Error, Result};
use crate::norms::GridFunction;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind {
    Const,
    Linear,
    LinearY,
    LinearSum,
    Bilinear,
    Sine,
    DistPow(f64),
    Osc,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    id: String,
    kind: Kind,
}

impl TestFunction {
    fn new(id: &str, kind: Kind) -> Self {
        Self {
            id: id.to_string(),
            kind,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn is_constant(&self) -> bool {
        self.kind == Kind::Const
    }

    /// Value at `p`; distance-based functions use the domain's boundary distance.
    pub fn eval(&self, dom: &GridDomain, p: Point) -> f64 {
        let [x, y] = p;
        match self.kind {
            Kind::Const => 1.0,
            Kind::Linear => x,
            Kind::LinearY => y,
            Kind::LinearSum => x + y,
            Kind::Bilinear => x * y,
            Kind::Sine => (PI * x).sin() * (PI * y).sin(),
            Kind::DistPow(g) => dom.distance_at(p).powf(g),
            Kind::Osc => dom.distance_at(p).sqrt() * (8.0 * x).sin(),
        }
    }

    /// Closed-form gradient where it does not involve the distance function.
    pub fn gradient(&self, p: Point) -> Option<[f64; 2]> {
        let [x, y] = p;
        match self.kind {
            Kind::Const => Some([0.0, 0.0]),
            Kind::Linear => Some([1.0, 0.0]),
            Kind::LinearY => Some([0.0, 1.0]),
            Kind::LinearSum => Some([1.0, 1.0]),
            Kind::Bilinear => Some([y, x]),
            Kind::Sine => Some([
                PI * (PI * x).cos() * (PI * y).sin(),
                PI * (PI * x).sin() * (PI * y).cos(),
            ]),
            Kind::DistPow(_) | Kind::Osc => None,
        }
    }

    pub fn sample(&self, dom: &Arc<GridDomain>) -> Result<GridFunction> {
        let d = dom.clone();
        GridFunction::from_fn(dom.clone(), |p| self.eval(&d, p))
    }
}

/// Every registered function.
pub fn function_library() -> Vec<TestFunction> {
    vec![
        TestFunction::new("const_1", Kind::Const),
        TestFunction::new("linear", Kind::Linear),
        TestFunction::new("linear_y", Kind::LinearY),
        TestFunction::new("linear_sum", Kind::LinearSum),
        TestFunction::new("bilinear", Kind::Bilinear),
        TestFunction::new("sine", Kind::Sine),
        TestFunction::new("dist_pow_0.25", Kind::DistPow(0.25)),
        TestFunction::new("dist_pow_0.5", Kind::DistPow(0.5)),
        TestFunction::new("dist_pow_1", Kind::DistPow(1.0)),
        TestFunction::new("dist_pow_-0.1", Kind::DistPow(-0.1)),
        TestFunction::new("osc", Kind::Osc),
    ]
}

/// The eight non-constant functions used for the equivalence studies.
pub const STANDARD_SET: [&str; 8] = [
    "linear",
    "bilinear",
    "sine",
    "dist_pow_0.25",
    "dist_pow_0.5",
    "dist_pow_1",
    "dist_pow_-0.1",
    "osc",
];

/// Looks up a registered id; `dist_pow_<γ>` is accepted for any finite `γ`.
pub fn lookup(id: &str) -> Result<TestFunction> {
    if let Some(f) = function_library().into_iter().find(|f| f.id == id) {
        return Ok(f);
    }
    if let Some(g) = id.strip_prefix("dist_pow_").and_then(|g| g.parse::<f64>().ok()) {
        if g.is_finite() {
            return Ok(TestFunction::new(id, Kind::DistPow(g)));
        }
    }
    Err(Error::UnknownFunction(id.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{build_domain, DomainSpec};

    #[test]
    fn library_values() {
        let dom = build_domain(&DomainSpec::UnitSquare, 16).unwrap();
        assert_eq!(lookup("const_1").unwrap().eval(&dom, [0.3, 0.2]), 1.0);
        assert_eq!(lookup("dist_pow_1").unwrap().eval(&dom, [0.5, 0.5]), 0.5);
        assert_eq!(lookup("dist_pow_2").unwrap().eval(&dom, [0.5, 0.25]), 0.0625);
        assert!(matches!(lookup("nope"), Err(Error::UnknownFunction(_))));
        for id in STANDARD_SET {
            assert!(!lookup(id).unwrap().is_constant());
        }
    }

    #[test]
    fn finite_on_every_domain() {
        for spec in [
            DomainSpec::UnitSquare,
            DomainSpec::Disk { radius: 1.0 },
            DomainSpec::LShape,
            DomainSpec::PowerCusp { gamma: 2.0 },
        ] {
            let dom = Arc::new(build_domain(&spec, 32).unwrap());
            for f in function_library() {
                assert!(f.sample(&dom).is_ok(), "{} on {}", f.id(), spec.label());
            }
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        let dom = build_domain(&DomainSpec::UnitSquare, 16).unwrap();
        let p = [0.37, 0.61];
        for f in function_library() {
            let Some(g) = f.gradient(p) else { continue };
            let e = 1e-6;
            let gx = (f.eval(&dom, [p[0] + e, p[1]]) - f.eval(&dom, [p[0] - e, p[1]])) / (2.0 * e);
            let gy = (f.eval(&dom, [p[0], p[1] + e]) - f.eval(&dom, [p[0], p[1] - e])) / (2.0 * e);
            assert!((gx - g[0]).abs() < 1e-6 && (gy - g[1]).abs() < 1e-6, "{}", f.id());
        }
    }
}
