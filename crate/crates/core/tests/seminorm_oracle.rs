//! Independent double-loop evaluation of the fractional seminorms, compared
//! against the tabulated-kernel implementation.

use std::sync::Arc;

use fracnorm::domain::{build_domain, distance_to_boundary, DistanceField, DomainSpec, GridDomain};
use fracnorm::norms::{
    delta_seminorm, off_region_term, restricted_delta_seminorm, tilde_seminorm, FracParams,
    GridFunction,
};
use proptest::prelude::*;

fn brute(
    dom: &GridDomain,
    u: &[f64],
    d: &DistanceField,
    s: f64,
    p: f64,
    beta: f64,
    tau: Option<f64>,
    use_delta: bool,
) -> f64 {
    let n = dom.len();
    let mut total = 0.0;
    let h = dom.spacing();
    for x in 0..n {
        let px = dom.node(x);
        for y in 0..n {
            if x == y {
                continue;
            }
            let py = dom.node(y);
            let r = ((px[0] - py[0]).powi(2) + (px[1] - py[1]).powi(2)).sqrt();
            if let Some(t) = tau {
                if !(r < t * d.get(x)) {
                    continue;
                }
            }
            let w = if use_delta {
                d.get(x).min(d.get(y)).powf(beta)
            } else {
                d.get(x).powf(beta)
            };
            total += (u[x] - u[y]).abs().powf(p) / r.powf(2.0 + s * p) * w * h.powi(4);
        }
    }
    total.powf(1.0 / p)
}

fn setup(spec: DomainSpec, n: usize) -> (Arc<GridDomain>, DistanceField) {
    let dom = Arc::new(build_domain(&spec, n).unwrap());
    let d = distance_to_boundary(&dom);
    (dom, d)
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300)
}

#[test]
fn linear_function_matches_brute_force_on_square() {
    let (dom, d) = setup(DomainSpec::UnitSquare, 16);
    let f = GridFunction::from_fn(dom.clone(), |p| p[0]).unwrap();
    let params = FracParams::new(0.5, 2.0, 0.0, 1.0, 0.5).unwrap();
    let fast = tilde_seminorm(&f, &d, &params).unwrap();
    let slow = brute(&dom, f.values(), &d, 0.5, 2.0, 1.0, Some(0.5), false);
    assert!(close(fast, slow), "{fast} vs {slow}");
    let fast = delta_seminorm(&f, &d, 0.5, 2.0, 1.0).unwrap();
    let slow = brute(&dom, f.values(), &d, 0.5, 2.0, 1.0, None, true);
    assert!(close(fast, slow), "{fast} vs {slow}");
}

#[test]
fn several_functions_domains_and_exponents() {
    let funcs: [fn([f64; 2]) -> f64; 3] = [
        |p| p[0] * p[1],
        |p| (3.0 * p[0]).sin() + p[1] * p[1],
        |p| (p[0] - 0.3).abs(),
    ];
    for spec in [DomainSpec::Disk { radius: 1.0 }, DomainSpec::LShape, DomainSpec::PowerCusp { gamma: 2.0 }] {
        let (dom, d) = setup(spec, 12);
        for (fi, g) in funcs.iter().enumerate() {
            let f = GridFunction::from_fn(dom.clone(), g).unwrap();
            for &(s, p, beta, tau) in &[(0.3, 2.0, 0.6, 0.5), (0.7, 1.5, 0.0, 0.75), (0.5, 1.0, 2.0, 0.25)] {
                let params = FracParams::new(s, p, 0.0, beta, tau).unwrap();
                let fast = tilde_seminorm(&f, &d, &params).unwrap();
                let slow = brute(&dom, f.values(), &d, s, p, beta, Some(tau), false);
                assert!(close(fast, slow), "tilde f{fi} {fast} vs {slow}");
                let fast = restricted_delta_seminorm(&f, &d, &params).unwrap();
                let slow = brute(&dom, f.values(), &d, s, p, beta, Some(tau), true);
                assert!(close(fast, slow), "restricted delta f{fi} {fast} vs {slow}");
                let fast = delta_seminorm(&f, &d, s, p, beta).unwrap();
                let slow = brute(&dom, f.values(), &d, s, p, beta, None, true);
                assert!(close(fast, slow), "delta f{fi} {fast} vs {slow}");
            }
        }
    }
}

#[test]
fn off_region_term_matches_brute_force() {
    let (dom, d) = setup(DomainSpec::UnitSquare, 12);
    let f = GridFunction::from_fn(dom.clone(), |p| 1.0 + p[0]).unwrap();
    let (s, p, alpha, tau) = (0.5, 2.0, 0.5, 0.5);
    let beta = (alpha + s) * p;
    let mut slow = 0.0;
    let h4 = dom.spacing().powi(4);
    for x in 0..dom.len() {
        for y in 0..dom.len() {
            let (px, py) = (dom.node(x), dom.node(y));
            let r = ((px[0] - py[0]).powi(2) + (px[1] - py[1]).powi(2)).sqrt();
            if x == y || r < tau * d.get(x) {
                continue;
            }
            slow += f.values()[x].powi(2) * d.get(x).min(d.get(y)).powf(beta) / r.powf(3.0) * h4;
        }
    }
    let fast = off_region_term(&f, &d, s, p, alpha, tau).unwrap();
    assert!(close(fast, slow), "{fast} vs {slow}");
}

#[test]
fn constants_have_zero_seminorms() {
    let (dom, d) = setup(DomainSpec::UnitSquare, 16);
    let c = GridFunction::constant(dom, 2.5).unwrap();
    let params = FracParams::matched(0.5, 2.0, 0.5).unwrap();
    assert_eq!(tilde_seminorm(&c, &d, &params).unwrap(), 0.0);
    assert_eq!(delta_seminorm(&c, &d, 0.5, 2.0, 1.5).unwrap(), 0.0);
}

#[test]
fn restricted_with_delta_weight_is_dominated_by_full() {
    let (dom, d) = setup(DomainSpec::PowerCusp { gamma: 2.0 }, 32);
    let f = GridFunction::from_fn(dom, |p| (4.0 * p[0]).cos() * p[1]).unwrap();
    let params = FracParams::matched(0.5, 2.0, 0.0).unwrap();
    let part = restricted_delta_seminorm(&f, &d, &params).unwrap();
    let full = delta_seminorm(&f, &d, 0.5, 2.0, params.beta).unwrap();
    assert!(part <= full);
}

fn arb_coeffs() -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(-2.0f64..2.0)
}

fn eval(c: &[f64; 4], p: [f64; 2]) -> f64 {
    c[0] * p[0] + c[1] * p[1] * p[1] + c[2] * (3.0 * p[0] * p[1]).sin() + c[3]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn seminorms_are_homogeneous_and_subadditive(
        a in arb_coeffs(), b in arb_coeffs(), scale in -3.0f64..3.0,
        s in 0.1f64..0.9, p in 1.0f64..3.0,
    ) {
        let (dom, d) = setup(DomainSpec::UnitSquare, 12);
        let f = GridFunction::from_fn(dom.clone(), |x| eval(&a, x)).unwrap();
        let g = GridFunction::from_fn(dom.clone(), |x| eval(&b, x)).unwrap();
        let params = FracParams::new(s, p, 0.0, s * p, 0.5).unwrap();
        let t = |u: &GridFunction| tilde_seminorm(u, &d, &params).unwrap();
        let dl = |u: &GridFunction| delta_seminorm(u, &d, s, p, s * p).unwrap();
        let tol = 1e-10;
        prop_assert!((t(&f.scaled(scale)) - scale.abs() * t(&f)).abs() <= tol * (1.0 + t(&f)));
        prop_assert!((dl(&f.scaled(scale)) - scale.abs() * dl(&f)).abs() <= tol * (1.0 + dl(&f)));
        let fg = f.add(&g).unwrap();
        prop_assert!(t(&fg) <= t(&f) + t(&g) + tol);
        prop_assert!(dl(&fg) <= dl(&f) + dl(&g) + tol);
    }

    #[test]
    fn smaller_truncation_gives_smaller_seminorm(a in arb_coeffs(), s in 0.1f64..0.9) {
        let (dom, d) = setup(DomainSpec::Disk { radius: 1.0 }, 16);
        let f = GridFunction::from_fn(dom, |x| eval(&a, x)).unwrap();
        let base = FracParams::matched(s, 2.0, 0.0).unwrap();
        let quarter = tilde_seminorm(&f, &d, &base.with_tau(0.25).unwrap()).unwrap();
        let half = tilde_seminorm(&f, &d, &base).unwrap();
        prop_assert!(quarter <= half);
    }
}
