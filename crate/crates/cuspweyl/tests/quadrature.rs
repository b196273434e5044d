//! Twenty closed-form integrals: polynomial, logarithmic endpoint and
//! inverse-square-root endpoint. Each must land within ten times the
//! requested tolerance.

use std::f64::consts::{LN_2, PI};

use cuspweyl::analysis::{integrate_with, Endpoint, QuadratureSpec};

type Case = (&'static str, fn(f64) -> f64, f64, f64, Endpoint, Endpoint, f64);

fn cases() -> Vec<Case> {
    use Endpoint::{Log, Power, Regular};
    let r = Power(-0.5);
    vec![
        ("x^2", |x| x * x, 0.0, 1.0, Regular, Regular, 1.0 / 3.0),
        ("cubic", |x| x.powi(3) - 2.0 * x + 1.0, -1.0, 2.0, Regular, Regular, 3.75),
        ("x^7", |x| x.powi(7), 0.0, 1.0, Regular, Regular, 0.125),
        ("(1+x)^5", |x| (1.0 + x).powi(5), 0.0, 3.0, Regular, Regular, 4095.0 / 6.0),
        ("x^4", |x| x.powi(4), -2.0, 2.0, Regular, Regular, 12.8),
        ("x^10", |x| x.powi(10), 0.0, 1.0, Regular, Regular, 1.0 / 11.0),
        ("(x^2-1)^2", |x| (x * x - 1.0).powi(2), 0.0, 2.0, Regular, Regular, 46.0 / 15.0),
        ("log x", f64::ln, 0.0, 1.0, Log, Regular, -1.0),
        ("x log x", |x| x * x.ln(), 0.0, 1.0, Log, Regular, -0.25),
        ("log x/(1+x)", |x| x.ln() / (1.0 + x), 0.0, 1.0, Log, Regular, -PI * PI / 12.0),
        ("x^2 log x", |x| x * x * x.ln(), 0.0, 1.0, Log, Regular, -1.0 / 9.0),
        ("log(1-x)", |x| (1.0 - x).ln(), 0.0, 1.0, Regular, Log, -1.0),
        ("log x on [0,2]", f64::ln, 0.0, 2.0, Log, Regular, 2.0 * LN_2 - 2.0),
        ("x^3 log x", |x| x.powi(3) * x.ln(), 0.0, 1.0, Log, Regular, -1.0 / 16.0),
        ("x^-1/2", |x| 1.0 / x.sqrt(), 0.0, 1.0, r, Regular, 2.0),
        ("(1-x)^-1/2", |x| 1.0 / (1.0 - x).sqrt(), 0.0, 1.0, Regular, r, 2.0),
        ("(x(1-x))^-1/2", |x| 1.0 / (x * (1.0 - x)).sqrt(), 0.0, 1.0, r, r, PI),
        ("(1-x^2)^-1/2", |x| 1.0 / (1.0 - x * x).sqrt(), -1.0, 1.0, r, r, PI),
        ("x(1-x)^-1/2", |x| x / (1.0 - x).sqrt(), 0.0, 1.0, Regular, r, 4.0 / 3.0),
        ("x^-1/2 on [0,4]", |x| 1.0 / x.sqrt(), 0.0, 4.0, r, Regular, 4.0),
    ]
}

#[test]
fn closed_form_suite() {
    let spec = QuadratureSpec::default();
    let cases = cases();
    assert_eq!(cases.len(), 20);
    for (name, f, a, b, left, right, exact) in cases {
        let r = integrate_with(f, a, b, left, right, &spec);
        assert!(r.converged, "{name}");
        let tol = spec.abs_tol.max(spec.rel_tol * exact.abs());
        assert!((r.value - exact).abs() <= 10.0 * tol, "{name}: {} vs {exact}", r.value);
    }
}

#[test]
fn tighter_tolerance_is_honoured() {
    let spec = QuadratureSpec::default().with_rel(1e-13);
    for (name, f, a, b, left, right, exact) in cases() {
        let r = integrate_with(f, a, b, left, right, &spec);
        let tol = spec.abs_tol.max(spec.rel_tol * exact.abs());
        assert!((r.value - exact).abs() <= 10.0 * tol, "{name}: {} vs {exact}", r.value);
    }
}
