//! `--self-test`: a quick invariant suite per subcommand. Prints one line
//! per check and fails with exit code 3 if any check fails.


use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use cuspweyl::analysis::TestFunctionPsi;
use cuspweyl::cusp::{c1_lattice, cusp_term as eval_cusp_term, sine_log_constant, Lattice};
use cuspweyl::parametrix::{u_k_radial, RadialCurvatureProfile};
use cuspweyl::scattering::{
    lorentzian_by_quadrature, lorentzian_strip_integral, log_grid, modular_gate, phase_derivative, phi_eval,
    random_model, scattering_phase, scattering_phase_by_argument, weyl_fit as fit_plain,
};
use cuspweyl::zerocount::{check_product, suite_product, SuiteGeometry};

use crate::commands::{
    synthetic_coefficients, CountZerosArgs, CuspTermArgs, GeneralCountArgs, LatticeConstArgs, ModelSurfaceArgs,
    ParametrixArgs, PhaseArgs, WeylFitArgs,
};
use crate::output::Sink;
use crate::{CliError, Global};

#[derive(Debug, Serialize)]
struct Check {
    check: String,
    value: f64,
    tolerance: f64,
    passes: bool,
}

fn check(name: &str, value: f64, tolerance: f64) -> Check {
    Check { check: name.into(), value, tolerance, passes: value.abs() <= tolerance }
}

fn report(sink: &mut Sink, module: &str, checks: Vec<Check>) -> Result<(), CliError> {
    sink.table(&format!("self-test of the {module} module: |value| <= tolerance"), &checks)?;
    let failures = checks.iter().filter(|c| !c.passes).count();
    if failures > 0 {
        Err(CliError::SelfTest(failures))
    } else {
        Ok(())
    }
}

pub fn count_zeros(_a: &CountZerosArgs, g: &Global, sink: &mut Sink) -> Result<(), CliError> {
    let geometry = SuiteGeometry::default();
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let mut checks = Vec::new();
    for case in 0..2 {
        let p = suite_product(&mut rng, &geometry, 4);
        for r in check_product(&p, &geometry, case, 1e-6)? {
            let tol = 1e-6f64.max(1e-6 * r.direct.abs());
            checks.push(check(&format!("case {case} {}", r.lemma), r.difference, tol));
        }
    }
    report(sink, "zerocount", checks)
}

pub fn cusp_term(_a: &CuspTermArgs, _g: &Global, sink: &mut Sink) -> Result<(), CliError> {
    let l = Lattice::integer(1);
    let mut res = Vec::new();
    for t in [50.0, 100.0] {
        res.push(eval_cusp_term(&TestFunctionPsi::new(t, 1.0 / t.ln())?, &l, 1)?.residual);
    }
    let checks = vec![
        check("residual(50) bounded", res[0], 1.0),
        check("residual(100) bounded", res[1], 1.0),
        check("1 - gamma constant", sine_log_constant() - (1.0 - cuspweyl::analysis::EULER_GAMMA), 1e-9),
    ];
    report(sink, "cusp", checks)
}

pub fn lattice_const(_a: &LatticeConstArgs, _g: &Global, sink: &mut Sink) -> Result<(), CliError> {
    let (c1, _) = c1_lattice(&Lattice::integer(1))?;
    let checks = vec![check("C1(Z) = 1 - log 2", c1 - (1.0 - 2f64.ln()), 1e-8)];
    report(sink, "cusp lattice", checks)
}

pub fn parametrix(_a: &ParametrixArgs, _g: &Global, sink: &mut Sink) -> Result<(), CliError> {
    let mut checks = Vec::new();
    for d in 1..=3 {
        let table = u_k_radial(&RadialCurvatureProfile::constant(-1.0, 5.0)?, d, 3)?;
        let u0 = table.values[0].iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
        checks.push(check(&format!("d = {d}: sup |u_0 - 1|"), u0, 1e-8));
        for k in 1..=3 {
            let uk = table.values[k].iter().map(|v| v.abs()).fold(0.0, f64::max);
            checks.push(check(&format!("d = {d}: sup |u_{k}|"), uk, 1e-6));
        }
    }
    report(sink, "parametrix", checks)
}

pub fn phase(_a: &PhaseArgs, g: &Global, sink: &mut Sink) -> Result<(), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let mut checks = Vec::new();
    for d in 1..=3 {
        let m = random_model(&mut rng, d, 30, 0.5, 30.0, &[0.2])?;
        let h = d as f64 / 2.0;
        let mut unit = 0.0f64;
        let mut functional = 0.0f64;
        let mut sign = f64::NEG_INFINITY;
        for i in 0..50 {
            let t = 0.6 * i as f64 + 0.01;
            unit = unit.max((phi_eval(&m, Complex64::new(h, t))?.norm() - 1.0).abs());
            let s = Complex64::new(h + rng.gen_range(-2.0..2.0), rng.gen_range(-30.0..30.0));
            if let (Ok(a), Ok(b)) = (phi_eval(&m, s), phi_eval(&m, d as f64 - s)) {
                functional = functional.max((a * b - 1.0).norm());
            }
            sign = sign.max(phase_derivative(&m, t)?.resonance_sum);
        }
        checks.push(check(&format!("d = {d}: axis unitarity"), unit, 1e-10));
        checks.push(check(&format!("d = {d}: functional equation"), functional, 1e-10));
        checks.push(check(&format!("d = {d}: resonance sum <= 0"), sign.max(0.0), 0.0));
        let tracked = scattering_phase_by_argument(&m, 30.0, 0.05)? - scattering_phase(&m, 30.0)?;
        checks.push(check(&format!("d = {d}: phase vs argument tracking"), tracked, 1e-6));
    }
    report(sink, "scattering phase", checks)
}

pub fn weyl_fit(_a: &WeylFitArgs, _g: &Global, sink: &mut Sink) -> Result<(), CliError> {
    let (a, b, c) = synthetic_coefficients();
    let s: Vec<(f64, f64)> =
        log_grid(10.0, 1e4, 50).into_iter().map(|t| (t, a * t * t + b * t * t.ln() + c * t)).collect();
    let f = fit_plain(&s, 1)?;
    let checks = vec![
        check("exact data: a", (f.a - a) / a, 1e-10),
        check("exact data: b", (f.b - b) / b, 1e-10),
        check("exact data: c", (f.c - c) / c, 1e-10),
    ];
    report(sink, "weyl fit", checks)
}

pub fn model_surface(_a: &ModelSurfaceArgs, _g: &Global, sink: &mut Sink) -> Result<(), CliError> {
    let axis: Vec<f64> = (0..60).map(|i| 0.1 + 1.7 * i as f64).collect();
    let pts: Vec<Complex64> = (0..30).map(|i| Complex64::new(0.6 + 0.03 * i as f64, 0.2 + 3.1 * i as f64)).collect();
    let (u, f) = modular_gate(&axis, &pts)?;
    report(sink, "modular backend", vec![check("axis unitarity", u, 1e-9), check("functional equation", f, 1e-9)])
}

pub fn general_count(_a: &GeneralCountArgs, g: &Global, sink: &mut Sink) -> Result<(), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let mut worst = 0.0f64;
    let mut n = 0;
    while n < 50 {
        let d = rng.gen_range(1..=3);
        let h = d as f64 / 2.0;
        let rho = Complex64::new(h - rng.gen_range(0.01..2.0), rng.gen_range(-20.0..20.0));
        let t = rng.gen_range(0.5..20.0);
        if ((rho - h).norm() - t).abs() < 1e-3 {
            continue;
        }
        worst = worst.max((lorentzian_strip_integral(rho, d, t)? - lorentzian_by_quadrature(rho, d, t)?).abs());
        n += 1;
    }
    report(sink, "resonance counting", vec![check("Lorentzian closed form vs quadrature", worst, 1e-8)])
}
