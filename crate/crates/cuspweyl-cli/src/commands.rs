//! Subcommand implementations.

use std::f64::consts::PI;
use std::path::PathBuf;

use clap::Args;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use cuspweyl::analysis::TestFunctionPsi;
use cuspweyl::cusp::{c1_lattice, c_d_constant, cusp_term as eval_cusp_term, Lattice};
use cuspweyl::parametrix::{u_k_radial, u_k_radial_with, verify_bound_uk, RadialCurvatureProfile};
use cuspweyl::scattering::{
    general_weyl_count, log_grid, modular_gate, modular_resonances, phase_derivative, random_model,
    remainder_weight, scattering_phase, scattering_phase_by_argument, strip_weighted_sum, weyl_fit as fit_plain,
    weyl_fit_weighted, LeadingTerm, ModularPhi, PhiModel, ResonanceSet, SpectrumData,
};
use cuspweyl::zerocount::{check_product, suite_product, BlaschkeProduct, SuiteGeometry};

use crate::output::Sink;
use crate::{impl_merge, CliError, Global};

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn spectrum(path: &Option<PathBuf>) -> Result<SpectrumData, CliError> {
    match path {
        Some(p) => Ok(SpectrumData::from_json(&read(p)?)?),
        None => Ok(SpectrumData::default()),
    }
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountZerosArgs {
    /// `blaschke-demo` (one fixed product) or `random`.
    #[arg(long)]
    pub function: Option<String>,
    /// `carleman`, `big-rect`, `small-rect` or `all`.
    #[arg(long)]
    pub lemma: Option<String>,
    /// Number of random products.
    #[arg(long)]
    pub cases: Option<usize>,
    /// Zero pairs per random product.
    #[arg(long)]
    pub pairs: Option<usize>,
}
impl_merge!(CountZerosArgs { function, lemma, cases, pairs });

pub fn demo_product() -> BlaschkeProduct {
    let c = Complex64::new;
    BlaschkeProduct::symmetric(1.0, &[c(0.8, 2.0), c(0.7, 5.5), c(1.0, 6.5), c(0.62, 1.1)])
}

pub fn count_zeros(a: CountZerosArgs, g: &Global, sink: &mut Sink) -> Result<(), CliError> {
    let geometry = SuiteGeometry::default();
    let tol = g.tol.unwrap_or(1e-6);
    let lemma = a.lemma.unwrap_or_else(|| "all".into());
    if !["all", "carleman", "big-rect", "small-rect"].contains(&lemma.as_str()) {
        return Err(CliError::Config(format!("unknown lemma '{lemma}'")));
    }
    let products = match a.function.as_deref().unwrap_or("blaschke-demo") {
        "blaschke-demo" => vec![demo_product()],
        "random" => {
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            let pairs = a.pairs.unwrap_or(10);
            (0..a.cases.unwrap_or(1)).map(|_| suite_product(&mut rng, &geometry, pairs)).collect()
        }
        other => return Err(CliError::Config(format!("unknown function '{other}'"))),
    };
    let mut rows = Vec::new();
    for (i, p) in products.iter().enumerate() {
        rows.extend(check_product(p, &geometry, i, tol)?.into_iter().filter(|r| lemma == "all" || r.lemma == lemma));
    }
    sink.table(
        "weighted zero sums: contour = boundary-integral identity, direct = sum over brute-force zeros (dimensionless)",
        &rows,
    )
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CuspTermArgs {
    /// Cutoff heights T (comma separated).
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub t: Option<Vec<f64>>,
    /// Only `Z1` is supported by the cusp term.
    #[arg(long)]
    pub lattice: Option<String>,
    /// Smoothing scale A; default 1/log T.
    #[arg(long)]
    pub scale: Option<f64>,
}
impl_merge!(CuspTermArgs { t, lattice, scale });

pub fn cusp_term(a: CuspTermArgs, _g: &Global, sink: &mut Sink) -> Result<(), CliError> {
    let lattice = Lattice::named(a.lattice.as_deref().unwrap_or("Z1"))?;
    let mut rows = Vec::new();
    for t in a.t.unwrap_or_else(|| vec![50.0, 100.0, 200.0, 400.0]) {
        let psi = TestFunctionPsi::new(t, a.scale.unwrap_or(1.0 / t.ln()))?;
        rows.push(eval_cusp_term(&psi, &lattice, lattice.dimension())?);
    }
    sink.table(
        "cusp term of the trace formula; predicted = -(T/pi) log T + C1 T/pi; T in spectral units",
        &rows,
    )
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConstArgs {
    /// `Z1`, `Z2`, `Z3` or `hex`.
    #[arg(long)]
    pub lattice: Option<String>,
    /// Basis rows, from the configuration file only.
    #[arg(skip)]
    pub basis: Option<Vec<Vec<f64>>>,
}
impl_merge!(LatticeConstArgs { lattice, basis });

#[derive(Debug, Serialize)]
struct LatticeRow {
    lattice: String,
    d: usize,
    gamma_lattice: f64,
    gamma_error: f64,
    c_d: f64,
    c1: f64,
}

pub fn lattice_const(a: LatticeConstArgs, _g: &Global, sink: &mut Sink) -> Result<(), CliError> {
    let (name, lattice) = match (a.basis, a.lattice) {
        (Some(b), _) => ("custom".to_string(), Lattice::new(b)?),
        (None, name) => {
            let name = name.unwrap_or_else(|| "Z1".into());
            let l = Lattice::named(&name)?;
            (name, l)
        }
    };
    let d = lattice.dimension();
    let (c1, gamma) = c1_lattice(&lattice)?;
    let row = LatticeRow { lattice: name, d, gamma_lattice: gamma.value, gamma_error: gamma.error, c_d: c_d_constant(d)? + 0.0, c1 };
    sink.table("cusp lattice constants gamma(L), C(d) and C1(L) (dimensionless)", &[row])
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParametrixArgs {
    /// `hyperbolic`, `flat`, `sphere`, `pinched` or `bump`.
    #[arg(long)]
    pub profile: Option<String>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub k_max: Option<usize>,
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Grid points per unit radius; default picks the best of several.
    #[arg(long)]
    pub density: Option<usize>,
}
impl_merge!(ParametrixArgs { profile, d, k_max, r_max, density });

pub fn parametrix(a: ParametrixArgs, g: &Global, sink: &mut Sink) -> Result<(), CliError> {
    let profile = RadialCurvatureProfile::named(a.profile.as_deref().unwrap_or("hyperbolic"), a.r_max.unwrap_or(5.0))?;
    let d = a.d.unwrap_or(2);
    let k_max = a.k_max.unwrap_or(3);
    let table = match (a.density, g.tol) {
        (None, None) => u_k_radial(&profile, d, k_max)?,
        (density, tol) => u_k_radial_with(&profile, d, k_max, density.unwrap_or(200), tol.unwrap_or(1e-4))?,
    };
    match sink.format {
        crate::output::Format::Csv => {
            let out = sink.raw();
            writeln!(out, "# transport coefficients u_k(r) on profile '{}', d = {d}; r in units of the curvature scale", profile.name)
                .map_err(|e| CliError::Output(e.to_string()))?;
            table.write_csv(out)?;
            Ok(())
        }
        crate::output::Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                table: &'a cuspweyl::parametrix::UkTable,
                growth: Vec<cuspweyl::parametrix::GrowthFit>,
            }
            let growth = verify_bound_uk(&table);
            sink.table("transport coefficients u_k(r) and log-growth fits", &[Doc { table: &table, growth }])
        }
    }
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseArgs {
    /// `random` (synthetic factorized model) or `modular`.
    #[arg(long)]
    pub backend: Option<String>,
    /// Heights T (comma separated).
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub t: Option<Vec<f64>>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub pairs: Option<usize>,
    /// Resonance set (JSON) instead of a random model.
    #[arg(long)]
    pub resonances: Option<PathBuf>,
    /// Discrete spectrum (JSON).
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
    /// Step of the argument tracking on the modular backend.
    #[arg(long)]
    pub step: Option<f64>,
}
impl_merge!(PhaseArgs { backend, t, d, pairs, resonances, spectrum, step });

#[derive(Debug, Serialize)]
struct PhaseRow {
    t: f64,
    s: f64,
    two_pi_s_prime: Option<f64>,
    resonance_sum: Option<f64>,
    tilde_n: f64,
}

fn model_from(resonances: &Option<PathBuf>, d: usize, pairs: usize, seed: u64) -> Result<PhiModel, CliError> {
    match resonances {
        Some(p) => Ok(PhiModel::normalized(ResonanceSet::from_json(&read(p)?)?, Complex64::new(1.0, 0.0), &[])?),
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(random_model(&mut rng, d, pairs, 0.5, 50.0, &[0.3])?)
        }
    }
}

pub fn phase(a: PhaseArgs, g: &Global, sink: &mut Sink) -> Result<(), CliError> {
    let spec = spectrum(&a.spectrum)?;
    let ts = a.t.unwrap_or_else(|| vec![5.0, 10.0, 20.0, 40.0]);
    let mut rows = Vec::new();
    match a.backend.as_deref().unwrap_or("random") {
        "random" => {
            let m = model_from(&a.resonances, a.d.unwrap_or(1), a.pairs.unwrap_or(20), g.seed)?;
            for t in ts {
                let p = phase_derivative(&m, t)?;
                let s = scattering_phase(&m, t)?;
                let tilde_n = spec.count(t) as f64 - s;
                rows.push(PhaseRow { t, s, two_pi_s_prime: Some(p.total()), resonance_sum: Some(p.resonance_sum), tilde_n });
            }
        }
        "modular" => {
            for t in ts {
                let s = scattering_phase_by_argument(&ModularPhi, t, a.step.unwrap_or(0.02))?;
                rows.push(PhaseRow { t, s, two_pi_s_prime: None, resonance_sum: None, tilde_n: spec.count(t) as f64 - s });
            }
        }
        other => return Err(CliError::Config(format!("unknown backend '{other}'"))),
    }
    sink.table("scattering phase S(T) with S(0) = 0, 2 pi S'(T) and tilde N(T) = N_pp(T) - S(T); T spectral parameter", &rows)
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeylFitArgs {
    /// CSV with columns T,value (lines starting with `#` skipped); default
    /// is synthetic data with uniform noise of amplitude T^d/log T.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Weight rows by log T/T^d.
    #[arg(long)]
    pub weighted: Option<bool>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub draws: Option<usize>,
    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Multiplier of the noise amplitude.
    #[arg(long)]
    pub noise: Option<f64>,
}
impl_merge!(WeylFitArgs { input, d, weighted, samples, draws, t_min, t_max, noise });

#[derive(Debug, Serialize)]
struct FitRow {
    draw: usize,
    a: f64,
    b: f64,
    c: f64,
    residual_norm: f64,
    condition: f64,
    samples: usize,
}

/// Coefficients of the synthetic law: 1/12, −1/π, (1 − log 2)/π.
pub fn synthetic_coefficients() -> (f64, f64, f64) {
    (1.0 / 12.0, -1.0 / PI, (1.0 - 2f64.ln()) / PI)
}

pub fn weyl_fit(a: WeylFitArgs, g: &Global, sink: &mut Sink) -> Result<(), CliError> {
    let d = a.d.unwrap_or(1);
    let weighted = a.weighted.unwrap_or(false);
    let fit = |s: &[(f64, f64)]| {
        if weighted {
            weyl_fit_weighted(s, d, remainder_weight(d))
        } else {
            fit_plain(s, d)
        }
    };
    let mut rows = Vec::new();
    if let Some(path) = &a.input {
        let text = read(path)?;
        let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        let mut samples = Vec::new();
        for rec in rdr.deserialize::<(f64, f64)>() {
            samples.push(rec.map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?);
        }
        let r = fit(&samples)?;
        rows.push(FitRow { draw: 0, a: r.a, b: r.b, c: r.c, residual_norm: r.residual_norm, condition: r.condition, samples: r.samples });
    } else {
        let (ca, cb, cc) = synthetic_coefficients();
        let grid = log_grid(a.t_min.unwrap_or(10.0), a.t_max.unwrap_or(1e4), a.samples.unwrap_or(1000));
        let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
        let noise = a.noise.unwrap_or(1.0);
        for draw in 0..a.draws.unwrap_or(1) {
            let samples: Vec<(f64, f64)> = grid
                .iter()
                .map(|&t| {
                    let amp = noise * t.powi(d as i32) / t.ln();
                    (t, ca * t.powi(d as i32 + 1) + cb * t * t.ln() + cc * t + amp * rng.gen_range(-1.0..1.0))
                })
                .collect();
            let r = fit(&samples)?;
            rows.push(FitRow { draw, a: r.a, b: r.b, c: r.c, residual_norm: r.residual_norm, condition: r.condition, samples: r.samples });
        }
    }
    sink.table("least-squares fit of a T^(d+1) + b T log T + c T (coefficients dimensionless)", &rows)
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSurfaceArgs {
    /// Height T of the run; resonances are located up to Im ρ = T.
    #[arg(long)]
    pub height: Option<f64>,
    #[arg(long)]
    pub min_cell: Option<f64>,
    /// Also write the located resonances (JSON).
    #[arg(long)]
    pub resonances_out: Option<PathBuf>,
}
impl_merge!(ModelSurfaceArgs { height, min_cell, resonances_out });

#[derive(Debug, Serialize)]
pub struct ModelSurfaceRow {
    pub t: f64,
    pub gate_unitarity: f64,
    pub gate_functional: f64,
    pub resonances_upper: u64,
    pub strip_sum: f64,
    pub leading: f64,
    pub predicted: f64,
    pub leading_rel_error: f64,
    pub predicted_rel_error: f64,
}

pub fn model_surface_row(t: f64, min_cell: f64) -> Result<(ModelSurfaceRow, ResonanceSet), cuspweyl::Error> {
    let axis: Vec<f64> = (0..100).map(|i| 0.05 + i as f64 * t / 100.0).collect();
    let points: Vec<Complex64> =
        (0..40).map(|i| Complex64::new(0.55 + 0.01 * i as f64, 0.3 + i as f64 * t / 40.0)).collect();
    let (gate_unitarity, gate_functional) = modular_gate(&axis, &points)?;
    let set = modular_resonances(t, min_cell)?;
    let lead = LeadingTerm { a_star: PI.sqrt(), ell_star: 0.0 };
    let s = strip_weighted_sum(&set, 0.75, t, Some(lead));
    let predicted = s.predicted.unwrap_or(f64::NAN);
    let row = ModelSurfaceRow {
        t,
        gate_unitarity,
        gate_functional,
        resonances_upper: set.total_multiplicity() / 2,
        strip_sum: s.weighted,
        leading: s.leading,
        predicted,
        leading_rel_error: (s.weighted - s.leading).abs() / s.leading,
        predicted_rel_error: (s.weighted - predicted).abs() / predicted.abs(),
    };
    Ok((row, set))
}

pub fn model_surface(a: ModelSurfaceArgs, _g: &Global, sink: &mut Sink) -> Result<(), CliError> {
    let (row, set) = model_surface_row(a.height.unwrap_or(100.0), a.min_cell.unwrap_or(0.05))?;
    if let Some(p) = &a.resonances_out {
        std::fs::write(p, set.to_json()?).map_err(|e| CliError::Output(format!("{}: {e}", p.display())))?;
    }
    sink.table(
        "modular surface: unitarity and functional-equation gates, weighted strip sum vs (1/2pi) T log T and the two-term prediction",
        &[row],
    )
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneralCountArgs {
    /// `random` or `modular`.
    #[arg(long)]
    pub backend: Option<String>,
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub t: Option<Vec<f64>>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub pairs: Option<usize>,
    #[arg(long)]
    pub resonances: Option<PathBuf>,
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
}
impl_merge!(GeneralCountArgs { backend, t, d, pairs, resonances, spectrum });

pub fn general_count(a: GeneralCountArgs, g: &Global, sink: &mut Sink) -> Result<(), CliError> {
    let spec = spectrum(&a.spectrum)?;
    let ts = a.t.unwrap_or_else(|| vec![10.0, 20.0, 40.0]);
    let set = match a.backend.as_deref().unwrap_or("random") {
        "random" => model_from(&a.resonances, a.d.unwrap_or(3), a.pairs.unwrap_or(200), g.seed)?.resonances,
        "modular" => modular_resonances(ts.iter().cloned().fold(1.0, f64::max), 0.05)?,
        other => return Err(CliError::Config(format!("unknown backend '{other}'"))),
    };
    let mut rows = Vec::new();
    for t in ts {
        rows.push(general_weyl_count(&set, &spec, t, None)?);
    }
    sink.table(
        "global counting identity: eigen_count + lorentzian_sum = disc_count + R(T); R split into far and |shell| <= 1 terms",
        &rows,
    )
}
