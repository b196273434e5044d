//! Scattering phase S with φ(d/2 + iT) = e^{2iπS(T)}, S(0) = 0, the
//! counting function Ñ = N_pp − S, smoothing, and the 0-trace formula.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use super::model::{PhiModel, ScatteringDeterminant, SpectrumData};
use crate::analysis::mollifier::{bump, Mollifier};
use crate::analysis::psi::TestFunctionPsi;
use crate::analysis::quad::{integrate_panels, QuadratureSpec};
use crate::error::{Error, Result};

/// The pieces of 2πS′(T) = iQ′(d/2 + iT) + Σ (2Re ρ − d)/((d/2 − Re ρ)² + (T − Im ρ)²).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseDerivative {
    pub t: f64,
    /// iQ′(d/2 + iT), real.
    pub polynomial: f64,
    /// Poles with Re ρ < d/2; every summand is ≤ 0.
    pub resonance_sum: f64,
    /// Real poles in (d/2, d], whose summands are positive.
    pub segment_sum: f64,
}

impl PhaseDerivative {
    /// 2πS′(T).
    pub fn total(&self) -> f64 {
        self.polynomial + self.resonance_sum + self.segment_sum
    }

    pub fn s_prime(&self) -> f64 {
        self.total() / (2.0 * PI)
    }
}

pub fn phase_derivative(m: &PhiModel, t: f64) -> Result<PhaseDerivative> {
    let h = m.resonances.half();
    let d = m.d() as f64;
    let polynomial = (Complex64::new(0.0, 1.0) * m.q_prime(Complex64::new(h, t))).re;
    let mut resonance_sum = 0.0;
    let mut segment_sum = 0.0;
    for e in &m.resonances.entries {
        if e.on_axis(h) {
            if (e.im - t).abs() < 1e-12 {
                return Err(Error::Pole { re: e.re, im: e.im });
            }
            continue;
        }
        let a = h - e.re;
        let term = e.mult as f64 * (2.0 * e.re - d) / (a * a + (t - e.im) * (t - e.im));
        if e.re < h {
            debug_assert!(term <= 0.0);
            resonance_sum += term;
        } else {
            segment_sum += term;
        }
    }
    if resonance_sum > 0.0 {
        return Err(Error::NotANumber("positive resonance sum in the phase derivative".into()));
    }
    Ok(PhaseDerivative { t, polynomial, resonance_sum, segment_sum })
}

/// S(T) in closed form: (Q(d/2 + iT) − Q(d/2))/2π minus
/// (1/π) Σ [arctan((T − Im ρ)/a) + arctan(Im ρ/a)], a = d/2 − Re ρ.
pub fn scattering_phase(m: &PhiModel, t: f64) -> Result<f64> {
    let h = m.resonances.half();
    let q = (m.q(Complex64::new(h, t)) - m.q(Complex64::new(h, 0.0))).re / (2.0 * PI);
    let mut sum = 0.0;
    for e in &m.resonances.entries {
        if e.on_axis(h) {
            continue;
        }
        let a = h - e.re;
        sum += e.mult as f64 * (((t - e.im) / a).atan() + (e.im / a).atan());
    }
    Ok(q - sum / PI)
}

/// S(T) by continuous argument tracking of φ along the axis, with steps
/// refined until every phase increment is below π/8.
pub fn scattering_phase_by_argument(det: &dyn ScatteringDeterminant, t: f64, step: f64) -> Result<f64> {
    if !(step > 0.0) {
        return Err(Error::Precondition("step must be positive".into()));
    }
    let h = det.dimension() as f64 / 2.0;
    let at = |x: f64| det.eval(Complex64::new(h, x));
    let sign = if t < 0.0 { -1.0 } else { 1.0 };
    let end = t.abs();
    let mut x = 0.0;
    let mut prev = at(0.0)?;
    let mut total = 0.0;
    while x < end {
        let mut dx = step.min(end - x);
        loop {
            let next = at(sign * (x + dx))?;
            let inc = (next / prev).arg();
            if inc.abs() < PI / 8.0 || dx < 1e-9 {
                total += inc;
                prev = next;
                x += dx;
                break;
            }
            dx /= 2.0;
        }
    }
    Ok(sign * total / (2.0 * PI))
}

/// Ñ(T) = N_pp(T) − S(T).
pub fn tilde_n(spec: &SpectrumData, m: &PhiModel, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Precondition(format!("need T > 0, got {t}")));
    }
    Ok(spec.count(t) as f64 - scattering_phase(m, t)?)
}

/// Ñ(T) for a backend without explicit resonances.
pub fn tilde_n_backend(spec: &SpectrumData, det: &dyn ScatteringDeterminant, t: f64, step: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Precondition(format!("need T > 0, got {t}")));
    }
    Ok(spec.count(t) as f64 - scattering_phase_by_argument(det, t, step)?)
}

/// Even, nonnegative smoothing kernel k = ρ̂/2π of unit mass, tabulated on
/// [0, CUTOFF] and extended by zero.
#[derive(Debug, Clone)]
pub struct SmearKernel {
    step: f64,
    table: Vec<f64>,
}

impl SmearKernel {
    pub const CUTOFF: f64 = 200.0;
    const STEP: f64 = 0.02;

    /// k(u) = (1/π)∫₀¹ ρ(t) cos(ut) dt for an even profile ρ supported in
    /// [−1, 1] with ρ(0) = 1. Fails when k takes negative values.
    pub fn from_profile(rho: impl Fn(f64) -> f64 + Sync) -> Result<Self> {
        let spec = QuadratureSpec::default().with_abs(1e-14);
        Self::tabulate(|u| {
            let panels = ((u / PI).ceil() as usize).max(1);
            let pts: Vec<f64> = (0..=panels).map(|i| i as f64 / panels as f64).collect();
            integrate_panels(|t: f64| rho(t) * (u * t).cos(), &pts, &spec)
                .into_result("kernel transform")
                .map(|v: f64| v / PI)
        })
    }

    /// The plateau mollifier: its transform has negative lobes, so this is
    /// expected to fail.
    pub fn from_mollifier(m: Mollifier) -> Result<Self> {
        Self::from_profile(move |t| m.eval(t))
    }

    /// ρ = (b∗b)(2t)/(b∗b)(0) for the standard bump b; then
    /// k(u) = b̂(u/2)²/(4π‖b‖²) ≥ 0.
    pub fn autocorrelation() -> &'static SmearKernel {
        static K: OnceLock<SmearKernel> = OnceLock::new();
        K.get_or_init(|| {
            let spec = QuadratureSpec::default().with_abs(1e-15);
            let norm2: f64 = integrate_panels(|v: f64| bump(v) * bump(v), &[-1.0, 0.0, 1.0], &spec).value;
            let bhat = |xi: f64| {
                let panels = ((xi / PI).ceil() as usize).max(1);
                let pts: Vec<f64> = (0..=panels).map(|i| i as f64 / panels as f64).collect();
                2.0 * integrate_panels(|v: f64| bump(v) * (xi * v).cos(), &pts, &spec).value
            };
            Self::tabulate(|u| Ok(bhat(u / 2.0).powi(2) / (4.0 * PI * norm2)))
                .expect("the autocorrelation kernel is nonnegative")
        })
    }

    fn tabulate(k: impl Fn(f64) -> Result<f64> + Sync) -> Result<Self> {
        use rayon::prelude::*;
        let n = (Self::CUTOFF / Self::STEP).round() as usize;
        let table: Vec<f64> = (0..=n).into_par_iter().map(|i| k(i as f64 * Self::STEP)).collect::<Result<_>>()?;
        let peak = table.iter().cloned().fold(0.0, f64::max);
        if let Some(i) = table.iter().position(|&v| v < -1e-10 * peak) {
            return Err(Error::Precondition(format!(
                "smoothing kernel is negative at u = {:.3} (value {:.3e})",
                i as f64 * Self::STEP,
                table[i]
            )));
        }
        // Renormalise to unit mass (composite Simpson on the half line).
        let mut mass = 0.0;
        for i in (0..n).step_by(2) {
            mass += table[i] + 4.0 * table[i + 1] + table[i + 2];
        }
        mass *= 2.0 * Self::STEP / 3.0;
        let table = table.into_iter().map(|v| v.max(0.0) / mass).collect();
        Ok(SmearKernel { step: Self::STEP, table })
    }

    /// k(u) by cubic interpolation of the table.
    pub fn eval(&self, u: f64) -> f64 {
        let x = u.abs() / self.step;
        let n = self.table.len() - 1;
        if x >= n as f64 {
            return 0.0;
        }
        let i = (x.floor() as isize).clamp(1, n as isize - 2);
        let at = |j: isize| self.table[j.unsigned_abs()];
        let f = x - i as f64;
        let (a, b, c, d) = (at(i - 1), at(i), at(i + 1), at(i + 2));
        let l0 = -f * (f - 1.0) * (f - 2.0) / 6.0;
        let l1 = (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0;
        let l2 = -(f + 1.0) * f * (f - 2.0) / 2.0;
        let l3 = (f + 1.0) * f * (f - 1.0) / 6.0;
        l0 * a + l1 * b + l2 * c + l3 * d
    }
}

/// ∫ f(T + A u) k(u) du.
pub fn smear(f: impl Fn(f64) -> f64 + Sync, t: f64, a: f64, kernel: &SmearKernel) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::Precondition("smoothing width must be positive".into()));
    }
    let u_max = SmearKernel::CUTOFF;
    // Dense panels near the centre, where the kernel has its mass.
    let mut pts: Vec<f64> = (-80..=80).map(|i| i as f64 * 0.25).collect();
    pts.insert(0, -u_max);
    pts.push(u_max);
    let spec = QuadratureSpec::default().with_abs(1e-10).with_rel(1e-10);
    integrate_panels(|u: f64| f(t + a * u) * kernel.eval(u), &pts, &spec).into_result("smoothed counting function")
}

/// Σ_λ ψ̂(r_λ) − (1/2)∫ S′ψ̂ + (1/4)ψ̂(0) tr φ(d/2).
pub fn trace_formula_lhs(spec: &SpectrumData, m: &PhiModel, psi: &TestFunctionPsi, tr_phi_half: f64) -> Result<f64> {
    let mut discrete = 0.0;
    for e in &spec.eigen_r {
        let v = if e.is_small() { psi.hat_imaginary(e.r_imag)? } else { psi.hat(e.r)? };
        discrete += e.mult as f64 * v;
    }
    // ψ̂ − 1_{[−T,T]} decays like the transform of the mollifier at scale A;
    // 400A beyond the cutoff it is negligible.
    let r_max = psi.cutoff_t + 400.0 * psi.scale_a;
    let mut pts: Vec<f64> = Vec::new();
    let n = (r_max / 0.1).ceil() as usize;
    for i in 0..=n {
        pts.push(r_max * i as f64 / n as f64);
    }
    let qspec = QuadratureSpec::default().with_abs(1e-9);
    let f = |r: f64| -> f64 {
        match (phase_derivative(m, r), psi.hat(r)) {
            (Ok(p), Ok(h)) => p.s_prime() * h,
            _ => f64::NAN,
        }
    };
    let continuous = 2.0 * integrate_panels(f, &pts, &qspec).into_result("∫S′ψ̂")?;
    Ok(discrete - 0.5 * continuous + 0.25 * psi.hat(0.0)? * tr_phi_half)
}
