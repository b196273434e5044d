//! Closed-form constants of the cusp contribution and the Weyl coefficient.

use std::f64::consts::PI;

use super::lattice::{gamma_lattice, GammaEstimate, Lattice};
use crate::analysis::quad::{integrate, integrate_panels, QuadratureSpec};
use crate::analysis::special::{gamma_real, EULER_GAMMA};
use crate::error::{Error, Result};

/// 𝒞(d): half of the x-integral constant 2𝒞(d),
/// Σ_{k=1}^{d/2−1} 1/(d−2k) for even d and Σ_{k=1}^{⌊d/2⌋} 1/(d−2k) − log 2 for odd d.
pub fn c_d_constant(d: usize) -> Result<f64> {
    if d == 0 {
        return Err(Error::UnsupportedDimension(d));
    }
    let top = if d % 2 == 0 { d / 2 - 1 } else { d / 2 };
    let sum: f64 = (1..=top).map(|k| 1.0 / (d - 2 * k) as f64).sum();
    Ok(if d % 2 == 0 { sum } else { sum - std::f64::consts::LN_2 })
}

/// Radius used for γ(Λ) in each dimension.
pub fn default_gamma_radius(d: usize) -> f64 {
    match d {
        1 => 2000.0,
        2 => 200.0,
        _ => 96.0,
    }
}

/// 𝒞₁(Λ) = 1 + 𝒞(d) + γ(Λ) − γ, with the γ(Λ) estimate used.
pub fn c1_lattice(l: &Lattice) -> Result<(f64, GammaEstimate)> {
    let d = l.dimension();
    let g = gamma_lattice(l, default_gamma_radius(d))?;
    Ok((1.0 + c_d_constant(d)? + g.value - EULER_GAMMA, g))
}

/// lim_{ε→0} [∫_ε^∞ sin u/u² du + log ε], which equals 1 − γ.
///
/// Split as ∫₀¹ (sin u − u)/u² du + ∫₁^L sin u/u² du + tail, with L = 2πN so
/// the tail is 1/L² − 6/L⁴ + 120/L⁶ + O(L⁻⁸).
pub fn sine_log_constant() -> f64 {
    let spec = QuadratureSpec::default().with_rel(1e-14).with_abs(1e-16);
    let near = integrate(
        |u: f64| {
            if u < 1e-3 {
                let u2 = u * u;
                -u / 6.0 + u * u2 / 120.0 - u * u2 * u2 / 5040.0
            } else {
                (u.sin() - u) / (u * u)
            }
        },
        0.0,
        1.0,
        &spec,
    )
    .value;
    let n = 64usize;
    let l = 2.0 * PI * n as f64;
    let mut points = vec![1.0];
    points.extend((1..=2 * n).map(|k| k as f64 * PI));
    let body = integrate_panels(|u: f64| u.sin() / (u * u), &points, &spec).value;
    let tail = 1.0 / (l * l) - 6.0 / l.powi(4) + 120.0 / l.powi(6);
    near + body + tail
}

/// The two forms of c₀ for a manifold of volume `vol`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylConstant {
    /// vol/((4π)^{(d+1)/2} Γ(d/2 + 3/2)).
    pub heat_form: f64,
    /// vol(B*M)/(2π)^{d+1}, with vol(B*M) = vol·ω_{d+1}.
    pub ball_form: f64,
}

impl WeylConstant {
    pub fn value(&self) -> f64 {
        self.heat_form
    }
}

/// Leading Weyl coefficient c₀ in both displayed forms; they must agree to
/// 1e−12 relative.
pub fn weyl_c0(vol: f64, d: usize) -> Result<WeylConstant> {
    if !(vol > 0.0) {
        return Err(Error::Precondition(format!("volume must be positive, got {vol}")));
    }
    if d == 0 {
        return Err(Error::UnsupportedDimension(d));
    }
    let n = (d + 1) as f64;
    let heat_form = vol / ((4.0 * PI).powf(n / 2.0) * gamma_real(d as f64 / 2.0 + 1.5)?);
    let ball = PI.powf(n / 2.0) / gamma_real(n / 2.0 + 1.0)?;
    let ball_form = vol * ball / (2.0 * PI).powf(n);
    if ((heat_form - ball_form) / heat_form).abs() > 1e-12 {
        return Err(Error::Precondition(format!(
            "the two Weyl constants disagree: {heat_form} vs {ball_form}"
        )));
    }
    Ok(WeylConstant { heat_form, ball_form })
}
