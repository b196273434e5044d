//! The scattering determinant of the modular surface,
//! φ(s) = √π Γ(s − ½) ζ(2s − 1)/(Γ(s) ζ(2s)), as a reference backend.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::model::{Resonance, ResonanceSet, ScatteringDeterminant};
use crate::analysis::special::{log_gamma, riemann_zeta};
use crate::error::{Error, Result};
use crate::zerocount::{brute_force_zeros, AnalyticFunction, Rect};

const HALF_RADIUS: f64 = 1e-3;
const HALF_NODES: usize = 16;
const CAUCHY_RADIUS: f64 = 1e-2;
const CAUCHY_NODES: usize = 32;

fn closed_form(s: Complex64) -> Result<Complex64> {
    let lg = log_gamma(s - 0.5)? - log_gamma(s)?;
    let num = riemann_zeta(2.0 * s - 1.0)?;
    let den = riemann_zeta(2.0 * s)?;
    let v = PI.sqrt() * lg.exp() * num / den;
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::Pole { re: s.re, im: s.im });
    }
    Ok(v)
}

/// φ(s). At s = ½ the three singular factors cancel; there the value is
/// the mean over a small circle, which is exact for holomorphic φ.
pub fn modular_phi(s: Complex64) -> Result<Complex64> {
    let half = Complex64::new(0.5, 0.0);
    if (s - 1.0).norm() < 1e-12 {
        return Err(Error::Pole { re: 1.0, im: 0.0 });
    }
    if (s - half).norm() < HALF_RADIUS / 2.0 {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..HALF_NODES {
            let z = Complex64::from_polar(HALF_RADIUS, 2.0 * PI * (k as f64 + 0.5) / HALF_NODES as f64);
            acc += closed_form(s + z)?;
        }
        return Ok(acc / HALF_NODES as f64);
    }
    closed_form(s)
}

/// φ′ by the fourth-order central difference with step 10⁻³; holomorphy
/// lets the step run along the real direction.
pub fn modular_phi_derivative(s: Complex64) -> Result<Complex64> {
    let h = 1e-3;
    let f = |k: f64| modular_phi(s + k * h);
    Ok((f(-2.0)? - 8.0 * f(-1.0)? + 8.0 * f(1.0)? - f(2.0)?) / (12.0 * h))
}

/// The modular backend: dimension 1, one cusp, no stored resonances.
#[derive(Debug, Clone, Copy, Default)]
pub struct ModularPhi;

impl ScatteringDeterminant for ModularPhi {
    fn dimension(&self) -> usize {
        1
    }

    fn cusps(&self) -> usize {
        1
    }

    fn eval(&self, s: Complex64) -> Result<Complex64> {
        modular_phi(s)
    }

    /// φ′/φ with φ′ from the Cauchy integral on a circle of radius 10⁻².
    fn log_derivative(&self, s: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..CAUCHY_NODES {
            let w = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / CAUCHY_NODES as f64);
            acc += modular_phi(s + CAUCHY_RADIUS * w)? / w;
        }
        let deriv = acc / (CAUCHY_NODES as f64 * CAUCHY_RADIUS);
        Ok(deriv / modular_phi(s)?)
    }
}

/// Largest deviation from |φ| = 1 on the axis and from φ(s)φ(1 − s) = 1 at
/// the given points.
pub fn modular_gate(axis: &[f64], points: &[Complex64]) -> Result<(f64, f64)> {
    let mut unitary = 0.0f64;
    for &t in axis {
        unitary = unitary.max((modular_phi(Complex64::new(0.5, t))?.norm() - 1.0).abs());
    }
    let mut functional = 0.0f64;
    for &s in points {
        let p = modular_phi(s)? * modular_phi(1.0 - s)?;
        functional = functional.max((p - 1.0).norm());
    }
    Ok((unitary, functional))
}

/// Resonances ρ = 1 − β + iγ of the modular surface with 0 < γ ≤ height,
/// mirrored from the zeros β + iγ of φ located by brute force in
/// [0.6, 0.97] × [1, height], together with their conjugates. The window
/// is off-centre so that no bisection line runs through Re s = 3/4, where
/// every zero sits.
pub fn modular_resonances(height: f64, min_cell: f64) -> Result<ResonanceSet> {
    let nan = Complex64::new(f64::NAN, f64::NAN);
    let f = AnalyticFunction::new("modular phi", move |s| modular_phi(s).unwrap_or(nan))
        .with_derivative(move |s| modular_phi_derivative(s).unwrap_or(nan));
    let rect = Rect::new(0.6, 0.97, 1.0, height)?;
    let zeros = brute_force_zeros(&f, &rect, min_cell)?;
    let upper: Vec<Resonance> = zeros
        .entries
        .iter()
        .map(|z| Resonance::new(Complex64::new(1.0 - z.location.re, z.location.im), z.multiplicity))
        .collect();
    ResonanceSet::symmetric(1, 1, &upper)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_unitarity() {
        let v = modular_phi(Complex64::new(0.5, 7.0)).unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn functional_equation() {
        let p = modular_phi(Complex64::new(0.7, 0.0)).unwrap() * modular_phi(Complex64::new(0.3, 0.0)).unwrap();
        assert!((p - 1.0).norm() < 1e-9);
        let s = Complex64::new(0.9, 12.3);
        let p = modular_phi(s).unwrap() * modular_phi(1.0 - s).unwrap();
        assert!((p - 1.0).norm() < 1e-9);
    }

    #[test]
    fn real_on_the_real_line() {
        let v = modular_phi(Complex64::new(3.7, 0.0)).unwrap();
        assert!(v.im.abs() < 1e-14 * v.re.abs());
    }

    #[test]
    fn value_at_half() {
        let v = modular_phi(Complex64::new(0.5, 0.0)).unwrap();
        assert!((v + 1.0).norm() < 1e-9, "{v}");
        assert!(matches!(modular_phi(Complex64::new(1.0, 0.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn log_derivative_matches_difference() {
        let s = Complex64::new(0.5, 9.0);
        let h = 1e-5;
        let fd = (modular_phi(s + h).unwrap().ln() - modular_phi(s - h).unwrap().ln()) / (2.0 * h);
        let ld = ModularPhi.log_derivative(s).unwrap();
        assert!((fd - ld).norm() < 1e-6, "{fd} {ld}");
    }

    #[test]
    fn first_resonances() {
        // Zeta zeros 14.1347…, 21.0220…, 25.0109… halved.
        let set = modular_resonances(13.0, 0.05).unwrap();
        let mut upper: Vec<f64> = set.entries.iter().filter(|e| e.im > 0.0).map(|e| e.im).collect();
        upper.sort_by(f64::total_cmp);
        let expected = [7.067362570867, 10.511019819386, 12.505428790073];
        assert_eq!(upper.len(), 3);
        for (u, e) in upper.iter().zip(expected) {
            assert!((u - e).abs() < 1e-8, "{u} vs {e}");
        }
        assert!(set.entries.iter().all(|e| (e.re - 0.25).abs() < 1e-8));
    }
}
