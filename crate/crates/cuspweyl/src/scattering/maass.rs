//! Maass–Selberg growth bound off the axis and the axis identity.

use num_complex::Complex64;
use serde::Serialize;

use super::model::ScatteringDeterminant;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaassSelbergCheck {
    pub phi_abs: f64,
    pub bound: f64,
    pub passes: bool,
}

/// y^{κ(2σ−d)}(√(1 + (σ − d/2)²/t²) + (σ − d/2)/|t|)^κ against |φ(σ + it)|.
pub fn maass_selberg_bound(phi_abs: f64, sigma: f64, t: f64, y: f64, d: usize, kappa: usize) -> Result<MaassSelbergCheck> {
    let h = d as f64 / 2.0;
    if t == 0.0 {
        return Err(Error::Degenerate("the bound is singular at t = 0".into()));
    }
    if sigma < h || !(y > 0.0) {
        return Err(Error::Precondition(format!("need σ ≥ d/2 and y > 0, got σ = {sigma}, y = {y}")));
    }
    let x = (sigma - h) / t.abs();
    let k = kappa as i32;
    let bound = y.powf(kappa as f64 * (2.0 * sigma - d as f64)) * ((1.0 + x * x).sqrt() + x).powi(k);
    Ok(MaassSelbergCheck { phi_abs, bound, passes: phi_abs <= bound })
}

/// Below this |t| the removable singularity is evaluated by expansion.
pub const TAYLOR_RADIUS: f64 = 1e-4;

/// 2κ log y − Re φ′/φ(d/2 + it) + Re[(y^{2it}φ̄ − y^{−2it}φ)/(2it)] for a
/// single cusp. The last term is −Im(y^{−2it}φ)/t.
pub fn maass_selberg_axis_rhs(det: &dyn ScatteringDeterminant, y: f64, t: f64) -> Result<f64> {
    if det.cusps() != 1 {
        return Err(Error::Precondition("the axis identity is implemented for one cusp".into()));
    }
    if !(y > 0.0) {
        return Err(Error::Precondition(format!("need y > 0, got {y}")));
    }
    if t.abs() < TAYLOR_RADIUS {
        // Even in t: fit G₀ + G₂t² from two small heights.
        let (h1, h2) = (1e-3, 2e-3);
        let g1 = axis_direct(det, y, h1)?;
        let g2 = axis_direct(det, y, h2)?;
        let g2_coeff = (g2 - g1) / (3.0 * h1 * h1);
        return Ok(g1 - g2_coeff * h1 * h1 + g2_coeff * t * t);
    }
    axis_direct(det, y, t)
}

fn axis_direct(det: &dyn ScatteringDeterminant, y: f64, t: f64) -> Result<f64> {
    let s = Complex64::new(det.dimension() as f64 / 2.0, t);
    let phi = det.eval(s)?;
    if (phi.norm() - 1.0).abs() > 1e-8 {
        return Err(Error::Precondition(format!("|φ| = {} on the axis at t = {t}", phi.norm())));
    }
    let ld = det.log_derivative(s)?;
    let w = Complex64::from_polar(1.0, -2.0 * t * y.ln()) * phi;
    Ok(2.0 * y.ln() - ld.re - w.im / t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scattering::model::{PhiModel, Resonance, ResonanceSet};

    #[test]
    fn bound_at_the_axis_is_one() {
        let b = maass_selberg_bound(1.0, 0.5, 3.0, 2.0, 1, 1).unwrap();
        assert_eq!(b.bound, 1.0);
        assert!(b.passes);
    }

    #[test]
    fn bound_detects_violation_and_degeneracy() {
        assert!(!maass_selberg_bound(1e6, 0.75, 20.0, 2.0, 1, 1).unwrap().passes);
        assert!(matches!(maass_selberg_bound(1.0, 0.75, 0.0, 2.0, 1, 1), Err(Error::Degenerate(_))));
        let b = maass_selberg_bound(0.0, 1.0, 1.0, 2.0, 1, 2).unwrap();
        let x = 0.5f64;
        assert!((b.bound - 2f64.powi(2) * ((1.0 + x * x).sqrt() + x).powi(2)).abs() < 1e-14);
    }

    #[test]
    fn trivial_phi_limit() {
        let m = PhiModel::trivial(1, 1);
        let y = std::f64::consts::E;
        let at0 = maass_selberg_axis_rhs(&m, y, 0.0).unwrap();
        assert!((at0 - 4.0).abs() < 1e-6, "{at0}");
        let taylor = maass_selberg_axis_rhs(&m, y, 1e-5).unwrap();
        let direct = axis_direct(&m, y, 1e-3).unwrap();
        assert!((taylor - direct).abs() < 1e-5);
        let t: f64 = 0.7;
        let v = maass_selberg_axis_rhs(&m, y, t).unwrap();
        assert!((v - (2.0 + (2.0 * t).sin() / t)).abs() < 1e-13);
    }

    #[test]
    fn unit_height_is_finite() {
        let set = ResonanceSet::symmetric(1, 1, &[Resonance::new(Complex64::new(0.2, 3.0), 1)]).unwrap();
        let m = PhiModel::normalized(set, Complex64::new(1.0, 0.0), &[]).unwrap();
        for t in [0.0, 1e-5, 0.5, 3.0] {
            assert!(maass_selberg_axis_rhs(&m, 1.0, t).unwrap().is_finite());
        }
    }
}
