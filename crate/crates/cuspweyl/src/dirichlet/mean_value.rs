//! ∫₀^T Re L(b + it) dt for L ∈ 𝒟⁰_b, bounded independently of T.

use super::series::ClassicalDirichletSeries;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanValue {
    pub value: f64,
    /// Σ|c_k|λ_k^{−b} / log λ_0.
    pub bound: f64,
}

/// Σ c_k λ_k^{−b} sin(T log λ_k)/log λ_k, the exact value of ∫₀^T Re L(b+it) dt.
pub fn mean_value_integral(l: &ClassicalDirichletSeries, b: f64, t: f64) -> Result<MeanValue> {
    if !l.to_exponential().is_finite() {
        return Err(Error::Precondition("mean value needs a finite series".into()));
    }
    if !l.in_d0() {
        return Err(Error::ClassMembership(
            "the series must decay as Re s grows (λ_0 > 1)".into(),
        ));
    }
    if !(b > l.abscissa()) {
        return Err(Error::BelowAbscissa { sigma: b, abscissa: l.abscissa() });
    }
    let mut value = 0.0;
    let mut mass = 0.0;
    let mut log0 = f64::INFINITY;
    for (c, lam) in l.terms() {
        let lg = lam.ln();
        log0 = log0.min(lg);
        let w = c * lam.powf(-b);
        value += w * (t * lg).sin() / lg;
        mass += w.abs();
    }
    let bound = if mass == 0.0 { 0.0 } else { mass / log0 };
    Ok(MeanValue { value, bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::quad::{integrate, QuadratureSpec};
    use num_complex::Complex64;
    use std::f64::consts::{LN_2, PI};

    #[test]
    fn full_period_vanishes() {
        let l = ClassicalDirichletSeries::new(vec![(1.0, 2.0)]).unwrap();
        let v = mean_value_integral(&l, 0.0, 2.0 * PI / LN_2).unwrap();
        assert!(v.value.abs() < 1e-14);
    }

    #[test]
    fn quarter_period_matches_quadrature() {
        let l = ClassicalDirichletSeries::new(vec![(1.0, 2.0)]).unwrap();
        let t = PI / (2.0 * LN_2);
        let v = mean_value_integral(&l, 0.0, t).unwrap();
        assert!((v.value - 1.0 / LN_2).abs() < 1e-14);
        let q = integrate(
            |x: f64| l.evaluate(Complex64::new(0.0, x)).unwrap().value.re,
            0.0,
            t,
            &QuadratureSpec::default(),
        );
        assert!((q.value - v.value).abs() < 1e-10);
    }

    #[test]
    fn membership_is_checked() {
        let l = ClassicalDirichletSeries::new(vec![(1.0, 1.0), (1.0, 3.0)]).unwrap();
        assert!(matches!(mean_value_integral(&l, 0.0, 1.0), Err(Error::ClassMembership(_))));
    }
}
