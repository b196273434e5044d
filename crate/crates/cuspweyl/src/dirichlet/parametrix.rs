//! φ(s) = s^{−κd/2}(L_0(s) + L_1(s)/s + … ) and the P1/P2 properties.

use num_complex::Complex64;

use super::series::{ExponentialDirichletSeries, ABSCISSA_MARGIN};
use crate::error::{Error, Result};

/// Asymptotic expansion of a scattering determinant for Re s > δ_g.
/// δ_g is configuration: nothing in scope computes it.
#[derive(Debug, Clone)]
pub struct ParametrixExpansion {
    pub kappa: u32,
    pub d: u32,
    pub series: Vec<ExponentialDirichletSeries>,
    pub truncation: usize,
    pub delta_g: f64,
}

impl ParametrixExpansion {
    pub fn new(kappa: u32, d: u32, series: Vec<ExponentialDirichletSeries>, delta_g: f64) -> Result<Self> {
        if series.is_empty() {
            return Err(Error::Precondition("at least L_0 is required".into()));
        }
        if series.iter().any(|l| !l.is_finite()) {
            return Err(Error::Precondition("parametrix series must be finite truncations".into()));
        }
        let truncation = series.len() - 1;
        Ok(ParametrixExpansion { kappa, d, series, truncation, delta_g })
    }

    /// Exponent κd/2 of the power prefactor.
    pub fn power(&self) -> f64 {
        self.kappa as f64 * self.d as f64 / 2.0
    }

    fn check(&self, s: Complex64) -> Result<()> {
        if !(s.re > self.delta_g + ABSCISSA_MARGIN) {
            return Err(Error::BelowAbscissa { sigma: s.re, abscissa: self.delta_g });
        }
        Ok(())
    }

    /// Σ_{j≤N} L_j(s) s^{−j} and its s-derivative.
    fn bracket(&self, s: Complex64) -> Result<(Complex64, Complex64)> {
        let mut v = Complex64::new(0.0, 0.0);
        let mut dv = Complex64::new(0.0, 0.0);
        for (j, l) in self.series.iter().take(self.truncation + 1).enumerate() {
            let sj = s.powi(-(j as i32));
            let lv = l.evaluate(s)?.value;
            let ld = l.derivative(s)?;
            v += lv * sj;
            dv += ld * sj - lv * sj * (j as f64) / s;
        }
        Ok((v, dv))
    }

    /// φ′/φ(s).
    pub fn log_derivative(&self, s: Complex64) -> Result<Complex64> {
        self.check(s)?;
        let (v, dv) = self.bracket(s)?;
        Ok(dv / v - self.power() / s)
    }
}

/// s^{−κd/2}·Σ_{j≤N} L_j(s)/s^j with the principal branch of the power.
pub fn parametrix_eval(p: &ParametrixExpansion, s: Complex64) -> Result<Complex64> {
    p.check(s)?;
    let (v, _) = p.bracket(s)?;
    Ok(s.powf(-p.power()) * v)
}

/// First term with a nonzero stored coefficient, as (a*, ℓ*).
pub fn leading_term(l0: &ExponentialDirichletSeries) -> Option<(Complex64, f64)> {
    l0.terms()
        .iter()
        .find(|(a, _)| *a != Complex64::new(0.0, 0.0))
        .map(|(a, e)| (*a, e.length()))
}

/// One line of the P1/P2 table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRow {
    pub t: f64,
    pub re_log_derivative: f64,
    pub predicted_p1: f64,
    pub log_abs: f64,
    pub predicted_p2: f64,
}

impl ProfileRow {
    pub fn residual_p1(&self) -> f64 {
        self.re_log_derivative - self.predicted_p1
    }

    pub fn residual_p2(&self) -> f64 {
        self.log_abs - self.predicted_p2
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub b: f64,
    pub rows: Vec<ProfileRow>,
    /// sup |residual_P1|·|s| over the grid.
    pub sup_scaled_p1: f64,
    /// sup |residual_P2|·|s| over the grid.
    pub sup_scaled_p2: f64,
}

/// Tabulates Re φ′/φ and log|φ| on Re s = b against the P1/P2 predictions
///
/// Re φ′/φ ≈ −ℓ* + Re L̃₀,  log|φ| ≈ −(κd/2) log|s| − bℓ* + log|a*| + Re L̃₁,
///
/// where L_0 = a* e^{−sℓ*}(1 + M), L̃₀ = M′/(1 + M) and L̃₁ = log(1 + M).
/// The residuals should be O(1/|s|).
pub fn p1_p2_profile(p: &ParametrixExpansion, b: f64, t_grid: &[f64]) -> Result<Profile> {
    let (a_star, l_star) = leading_term(&p.series[0])
        .ok_or_else(|| Error::Degenerate("L_0 vanishes identically".into()))?;
    let rest: Vec<(Complex64, f64)> = p.series[0]
        .terms()
        .iter()
        .map(|(a, e)| (*a / a_star, e.length() - l_star))
        .filter(|(_, l)| *l > 0.0)
        .collect();
    let mut rows = Vec::with_capacity(t_grid.len());
    let (mut sup1, mut sup2) = (0.0f64, 0.0f64);
    for &t in t_grid {
        let s = Complex64::new(b, t);
        let phi = parametrix_eval(p, s)?;
        let ld = p.log_derivative(s)?;
        let mut m = Complex64::new(0.0, 0.0);
        let mut dm = Complex64::new(0.0, 0.0);
        for (a, l) in &rest {
            let e = *a * (-s * *l).exp();
            m += e;
            dm -= e * *l;
        }
        let one_m = Complex64::new(1.0, 0.0) + m;
        let row = ProfileRow {
            t,
            re_log_derivative: ld.re,
            predicted_p1: -l_star + (dm / one_m).re,
            log_abs: phi.norm().ln(),
            predicted_p2: -p.power() * s.norm().ln() - b * l_star + a_star.norm().ln() + one_m.ln().re,
        };
        sup1 = sup1.max(row.residual_p1().abs() * s.norm());
        sup2 = sup2.max(row.residual_p2().abs() * s.norm());
        rows.push(row);
    }
    Ok(Profile { b, rows, sup_scaled_p1: sup1, sup_scaled_p2: sup2 })
}
