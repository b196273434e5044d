//! The test function ψ(t) = (1/π)·sin(Tt)/t·ρ(At) and its Fourier transform
//! ψ̂(r) = ∫ ψ(t) e^{−irt} dt.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::mollifier::Mollifier;
use super::quad::{integrate_panels, QuadratureSpec};
use crate::error::{Error, Result};

/// Derivatives of sin(x)/x for n = 0..=3.
pub fn sinc_derivative(n: usize, x: f64) -> f64 {
    if x.abs() < 1.0 {
        let mut sum = 0.0;
        // Term j: (−1)^j x^{2j}/(2j+1)!, differentiated n times.
        let mut fact = 1.0; // (2j+1)!
        for j in 0..18usize {
            if j > 0 {
                fact *= (2 * j) as f64 * (2 * j + 1) as f64;
            }
            let p = 2 * j;
            if p < n {
                continue;
            }
            let mut coef = 1.0;
            for i in 0..n {
                coef *= (p - i) as f64;
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let pow = x.powi((p - n) as i32);
            sum += sign * coef * pow / fact;
        }
        return sum;
    }
    let (s, c) = x.sin_cos();
    match n {
        0 => s / x,
        1 => (x * c - s) / (x * x),
        2 => (-x * x * s - 2.0 * x * c + 2.0 * s) / (x * x * x),
        3 => (-x * x * x * c + 3.0 * x * x * s + 6.0 * x * c - 6.0 * s) / (x * x * x * x),
        _ => panic!("sinc derivatives are provided up to order 3"),
    }
}

/// ψ with frequency cutoff T and mollifier scale A.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestFunctionPsi {
    pub cutoff_t: f64,
    pub scale_a: f64,
    pub mollifier: Mollifier,
}

impl TestFunctionPsi {
    pub fn new(cutoff_t: f64, scale_a: f64) -> Result<Self> {
        Self::with_mollifier(cutoff_t, scale_a, Mollifier::default())
    }

    pub fn with_mollifier(cutoff_t: f64, scale_a: f64, mollifier: Mollifier) -> Result<Self> {
        if !(cutoff_t > 0.0) || !(scale_a > 0.0) {
            return Err(Error::Precondition(format!(
                "need T > 0 and A > 0, got T = {cutoff_t}, A = {scale_a}"
            )));
        }
        Ok(TestFunctionPsi {
            cutoff_t,
            scale_a,
            mollifier,
        })
    }

    /// Half-width of the support, 1/A.
    pub fn support(&self) -> f64 {
        1.0 / self.scale_a
    }

    /// ψ(t).
    pub fn eval(&self, t: f64) -> f64 {
        self.derivative(0, t)
    }

    /// ψ^{(n)}(t) for n = 0..=3 by the Leibniz rule.
    pub fn derivative(&self, n: usize, t: f64) -> f64 {
        let a = self.scale_a;
        if t.abs() * a >= 1.0 {
            return 0.0;
        }
        let tt = self.cutoff_t;
        let x = tt * t;
        // s^{(j)}(t) = T^{j+1} σ^{(j)}(Tt) with σ = sin x / x.
        let s = |j: usize| tt.powi(j as i32 + 1) * sinc_derivative(j, x);
        let r = |j: usize| a.powi(j as i32) * self.mollifier.derivative(j, a * t);
        let binom = [[1.0, 0.0, 0.0, 0.0], [1.0, 1.0, 0.0, 0.0], [1.0, 2.0, 1.0, 0.0], [1.0, 3.0, 3.0, 1.0]];
        let mut sum = 0.0;
        for j in 0..=n {
            let rj = r(j);
            if rj != 0.0 {
                sum += binom[n][j] * s(n - j) * rj;
            }
        }
        sum / PI
    }

    /// G(x) = ∫₀¹ sin(xu)/u·ρ(u) du, the building block of ψ̂.
    fn g(&self, x: f64, spec: &QuadratureSpec) -> Result<f64> {
        if x == 0.0 {
            return Ok(0.0);
        }
        let m = self.mollifier;
        let f = |u: f64| x * sinc_derivative(0, x * u) * m.eval(u);
        let panels = ((x.abs() / PI).ceil() as usize).clamp(1, 100_000);
        let mut points: Vec<f64> = (0..=panels).map(|i| i as f64 / panels as f64).collect();
        points.push(m.flat_radius);
        points.sort_by(f64::total_cmp);
        points.dedup();
        integrate_panels(f, &points, spec).into_result("mollified sine integral")
    }

    /// ψ̂(r) = [G((T+r)/A) + G((T−r)/A)]/π.
    pub fn hat(&self, r: f64) -> Result<f64> {
        self.hat_with(r, &QuadratureSpec::default().with_abs(1e-13))
    }

    pub fn hat_with(&self, r: f64, spec: &QuadratureSpec) -> Result<f64> {
        let a = self.scale_a;
        let t = self.cutoff_t;
        let g1 = self.g((t + r.abs()) / a, spec)?;
        let g2 = self.g((t - r.abs()) / a, spec)?;
        Ok((g1 + g2) / PI)
    }

    /// ψ̂ at an imaginary argument iκ: 2∫₀^{1/A} ψ(t) cosh(κt) dt.
    pub fn hat_imaginary(&self, kappa: f64) -> Result<f64> {
        let spec = QuadratureSpec::default().with_abs(1e-13);
        let panels = ((self.cutoff_t / (self.scale_a * PI)).ceil() as usize).clamp(1, 100_000);
        let len = self.support();
        let points: Vec<f64> = (0..=panels).map(|i| len * i as f64 / panels as f64).collect();
        let v = integrate_panels(|t: f64| 2.0 * self.eval(t) * (kappa * t).cosh(), &points, &spec)
            .into_result("psi transform at imaginary argument")?;
        Ok(v)
    }

    /// Direct quadrature of ∫ψ(t)cos(rt)dt, independent of the G-splitting.
    pub fn hat_direct(&self, r: f64, spec: &QuadratureSpec) -> Result<f64> {
        let len = self.support();
        let panels = (((self.cutoff_t + r.abs()) * len / PI).ceil() as usize).clamp(1, 100_000);
        let points: Vec<f64> = (0..=panels).map(|i| len * i as f64 / panels as f64).collect();
        integrate_panels(|t: f64| 2.0 * self.eval(t) * (r * t).cos(), &points, spec)
            .into_result("psi transform")
    }
}
