//! The family M_α(s) = s₊^α/Γ(α+1) with M_{α−1} = M_α′.
//!
//! Pointwise values exist only for α > −1. Lower indices are reached through
//! the pairing ⟨M_{α−m}, g⟩ = (−1)^m ∫ M_α g^{(m)}, which is the only way they
//! are ever used.

use serde::{Deserialize, Serialize};

use super::mollifier::Mollifier;
use super::quad::{integrate_panels, integrate_with, Endpoint, QuadratureSpec};
use super::special::gamma_real;
use crate::error::{Error, Result};

/// Index α together with the number m of integrations by parts; the
/// distribution represented is M_{α−m}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MAlphaIndex {
    pub alpha: f64,
    pub reduction_order: usize,
}

impl MAlphaIndex {
    pub fn pointwise(alpha: f64) -> Self {
        MAlphaIndex {
            alpha,
            reduction_order: 0,
        }
    }

    pub fn reduced(alpha: f64, reduction_order: usize) -> Self {
        MAlphaIndex {
            alpha,
            reduction_order,
        }
    }

    /// Smallest reduction that represents M_{index} with a pointwise kernel.
    pub fn for_index(index: f64) -> Self {
        let mut m = 0usize;
        while index + (m as f64) <= -1.0 {
            m += 1;
        }
        MAlphaIndex {
            alpha: index + m as f64,
            reduction_order: m,
        }
    }

    pub fn effective(&self) -> f64 {
        self.alpha - self.reduction_order as f64
    }
}

/// A real function with derivatives available up to `max_order`.
pub trait SmoothFunction: Sync {
    fn derivative(&self, n: usize, s: f64) -> f64;
    fn max_order(&self) -> usize;
    /// Right end of the support on [0, ∞); may be infinite.
    fn support_end(&self) -> f64;
    /// Interior breakpoints for oscillatory integrands, increasing, inside
    /// (0, support_end).
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// M_α(s) for α > −1.
pub fn m_alpha_eval(idx: MAlphaIndex, s: f64) -> Result<f64> {
    if idx.reduction_order != 0 || !(idx.alpha > -1.0) {
        return Err(Error::Mode {
            index: idx.effective(),
        });
    }
    if s <= 0.0 {
        return Ok(0.0);
    }
    if idx.alpha == 0.0 {
        return Ok(1.0);
    }
    Ok(s.powf(idx.alpha) / gamma_real(idx.alpha + 1.0)?)
}

/// ⟨M_{α−m}, g⟩ = (−1)^m ∫₀^∞ M_α(s) g^{(m)}(s) ds.
pub fn m_alpha_pair<G: SmoothFunction + ?Sized>(
    idx: MAlphaIndex,
    g: &G,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let alpha = idx.alpha;
    let m = idx.reduction_order;
    if !(alpha > -1.0) {
        return Err(Error::Precondition(format!(
            "pairing kernel needs alpha > -1, got {alpha}"
        )));
    }
    if g.max_order() < m {
        return Err(Error::Precondition(format!(
            "test function supplies {} derivatives, {m} needed",
            g.max_order()
        )));
    }
    let norm = gamma_real(alpha + 1.0)?;
    let left = if alpha.fract() == 0.0 && alpha >= 0.0 {
        Endpoint::Regular
    } else {
        Endpoint::Power(alpha)
    };
    let f = |s: f64| {
        if s <= 0.0 {
            return 0.0;
        }
        let k = if alpha == 0.0 { 1.0 } else { s.powf(alpha) };
        k * g.derivative(m, s)
    };
    let end = g.support_end();
    let cuts: Vec<f64> = g.breakpoints().into_iter().filter(|&x| x > 0.0 && x < end).collect();
    let first = cuts.first().copied().unwrap_or(end);
    let mut v = integrate_with(f, 0.0, first, left, Endpoint::Regular, spec)
        .into_result("M_alpha pairing")?;
    if let Some(&last) = cuts.last() {
        v += integrate_panels(f, &cuts, spec).into_result("M_alpha pairing")?;
        v += integrate_with(f, last, end, Endpoint::Regular, Endpoint::Regular, spec)
            .into_result("M_alpha pairing")?;
    }
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * v / norm)
}

/// exp(−((s − c)/w)²), derivatives through Hermite polynomials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianBump {
    pub center: f64,
    pub width: f64,
}

impl SmoothFunction for GaussianBump {
    fn derivative(&self, n: usize, s: f64) -> f64 {
        let x = (s - self.center) / self.width;
        let h = match n {
            0 => 1.0,
            1 => 2.0 * x,
            2 => 4.0 * x * x - 2.0,
            3 => 8.0 * x * x * x - 12.0 * x,
            4 => 16.0 * x.powi(4) - 48.0 * x * x + 12.0,
            _ => panic!("Gaussian derivatives are provided up to order 4"),
        };
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        sign * h * (-x * x).exp() / self.width.powi(n as i32)
    }

    fn max_order(&self) -> usize {
        4
    }

    fn support_end(&self) -> f64 {
        f64::INFINITY
    }
}

/// Smooth taper equal to 1 on [0, w/2] and 0 beyond w.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Taper {
    pub width: f64,
    pub mollifier: Mollifier,
}

impl Taper {
    pub fn new(width: f64) -> Self {
        Taper {
            width,
            mollifier: Mollifier::default(),
        }
    }
}

impl SmoothFunction for Taper {
    fn derivative(&self, n: usize, s: f64) -> f64 {
        self.mollifier.derivative(n, s / self.width) / self.width.powi(n as i32)
    }

    fn max_order(&self) -> usize {
        3
    }

    fn support_end(&self) -> f64 {
        self.width
    }
}
