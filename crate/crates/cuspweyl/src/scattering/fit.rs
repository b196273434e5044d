//! Least-squares fit of counting data to a T^{d+1} + b T log T + c T.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest accepted condition number of the column-scaled design matrix.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeylFitResult {
    pub d: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Euclidean norm of the residual vector.
    pub residual_norm: f64,
    pub condition: f64,
    pub samples: usize,
}

impl WeylFitResult {
    pub fn model(&self, t: f64) -> f64 {
        self.a * t.powi(self.d as i32 + 1) + self.b * t * t.ln() + self.c * t
    }
}

pub fn weyl_fit(samples: &[(f64, f64)], d: usize) -> Result<WeylFitResult> {
    weyl_fit_weighted(samples, d, |_| 1.0)
}

/// Row weight log T/T^d, the inverse of the remainder scale T^d/log T.
pub fn remainder_weight(d: usize) -> impl Fn(f64) -> f64 {
    move |t: f64| t.ln() / t.powi(d as i32)
}

/// Weighted least squares: row i is multiplied by w(T_i). The residual
/// norm is that of the weighted rows.
pub fn weyl_fit_weighted(samples: &[(f64, f64)], d: usize, w: impl Fn(f64) -> f64) -> Result<WeylFitResult> {
    if samples.len() < 10 {
        return Err(Error::Precondition(format!("need at least 10 samples, got {}", samples.len())));
    }
    if samples.iter().any(|&(t, v)| !(t > 1.0) || !v.is_finite()) {
        return Err(Error::Precondition("samples need T > 1 and finite values".into()));
    }
    let lo = samples.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let hi = samples.iter().map(|s| s.0).fold(0.0, f64::max);
    if hi < 10.0 * lo {
        return Err(Error::Precondition(format!("samples span [{lo}, {hi}], less than a decade")));
    }
    let n = samples.len();
    let basis = |t: f64| [t.powi(d as i32 + 1), t * t.ln(), t];
    let scale: Vec<f64> = (0..3).map(|j| basis(hi)[j].abs()).collect();
    let a = DMatrix::from_fn(n, 3, |i, j| basis(samples[i].0)[j] / scale[j] * w(samples[i].0));
    let y = DVector::from_iterator(n, samples.iter().map(|s| s.1 * w(s.0)));
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let condition = sv.max() / sv.min();
    if !(condition < MAX_CONDITION) {
        return Err(Error::Conditioning { condition });
    }
    let q = svd.solve(&y, 0.0).map_err(|e| Error::Degenerate(e.to_string()))?;
    let residual_norm = (&a * &q - &y).norm();
    Ok(WeylFitResult {
        d,
        a: q[0] / scale[0],
        b: q[1] / scale[1],
        c: q[2] / scale[2],
        residual_norm,
        condition,
        samples: n,
    })
}

/// Log-spaced sample heights in [lo, hi].
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}
