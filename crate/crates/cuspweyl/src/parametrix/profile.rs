//! Rotationally symmetric model metrics dr² + j(r)²dθ² and their Jacobi
//! fields.

use std::fmt;
use std::sync::Arc;

use crate::analysis::mollifier::bump;
use crate::error::{Error, Result};

/// Sectional curvature K(r) on [0, r_max] with declared bounds.
#[derive(Clone)]
pub struct RadialCurvatureProfile {
    pub name: String,
    curvature: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub r_max: f64,
    pub pinch: (f64, f64),
}

impl fmt::Debug for RadialCurvatureProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialCurvatureProfile")
            .field("name", &self.name)
            .field("r_max", &self.r_max)
            .field("pinch", &self.pinch)
            .finish()
    }
}

impl RadialCurvatureProfile {
    /// Checks the declared bounds on a fine sample of [0, r_max] and the
    /// vanishing of K′(0).
    pub fn new(
        name: impl Into<String>,
        curvature: impl Fn(f64) -> f64 + Send + Sync + 'static,
        r_max: f64,
        pinch: (f64, f64),
    ) -> Result<Self> {
        if !(r_max > 0.0) || !(pinch.0 <= pinch.1) {
            return Err(Error::Precondition("need r_max > 0 and K_min ≤ K_max".into()));
        }
        // A smooth rotationally symmetric metric has K even in r.
        let slope = (curvature(1e-4) - curvature(0.0)) / 1e-4;
        if slope.abs() > 1e-3 {
            return Err(Error::Precondition(format!(
                "K′(0) ≈ {slope:.3e}: the metric is not smooth at the pole"
            )));
        }
        for i in 0..=2000 {
            let r = r_max * i as f64 / 2000.0;
            let k = curvature(r);
            if !k.is_finite() {
                return Err(Error::NotANumber(format!("K({r})")));
            }
            if k < pinch.0 - 1e-12 || k > pinch.1 + 1e-12 {
                return Err(Error::Precondition(format!(
                    "K({r}) = {k} lies outside the declared bounds [{}, {}]",
                    pinch.0, pinch.1
                )));
            }
        }
        Ok(RadialCurvatureProfile { name: name.into(), curvature: Arc::new(curvature), r_max, pinch })
    }

    pub fn constant(k: f64, r_max: f64) -> Result<Self> {
        Self::new(format!("K={k}"), move |_| k, r_max, (k, k))
    }

    /// K = −1 − ε·bump((r − center)/width).
    pub fn hyperbolic_bump(eps: f64, center: f64, width: f64, r_max: f64) -> Result<Self> {
        let lo = -1.0 - eps.max(0.0);
        let hi = -1.0 - eps.min(0.0);
        Self::new(
            format!("K=-1-{eps}*bump"),
            move |r| -1.0 - eps * bump((r - center) / width),
            r_max,
            (lo, hi),
        )
    }

    /// K = −1 − 3(1 + tanh(r² − 4))/2, pinched in [−4, −1].
    pub fn pinched(r_max: f64) -> Result<Self> {
        Self::new("pinched", |r: f64| -1.0 - 1.5 * (1.0 + (r * r - 4.0).tanh()), r_max, (-4.0, -1.0))
    }

    pub fn curvature(&self, r: f64) -> f64 {
        (self.curvature)(r)
    }

    /// Named profiles for configuration files.
    pub fn named(name: &str, r_max: f64) -> Result<Self> {
        match name {
            "hyperbolic" => Self::constant(-1.0, r_max),
            "flat" => Self::constant(0.0, r_max),
            "sphere" => Self::constant(1.0, r_max),
            "pinched" => Self::pinched(r_max),
            "bump" => Self::hyperbolic_bump(0.1, 1.5, 1.0, r_max),
            other => Err(Error::Precondition(format!("unknown curvature profile '{other}'"))),
        }
    }
}
