//! Volume densities Θ(r) = (j(r)/r)^d of the exponential map.

use serde::Serialize;

use super::profile::RadialCurvatureProfile;
use crate::error::{Error, Result};

/// (sinh r/r)^d, the density of hyperbolic space.
pub fn theta_hyperbolic(r: f64, d: usize) -> f64 {
    let r = r.abs();
    let q = if r < 1e-3 {
        let r2 = r * r;
        1.0 + r2 / 6.0 + r2 * r2 / 120.0
    } else {
        r.sinh() / r
    };
    q.powi(d as i32)
}

/// Θ on a uniform radial grid. The Jacobi field is stored as
/// j = R·sinh r, so R ≡ 1 exactly in constant curvature −1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaSolution {
    pub d: usize,
    pub grid: Vec<f64>,
    pub theta: Vec<f64>,
    pub jacobi: Vec<f64>,
    /// R = j/sinh r.
    pub ratio: Vec<f64>,
    /// R′.
    pub ratio_derivative: Vec<f64>,
    /// R″, from the differential equation.
    pub ratio_second_derivative: Vec<f64>,
}

impl ThetaSolution {
    pub fn step(&self) -> f64 {
        self.grid[1] - self.grid[0]
    }

    /// Θ′/Θ + d/r = d·j′/j, the divergence of ∂/∂r.
    pub fn divergence(&self, i: usize) -> f64 {
        let r = self.grid[i];
        let (sh, ch) = (r.sinh(), r.cosh());
        let j = self.ratio[i] * sh;
        let dj = self.ratio_derivative[i] * sh + self.ratio[i] * ch;
        self.d as f64 * dj / j
    }
}

/// Default number of grid intervals per unit radius.
pub const DEFAULT_DENSITY: usize = 200;

/// Radius at which the integration switches from the deviation form to
/// the ratio form.
const SWITCH_RADIUS: f64 = 0.5;
const NEAR_SUBSTEPS: usize = 16;

fn rk4_step(f: impl Fn(f64, [f64; 2]) -> [f64; 2], r: f64, y: [f64; 2], h: f64) -> [f64; 2] {
    let k1 = f(r, y);
    let k2 = f(r + h / 2.0, [y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]]);
    let k3 = f(r + h / 2.0, [y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]]);
    let k4 = f(r + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
    [
        y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ]
}

/// Solves j″ + K j = 0, j(0) = 0, j′(0) = 1 with classical fourth-order
/// Runge–Kutta on a uniform grid.
///
/// Near the origin the unknown is the deviation p = j − sinh r, which obeys
/// the regular equation p″ + K p = −(1 + K) sinh r. Beyond
/// [`SWITCH_RADIUS`] it is the ratio R = j/sinh r, which obeys
/// R″ + 2 coth(r) R′ + (1 + K) R = 0 and keeps its relative accuracy when
/// j is small compared with sinh r. Both forms are exact when K ≡ −1.
pub fn theta_radial(profile: &RadialCurvatureProfile, d: usize) -> Result<ThetaSolution> {
    theta_radial_with(profile, d, DEFAULT_DENSITY)
}

pub fn theta_radial_with(profile: &RadialCurvatureProfile, d: usize, per_unit: usize) -> Result<ThetaSolution> {
    theta_on_intervals(profile, d, ((profile.r_max * per_unit as f64).ceil() as usize).max(16))
}

/// Θ on n equal intervals of [0, r_max].
pub fn theta_on_intervals(profile: &RadialCurvatureProfile, d: usize, n: usize) -> Result<ThetaSolution> {
    if d == 0 {
        return Err(Error::UnsupportedDimension(d));
    }
    if n < 2 {
        return Err(Error::Precondition("need at least two intervals".into()));
    }
    let h = profile.r_max / n as f64;
    let deviation = |r: f64, y: [f64; 2]| -> [f64; 2] {
        let k = profile.curvature(r);
        [y[1], -k * y[0] - (1.0 + k) * r.sinh()]
    };
    let ratio_form = |r: f64, y: [f64; 2]| -> [f64; 2] {
        let k = profile.curvature(r);
        [y[1], -2.0 * y[1] / r.tanh() - (1.0 + k) * y[0]]
    };
    let mut grid = vec![0.0];
    let mut ratio = vec![1.0];
    let mut dratio = vec![0.0];
    let mut p = [0.0, 0.0];
    let mut switched = false;
    for i in 0..n {
        let r = i as f64 * h;
        let s = r + h;
        let (q, dq) = if switched {
            let y = rk4_step(ratio_form, r, [ratio[i], dratio[i]], h);
            (y[0], y[1])
        } else {
            // Substeps keep the start-up error, which does not vanish at
            // the origin after division by sinh r, below rounding level.
            let hs = h / NEAR_SUBSTEPS as f64;
            for m in 0..NEAR_SUBSTEPS {
                p = rk4_step(deviation, r + m as f64 * hs, p, hs);
            }
            let (sh, ch) = (s.sinh(), s.cosh());
            switched = s >= SWITCH_RADIUS;
            (1.0 + p[0] / sh, (p[1] * sh - p[0] * ch) / (sh * sh))
        };
        if !(q > 0.0) {
            // Linear interpolation of the zero of R, hence of j.
            let r0 = r + h * ratio[i] / (ratio[i] - q);
            return Err(Error::ConjugatePoint { r: r0 });
        }
        grid.push(s);
        ratio.push(q);
        dratio.push(dq);
    }
    let jacobi: Vec<f64> = grid.iter().zip(&ratio).map(|(r, q)| q * r.sinh()).collect();
    let theta = grid
        .iter()
        .zip(&ratio)
        .map(|(&r, &q)| theta_hyperbolic(r, d) * q.powi(d as i32))
        .collect();
    let second = grid
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let k = profile.curvature(r);
            if i == 0 {
                -(1.0 + k) / 3.0
            } else {
                -2.0 * dratio[i] / r.tanh() - (1.0 + k) * ratio[i]
            }
        })
        .collect();
    Ok(ThetaSolution { d, grid, theta, jacobi, ratio, ratio_derivative: dratio, ratio_second_derivative: second })
}
