//! Covolume-one lattices in ℝ^d and the renormalized constant γ(Λ) defined by
//! Σ_{0<|γ|≤R} |γ|^{−d} = S_d (log R + γ(Λ)) + o(1), S_d = 2π^{d/2}/Γ(d/2).

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::mollifier::Mollifier;
use crate::analysis::quad::{integrate, QuadratureSpec};
use crate::analysis::special::gamma_real;
use crate::error::{Error, Result};

/// Most lattice points a bounded box enumeration may visit.
pub const ENUMERATION_LIMIT: f64 = 1e8;

/// A full-rank lattice; the rows of `basis` are the generators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    pub basis: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum LatticeJson {
    Wrapped { basis: Vec<Vec<f64>> },
    Bare(Vec<Vec<f64>>),
}

impl Lattice {
    pub fn new(basis: Vec<Vec<f64>>) -> Result<Self> {
        let d = basis.len();
        if d == 0 || basis.iter().any(|r| r.len() != d) {
            return Err(Error::Precondition("basis must be a square matrix".into()));
        }
        if basis.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NotANumber("lattice basis".into()));
        }
        let l = Lattice { basis };
        let det = l.matrix().determinant().abs();
        if (det - 1.0).abs() > 1e-12 {
            return Err(Error::Precondition(format!("covolume must be 1, got {det}")));
        }
        Ok(l)
    }

    /// ℤ^d.
    pub fn integer(d: usize) -> Self {
        let basis = (0..d)
            .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Lattice { basis }
    }

    /// The hexagonal lattice scaled to covolume 1.
    pub fn hexagonal() -> Self {
        let s = (2.0 / 3f64.sqrt()).sqrt();
        Lattice { basis: vec![vec![s, 0.0], vec![0.5 * s, 0.5 * 3f64.sqrt() * s]] }
    }

    /// Accepts `{"basis": [[…], …]}` or a bare matrix.
    pub fn from_json(text: &str) -> Result<Self> {
        let basis = match serde_json::from_str::<LatticeJson>(text)? {
            LatticeJson::Wrapped { basis } => basis,
            LatticeJson::Bare(b) => b,
        };
        Lattice::new(basis)
    }

    /// Named lattices: Z1, Z2, Z3, hex.
    pub fn named(name: &str) -> Result<Self> {
        match name {
            "Z1" => Ok(Lattice::integer(1)),
            "Z2" => Ok(Lattice::integer(2)),
            "Z3" => Ok(Lattice::integer(3)),
            "hex" => Ok(Lattice::hexagonal()),
            other => Err(Error::Precondition(format!("unknown lattice '{other}'"))),
        }
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    fn matrix(&self) -> DMatrix<f64> {
        let d = self.dimension();
        DMatrix::from_fn(d, d, |i, j| self.basis[i][j])
    }

    /// The same lattice with basis B·Q for an orthogonal Q.
    pub fn transformed(&self, q: &DMatrix<f64>) -> Result<Self> {
        let m = self.matrix() * q;
        Lattice::new(m.row_iter().map(|r| r.iter().copied().collect()).collect())
    }

    /// The same lattice with basis U·B for a unimodular integer U.
    pub fn rebased(&self, u: &DMatrix<f64>) -> Result<Self> {
        let m = u * self.matrix();
        Lattice::new(m.row_iter().map(|r| r.iter().copied().collect()).collect())
    }

    /// Dual lattice, rows of B^{−T}.
    pub fn dual(&self) -> Result<Self> {
        let inv = self
            .matrix()
            .try_inverse()
            .ok_or_else(|| Error::Degenerate("singular basis".into()))?;
        let m = inv.transpose();
        Lattice::new(m.row_iter().map(|r| r.iter().copied().collect()).collect())
    }

    /// Coefficient bounds |n_i| ≤ N_i enclosing the ball of radius R.
    fn box_bounds(&self, r: f64) -> Result<Vec<i64>> {
        let g = self.matrix() * self.matrix().transpose();
        let gi = g
            .try_inverse()
            .ok_or_else(|| Error::Degenerate("singular Gram matrix".into()))?;
        let bounds: Vec<i64> = (0..self.dimension()).map(|i| (r * gi[(i, i)].sqrt()).floor() as i64).collect();
        let count: f64 = bounds.iter().map(|&n| (2 * n + 1) as f64).product();
        if count > ENUMERATION_LIMIT {
            return Err(Error::Resource(format!(
                "enumerating radius {r} visits {count:e} points (limit {ENUMERATION_LIMIT:e})"
            )));
        }
        Ok(bounds)
    }

    /// Lengths of all nonzero lattice vectors with |γ| ≤ R.
    pub fn norms_within(&self, r: f64) -> Result<Vec<f64>> {
        let d = self.dimension();
        let bounds = self.box_bounds(r)?;
        let basis = &self.basis;
        let n0 = bounds[0];
        // Parallel over the first coefficient, odometer over the rest.
        let mut out: Vec<f64> = (-n0..=n0)
            .into_par_iter()
            .flat_map_iter(|first| {
                let mut local = Vec::new();
                let mut idx: Vec<i64> = bounds.iter().map(|&b| -b).collect();
                idx[0] = first;
                loop {
                    let mut v = vec![0.0; d];
                    for (i, &n) in idx.iter().enumerate() {
                        if n != 0 {
                            for j in 0..d {
                                v[j] += n as f64 * basis[i][j];
                            }
                        }
                    }
                    let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                    if len > 0.0 && len <= r {
                        local.push(len);
                    }
                    let mut k = d - 1;
                    loop {
                        if k == 0 {
                            return local.into_iter();
                        }
                        if idx[k] < bounds[k] {
                            idx[k] += 1;
                            break;
                        }
                        idx[k] = -bounds[k];
                        k -= 1;
                    }
                }
            })
            .collect();
        out.sort_by(f64::total_cmp);
        Ok(out)
    }

    /// Shortest nonzero vector length.
    pub fn shortest(&self) -> Result<f64> {
        let mut r = self.basis.iter().map(|b| b.iter().map(|x| x * x).sum::<f64>().sqrt()).fold(f64::INFINITY, f64::min);
        r *= 1.0 + 1e-12;
        Ok(self.norms_within(r)?.first().copied().unwrap_or(r))
    }
}

/// S_d = 2π^{d/2}/Γ(d/2), the area of the unit sphere in ℝ^d.
pub fn sphere_area(d: usize) -> f64 {
    2.0 * PI.powf(d as f64 / 2.0) / gamma_real(d as f64 / 2.0).expect("d ≥ 1")
}

/// Σ_{0<|γ|≤R} |γ|^{−d} by exact enumeration.
pub fn lattice_shell_sum(l: &Lattice, r: f64) -> Result<f64> {
    if !(r >= l.shortest()?) {
        return Err(Error::Precondition(format!("radius {r} is below the shortest vector")));
    }
    let d = l.dimension() as i32;
    Ok(l.norms_within(r)?.iter().rev().map(|x| x.powi(-d)).sum())
}

/// γ(Λ) with the spread of the last two grid values as error estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaEstimate {
    pub value: f64,
    pub error: f64,
    /// (R, estimate) along the radius grid.
    pub sequence: Vec<(f64, f64)>,
}

const GAMMA_TOL: f64 = 1e-7;

/// ∫₀^∞ (ρ(x) − 1_{x<1})/x dx for the default mollifier.
pub fn cutoff_log_constant() -> f64 {
    let m = Mollifier::default();
    let spec = QuadratureSpec::default().with_rel(1e-14).with_abs(1e-16);
    integrate(|x: f64| (m.eval(x) - 1.0) / x, m.flat_radius, 1.0, &spec).value
}

/// γ(Λ) by a smooth cutoff: Σ ρ(|γ|/R)|γ|^{−d} = S_d(log R + c_ρ + γ(Λ)) up to
/// errors that decay faster than any power of R, where c_ρ =
/// ∫(ρ(x) − 1_{x<1})/x dx. A sharp cutoff leaves lattice-point-counting
/// fluctuations that no extrapolation removes. Evaluated at R_max/8 … R_max.
pub fn gamma_lattice(l: &Lattice, r_max: f64) -> Result<GammaEstimate> {
    let d = l.dimension();
    if !(r_max > 8.0 * l.shortest()?) {
        return Err(Error::Precondition(format!("R_max = {r_max} is too small")));
    }
    let norms = l.norms_within(r_max)?;
    let s_d = sphere_area(d);
    let c_rho = cutoff_log_constant();
    let m = Mollifier::default();
    let grid = [r_max / 8.0, r_max / 4.0, r_max / 2.0, r_max];
    let sequence: Vec<(f64, f64)> = grid
        .iter()
        .map(|&r| {
            let sum: f64 = norms
                .iter()
                .rev()
                .filter(|&&x| x < r)
                .map(|&x| m.eval(x / r) * x.powi(-(d as i32)))
                .sum();
            (r, sum / s_d - r.ln() - c_rho)
        })
        .collect();
    let value = sequence[3].1;
    let error = (sequence[3].1 - sequence[2].1).abs();
    if !(error <= GAMMA_TOL.max(GAMMA_TOL * value.abs())) {
        return Err(Error::NonConvergence {
            what: format!("gamma_lattice (sequence {sequence:?})"),
            estimate: value,
            error,
        });
    }
    Ok(GammaEstimate { value, error, sequence })
}
