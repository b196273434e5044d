//! Transport coefficients u_k along a radial geodesic.
//!
//! With R = j/sinh r, the hyperbolic-normalised density ratio is
//! Θ/Θ₀ = R^d, so u₀ = √(Θ₀/Θ) = R^{−d/2} and
//!
//! u_k(r) = u₀(r) sinh^{−k} r ∫₀^r sinh^{k−1}(s) R(s)^{d/2}
//!          (−Δ + (k−1−d/2)² − d²/4) u_{k−1}(s) ds,
//!
//! where Δf = f″ + (Θ′/Θ + d/r) f′ is the geometric radial Laplacian
//! (nonpositive). The analyst's convention writes −Δ for it.

use std::io::Write;

use serde::Serialize;

use super::profile::RadialCurvatureProfile;
use super::theta::{theta_on_intervals, ThetaSolution};
use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 5;

/// Coarse/fine discrepancy above which the grid is declared too coarse,
/// relative to 1 + sup|u_k|.
pub const REFINEMENT_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UkTable {
    pub d: usize,
    pub grid: Vec<f64>,
    /// values[k][i] = u_k(grid[i]).
    pub values: Vec<Vec<f64>>,
    /// sup over the coarse grid of |u_k(h) − u_k(2h)|, per k.
    pub error_estimate: Vec<f64>,
    /// 1 + sup|u_k|, per k.
    pub scale: Vec<f64>,
    /// Grid points per unit radius.
    pub density: usize,
}

impl UkTable {
    pub fn k_max(&self) -> usize {
        self.values.len() - 1
    }

    /// max_k error_estimate[k]/scale[k].
    pub fn worst_relative_error(&self) -> f64 {
        self.error_estimate.iter().zip(&self.scale).map(|(e, s)| e / s).fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let header: Vec<String> =
            std::iter::once("r".to_string()).chain((0..self.values.len()).map(|k| format!("u_{k}"))).collect();
        writeln!(w, "{}", header.join(",")).map_err(|e| Error::Io(e.to_string()))?;
        for (i, r) in self.grid.iter().enumerate() {
            let mut line = format!("{r:.6}");
            for col in &self.values {
                line.push_str(&format!(",{:.12e}", col[i]));
            }
            writeln!(w, "{line}").map_err(|e| Error::Io(e.to_string()))?;
        }
        Ok(())
    }
}

/// First and second derivatives of an even function sampled on a uniform
/// grid starting at 0, fourth order throughout.
pub(crate) fn even_derivatives(f: &[f64], h: f64) -> (Vec<f64>, Vec<f64>) {
    let n = f.len();
    assert!(n >= 6);
    let at = |i: isize| f[i.unsigned_abs()];
    let mut d1 = vec![0.0; n];
    let mut d2 = vec![0.0; n];
    for i in 0..n.saturating_sub(2) {
        let i = i as isize;
        let (a, b, c, d, e) = (at(i - 2), at(i - 1), at(i), at(i + 1), at(i + 2));
        d1[i as usize] = (a - 8.0 * b + 8.0 * d - e) / (12.0 * h);
        d2[i as usize] = (-a + 16.0 * b - 30.0 * c + 16.0 * d - e) / (12.0 * h * h);
    }
    let m = n - 1;
    let g = |j: usize| f[m - j];
    d1[m] = (25.0 * g(0) - 48.0 * g(1) + 36.0 * g(2) - 16.0 * g(3) + 3.0 * g(4)) / (12.0 * h);
    d1[m - 1] = (3.0 * g(0) + 10.0 * g(1) - 18.0 * g(2) + 6.0 * g(3) - g(4)) / (12.0 * h);
    d2[m] = (45.0 * g(0) - 154.0 * g(1) + 214.0 * g(2) - 156.0 * g(3) + 61.0 * g(4) - 10.0 * g(5))
        / (12.0 * h * h);
    d2[m - 1] =
        (10.0 * g(0) - 15.0 * g(1) - 4.0 * g(2) + 14.0 * g(3) - 6.0 * g(4) + g(5)) / (12.0 * h * h);
    (d1, d2)
}

/// ∫₀^{r_i} w(s) g(s) ds for every grid point, with g even and sampled on
/// the grid (cubic interpolation) and w evaluated exactly.
pub(crate) fn cumulative_weighted(g: &[f64], h: f64, w: impl Fn(f64) -> f64) -> Vec<f64> {
    const NODES: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
    const WEIGHTS: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];
    let n = g.len();
    let at = |i: isize| g[i.unsigned_abs()];
    let mut out = vec![0.0; n];
    for i in 0..n - 1 {
        // Stencil i−1..i+2, shifted inwards at the right end.
        let base = (i as isize - 1).min(n as isize - 4);
        let vals = [at(base), at(base + 1), at(base + 2), at(base + 3)];
        let mut acc = 0.0;
        for (x, wt) in NODES.iter().zip(WEIGHTS) {
            let s = (i as f64 + 0.5 + 0.5 * x) * h;
            let u = s / h - base as f64;
            let l0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
            let l1 = u * (u - 2.0) * (u - 3.0) / 2.0;
            let l2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
            let l3 = u * (u - 1.0) * (u - 2.0) / 6.0;
            let gi = l0 * vals[0] + l1 * vals[1] + l2 * vals[2] + l3 * vals[3];
            acc += wt * w(s) * gi;
        }
        out[i + 1] = out[i] + 0.5 * h * acc;
    }
    out
}

/// u₀′ and u₀″ in closed form from R, R′ and R″.
fn u0_derivatives(sol: &ThetaSolution) -> (Vec<f64>, Vec<f64>) {
    let e = sol.d as f64 / 2.0;
    (0..sol.grid.len())
        .map(|i| {
            let (q, dq, ddq) = (sol.ratio[i], sol.ratio_derivative[i], sol.ratio_second_derivative[i]);
            let p1 = q.powf(-e - 1.0);
            let d1 = -e * p1 * dq;
            let d2 = e * (e + 1.0) * p1 / q * dq * dq - e * p1 * ddq;
            (d1, d2)
        })
        .unzip()
}

fn recursion(sol: &ThetaSolution, k_max: usize) -> Vec<Vec<f64>> {
    let d = sol.d as f64;
    let h = sol.step();
    let n = sol.grid.len();
    let root: Vec<f64> = sol.ratio.iter().map(|q| q.powf(d / 2.0)).collect();
    let u0: Vec<f64> = root.iter().map(|q| 1.0 / q).collect();
    let mut values = vec![u0.clone()];
    for k in 1..=k_max {
        let prev = &values[k - 1];
        let (d1, d2) = if k == 1 { u0_derivatives(sol) } else { even_derivatives(prev, h) };
        let shift = (k as f64 - 1.0) * (k as f64 - 1.0 - d);
        let source: Vec<f64> = (0..n)
            .map(|i| {
                let lap = if i == 0 { (1.0 + d) * d2[0] } else { d2[i] + sol.divergence(i) * d1[i] };
                root[i] * (-lap + shift * prev[i])
            })
            .collect();
        let integral = cumulative_weighted(&source, h, |s| s.sinh().powi(k as i32 - 1));
        let uk = (0..n)
            .map(|i| {
                if i == 0 {
                    u0[0] * source[0] / k as f64
                } else {
                    u0[i] * integral[i] / sol.grid[i].sinh().powi(k as i32)
                }
            })
            .collect();
        values.push(smooth_origin(&sol.grid, uk));
    }
    values
}

/// Nodes replaced near the origin, and the window of the even fit.
const PATCH: usize = 10;
const WINDOW: usize = 30;

/// Replaces the first [`PATCH`] values by an even sextic least-squares fit
/// over nodes PATCH..WINDOW. The first quadrature panels leave an error
/// that decays like (h/r)^k after division by sinh^k r; it is harmless in
/// value but is amplified by the next level's second difference.
fn smooth_origin(grid: &[f64], mut u: Vec<f64>) -> Vec<f64> {
    if grid.len() <= WINDOW {
        return u;
    }
    let rows = WINDOW - PATCH;
    let a = nalgebra::DMatrix::from_fn(rows, 4, |i, j| (grid[PATCH + i] / grid[WINDOW]).powi(2 * j as i32));
    let b = nalgebra::DVector::from_fn(rows, |i, _| u[PATCH + i]);
    let Ok(c) = a.svd(true, true).solve(&b, 1e-14) else {
        return u;
    };
    for i in 0..PATCH {
        let x = (grid[i] / grid[WINDOW]).powi(2);
        u[i] = c[0] + x * (c[1] + x * (c[2] + x * c[3]));
    }
    u
}

/// Candidate grid densities, finest first. Rounding noise is amplified by
/// h⁻² at every level, so higher orders prefer coarser grids.
pub const DENSITIES: [usize; 5] = [400, 200, 100, 50, 26];

/// u₀, …, u_{k_max}, on the candidate density whose coarse/fine
/// discrepancy is smallest.
pub fn u_k_radial(profile: &RadialCurvatureProfile, d: usize, k_max: usize) -> Result<UkTable> {
    let mut best: Option<UkTable> = None;
    let mut last_err = None;
    for &n in &DENSITIES {
        match u_k_radial_with(profile, d, k_max, n, f64::INFINITY) {
            Ok(t) => {
                let worse = best.as_ref().map_or(false, |b| b.worst_relative_error() <= t.worst_relative_error());
                if !worse {
                    best = Some(t);
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    let best = match (best, last_err) {
        (Some(b), _) => b,
        (None, Some(e)) => return Err(e),
        (None, None) => unreachable!(),
    };
    let worst = best.worst_relative_error();
    if !(worst <= REFINEMENT_TOLERANCE) {
        return Err(Error::Refinement(format!(
            "coarse/fine discrepancy {worst:.3e} at the best grid density {}; reduce k_max or r_max",
            best.density
        )));
    }
    Ok(best)
}

/// Fixed grid density (points per unit radius, even). The table is
/// compared with the one at half the density and rejected when some u_k
/// moves by more than `tolerance·(1 + sup|u_k|)`.
pub fn u_k_radial_with(
    profile: &RadialCurvatureProfile,
    d: usize,
    k_max: usize,
    per_unit: usize,
    tolerance: f64,
) -> Result<UkTable> {
    if k_max > MAX_ORDER {
        return Err(Error::Precondition(format!("k_max = {k_max} exceeds {MAX_ORDER}")));
    }
    if per_unit < 8 || per_unit % 2 != 0 {
        return Err(Error::Precondition("grid density must be even and at least 8".into()));
    }
    let half = ((profile.r_max * per_unit as f64 / 2.0).ceil() as usize).max(8);
    let fine = theta_on_intervals(profile, d, 2 * half)?;
    let coarse = theta_on_intervals(profile, d, half)?;
    let fv = recursion(&fine, k_max);
    let cv = recursion(&coarse, k_max);
    let mut error_estimate = Vec::with_capacity(k_max + 1);
    let mut scale = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let sup = fv[k].iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let diff = cv[k].iter().enumerate().fold(0.0f64, |m, (i, v)| m.max((v - fv[k][2 * i]).abs()));
        if !diff.is_finite() || diff > tolerance * (1.0 + sup) {
            return Err(Error::Refinement(format!(
                "u_{k} changes by {diff:.3e} between grid densities {} and {per_unit}",
                per_unit / 2
            )));
        }
        error_estimate.push(diff);
        scale.push(1.0 + sup);
    }
    Ok(UkTable { d, density: per_unit, grid: fine.grid, values: fv, error_estimate, scale })
}

/// Upper-envelope fit log|u_k(r)| ≤ a + b r over [1, r_max].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthFit {
    pub k: usize,
    pub intercept: f64,
    pub slope: f64,
}

/// Least-squares slope, then the smallest intercept making the line an
/// upper bound on the sampled values.
pub fn verify_bound_uk(table: &UkTable) -> Vec<GrowthFit> {
    let idx: Vec<usize> = (0..table.grid.len()).filter(|&i| table.grid[i] >= 1.0).collect();
    table
        .values
        .iter()
        .enumerate()
        .map(|(k, col)| {
            if idx.len() < 2 {
                return GrowthFit { k, intercept: f64::NAN, slope: f64::NAN };
            }
            let pts: Vec<(f64, f64)> =
                idx.iter().map(|&i| (table.grid[i], col[i].abs().max(1e-300).ln())).collect();
            let m = pts.len() as f64;
            let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
            let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
            let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
            let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
            let slope = sxy / sxx;
            let intercept = pts.iter().map(|p| p.1 - slope * p.0).fold(f64::NEG_INFINITY, f64::max);
            GrowthFit { k, intercept, slope }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stencils_are_exact_on_even_quartics() {
        let h = 0.1;
        let f: Vec<f64> = (0..30).map(|i| {
            let r = i as f64 * h;
            1.0 + r * r - 0.3 * r.powi(4)
        }).collect();
        let (d1, d2) = even_derivatives(&f, h);
        for i in 0..30 {
            let r = i as f64 * h;
            assert!((d1[i] - (2.0 * r - 1.2 * r.powi(3))).abs() < 1e-9, "{i}");
            assert!((d2[i] - (2.0 - 3.6 * r * r)).abs() < 1e-8, "{i}");
        }
    }

    #[test]
    fn cumulative_integral_of_cosine() {
        let h = 0.01;
        let g: Vec<f64> = (0..301).map(|i| (i as f64 * h).cos()).collect();
        let c = cumulative_weighted(&g, h, |s| s * s);
        for (i, v) in c.iter().enumerate() {
            let r = i as f64 * h;
            let exact = r * r * r.sin() + 2.0 * r * r.cos() - 2.0 * r.sin();
            assert!((v - exact).abs() < 1e-9, "{r}");
        }
    }

    #[test]
    fn collapse_in_constant_curvature() {
        let p = RadialCurvatureProfile::constant(-1.0, 5.0).unwrap();
        for d in 1..=3 {
            let t = u_k_radial(&p, d, 3).unwrap();
            assert!(t.values[0].iter().all(|u| (u - 1.0).abs() <= 1e-8));
            for k in 1..=3 {
                assert!(t.values[k].iter().all(|u| u.abs() <= 1e-8), "d={d} k={k}");
            }
        }
    }

    #[test]
    fn normalised_at_origin() {
        let p = RadialCurvatureProfile::pinched(4.0).unwrap();
        let t = u_k_radial(&p, 2, 2).unwrap();
        assert!((t.values[0][0] - 1.0).abs() < 1e-15);
        assert!((t.values[0][1] - 1.0).abs() < 1e-4);
    }

    #[test]
    fn first_coefficient_at_origin_tracks_scalar_curvature() {
        // u₁(0) = −(S − S₀)/6 with S − S₀ = d(d + 1)(1 + K) in constant
        // curvature K.
        let p = RadialCurvatureProfile::constant(-0.5, 2.0).unwrap();
        for d in 1..=3 {
            let t = u_k_radial(&p, d, 1).unwrap();
            let expected = -((d * (d + 1)) as f64) * 0.5 / 6.0;
            assert!((t.values[1][0] - expected).abs() < 1e-6, "d={d}: {}", t.values[1][0]);
        }
    }

    #[test]
    fn linear_in_perturbation() {
        let at = |eps: f64| {
            let p = RadialCurvatureProfile::hyperbolic_bump(eps, 1.5, 1.0, 4.0).unwrap();
            u_k_radial(&p, 2, 1).unwrap().values[1].clone()
        };
        let a = at(1e-2);
        let b = at(1e-3);
        let i = a.len() / 2;
        assert!(a[i].abs() > 1e-4);
        assert!((a[i] / b[i] - 10.0).abs() < 0.05, "{}", a[i] / b[i]);
        let c = at(1e-6);
        assert!(c.iter().all(|u| u.abs() < 1e-5));
    }

    #[test]
    fn second_order_in_step() {
        let p = RadialCurvatureProfile::pinched(4.0).unwrap();
        let a = u_k_radial_with(&p, 2, 3, 40, f64::INFINITY).unwrap();
        let b = u_k_radial_with(&p, 2, 3, 80, f64::INFINITY).unwrap();
        let h = a.grid[1];
        for k in 0..=3 {
            let diff = (0..a.grid.len()).fold(0.0f64, |m, i| m.max((a.values[k][i] - b.values[k][2 * i]).abs()));
            assert!(diff <= 4.0 * h * h, "k={k}: {diff}");
        }
    }

    #[test]
    fn order_is_capped() {
        let p = RadialCurvatureProfile::constant(-1.0, 1.0).unwrap();
        assert!(matches!(u_k_radial(&p, 1, 6), Err(Error::Precondition(_))));
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let p = RadialCurvatureProfile::pinched(6.0).unwrap();
        assert!(matches!(u_k_radial_with(&p, 3, 5, 8, REFINEMENT_TOLERANCE), Err(Error::Refinement(_))));
    }

    #[test]
    fn growth_fits() {
        let hyp = u_k_radial(&RadialCurvatureProfile::constant(-1.0, 5.0).unwrap(), 2, 1).unwrap();
        assert!(verify_bound_uk(&hyp)[0].slope.abs() < 1e-9);

        for d in 1..=3 {
            let flat = u_k_radial(&RadialCurvatureProfile::constant(0.0, 20.0).unwrap(), d, 0).unwrap();
            let fit = verify_bound_uk(&flat)[0];
            let half = d as f64 / 2.0;
            assert!(fit.slope > 0.8 * half && fit.slope < half, "d={d}: {}", fit.slope);
        }

        let pinched = u_k_radial(&RadialCurvatureProfile::pinched(6.0).unwrap(), 2, 3).unwrap();
        let fits = verify_bound_uk(&pinched);
        assert!(fits.iter().all(|f| f.slope.is_finite() && f.intercept.is_finite()));
    }

    #[test]
    fn csv_layout() {
        let t = u_k_radial(&RadialCurvatureProfile::constant(-1.0, 1.0).unwrap(), 1, 2).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("r,u_0,u_1,u_2\n"));
        assert_eq!(s.lines().count(), t.grid.len() + 1);
    }
}
