//! Argument-principle zero finder: tile, quadrisect cells with nonzero
//! winding number, then polish each small cell by Newton iteration.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::function::AnalyticFunction;
use super::zeros::{ZeroEntry, ZeroList};
use crate::analysis::quad::{integrate, QuadratureSpec};
use crate::error::{Error, Result};

/// Axis-parallel rectangle [x0, x1] × [y0, y1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        if !(x1 > x0) || !(y1 > y0) {
            return Err(Error::Precondition(format!(
                "degenerate rectangle [{x0}, {x1}] x [{y0}, {y1}]"
            )));
        }
        Ok(Rect { x0, x1, y0, y1 })
    }

    fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))
    }

    fn contains(&self, z: Complex64, margin: f64) -> bool {
        z.re >= self.x0 - margin && z.re <= self.x1 + margin && z.im >= self.y0 - margin && z.im <= self.y1 + margin
    }

    fn boundary_distance(&self, z: Complex64) -> f64 {
        (z.re - self.x0)
            .abs()
            .min((z.re - self.x1).abs())
            .min((z.im - self.y0).abs())
            .min((z.im - self.y1).abs())
    }

    /// Four children split at fraction `f` of each side.
    fn split(&self, f: f64) -> [Rect; 4] {
        let xm = self.x0 + f * self.width();
        let ym = self.y0 + f * self.height();
        [
            Rect { x0: self.x0, x1: xm, y0: self.y0, y1: ym },
            Rect { x0: xm, x1: self.x1, y0: self.y0, y1: ym },
            Rect { x0: xm, x1: self.x1, y0: ym, y1: self.y1 },
            Rect { x0: self.x0, x1: xm, y0: ym, y1: self.y1 },
        ]
    }
}

const INTEGER_SLACK: f64 = 0.1;

fn winding_spec() -> QuadratureSpec {
    QuadratureSpec {
        rel_tol: 1e-9,
        abs_tol: 1e-9,
        max_subdivisions: 4000,
    }
}

/// (1/2πi)∮ F′/F dz around the rectangle, unrounded.
pub fn winding_number(f: &AnalyticFunction, r: &Rect) -> Result<f64> {
    let c = |x: f64, y: f64| Complex64::new(x, y);
    let corners = [c(r.x0, r.y0), c(r.x1, r.y0), c(r.x1, r.y1), c(r.x0, r.y1)];
    let spec = winding_spec();
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..4 {
        let a = corners[k];
        let b = corners[(k + 1) % 4];
        let dz = b - a;
        let edge = integrate(|s: f64| f.log_derivative(a + dz * s) * dz, 0.0, 1.0, &spec);
        if !edge.converged {
            return Ok(f64::NAN);
        }
        total += edge.value;
    }
    Ok(total.im / (2.0 * PI))
}

fn as_integer(w: f64) -> Option<u32> {
    if !w.is_finite() {
        return None;
    }
    let r = w.round();
    if (w - r).abs() < INTEGER_SLACK && r >= 0.0 {
        Some(r as u32)
    } else {
        None
    }
}

/// Windings of the children of `cell`; the split is moved once to 55% of
/// each side (the lower-left child inflated by 10%) if any child is
/// ambiguous or the children do not add up.
fn children(f: &AnalyticFunction, cell: &Rect, parent: u32) -> Result<Vec<(Rect, u32)>> {
    for frac in [0.5, 0.55] {
        let kids = cell.split(frac);
        let ws: Vec<Option<u32>> = kids
            .iter()
            .map(|k| winding_number(f, k).map(as_integer))
            .collect::<Result<_>>()?;
        if ws.iter().all(|w| w.is_some()) && ws.iter().map(|w| w.unwrap()).sum::<u32>() == parent {
            return Ok(kids.into_iter().zip(ws).map(|(k, w)| (k, w.unwrap())).collect());
        }
    }
    let c = cell.center();
    Err(Error::ContourProximity { re: c.re, im: c.im })
}

fn newton(f: &AnalyticFunction, cell: &Rect, mult: u32) -> Complex64 {
    let start = cell.center();
    let mut z = start;
    for _ in 0..60 {
        let step = f.eval(z) / f.derivative(z) * mult as f64;
        if !(step.re.is_finite() && step.im.is_finite()) {
            break;
        }
        z -= step;
        if step.norm() <= 1e-15 * z.norm().max(1.0) {
            break;
        }
    }
    let reach = cell.width().max(cell.height());
    if cell.contains(z, reach) {
        z
    } else {
        start
    }
}

fn refine(f: &AnalyticFunction, cell: Rect, w: u32, min_cell: f64, out: &mut Vec<(Complex64, u32)>) -> Result<()> {
    if w == 0 {
        return Ok(());
    }
    if cell.width().max(cell.height()) <= min_cell {
        out.push((newton(f, &cell, w), w));
        return Ok(());
    }
    for (kid, kw) in children(f, &cell, w)? {
        refine(f, kid, kw, min_cell, out)?;
    }
    Ok(())
}

/// All zeros of `f` inside `rect`, localized to cells of side `min_cell`.
pub fn brute_force_zeros(f: &AnalyticFunction, rect: &Rect, min_cell: f64) -> Result<ZeroList> {
    if !(min_cell > 0.0) {
        return Err(Error::Precondition("min_cell must be positive".into()));
    }
    let outer = as_integer(winding_number(f, rect)?).ok_or_else(|| {
        let c = rect.center();
        Error::ContourProximity { re: c.re, im: c.im }
    })?;
    if outer == 0 {
        return Ok(ZeroList::default());
    }
    // Near-square tiles.
    let side = rect.width().min(rect.height());
    let nx = (rect.width() / side).ceil() as usize;
    let ny = (rect.height() / side).ceil() as usize;
    let tiles = |shift: f64| -> Vec<Rect> {
        let xs: Vec<f64> = (0..=nx)
            .map(|i| edge_coordinate(rect.x0, rect.x1, nx, i, shift))
            .collect();
        let ys: Vec<f64> = (0..=ny)
            .map(|j| edge_coordinate(rect.y0, rect.y1, ny, j, shift))
            .collect();
        let mut v = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                v.push(Rect { x0: xs[i], x1: xs[i + 1], y0: ys[j], y1: ys[j + 1] });
            }
        }
        v
    };
    let mut assigned = None;
    for shift in [0.0, 0.1] {
        let cells = tiles(shift);
        let ws: Vec<Option<u32>> = cells
            .par_iter()
            .map(|c| winding_number(f, c).map(as_integer))
            .collect::<Result<_>>()?;
        if ws.iter().all(|w| w.is_some()) && ws.iter().map(|w| w.unwrap()).sum::<u32>() == outer {
            assigned = Some(cells.into_iter().zip(ws.into_iter().map(|w| w.unwrap())).collect::<Vec<_>>());
            break;
        }
    }
    let assigned = assigned.ok_or_else(|| {
        let c = rect.center();
        Error::ContourProximity { re: c.re, im: c.im }
    })?;
    let found: Vec<Vec<(Complex64, u32)>> = assigned
        .par_iter()
        .filter(|(_, w)| *w > 0)
        .map(|(cell, w)| {
            let mut out = Vec::new();
            refine(f, *cell, *w, min_cell, &mut out)?;
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut entries: Vec<ZeroEntry> = found
        .into_iter()
        .flatten()
        .map(|(z, m)| ZeroEntry {
            location: z,
            multiplicity: m,
            on_boundary: rect.boundary_distance(z) < min_cell,
        })
        .collect();
    entries.sort_by(|a, b| {
        a.location
            .im
            .total_cmp(&b.location.im)
            .then(a.location.re.total_cmp(&b.location.re))
    });
    Ok(ZeroList { entries })
}

/// Interior grid lines shifted by `shift` of a cell; the outer edges stay put.
fn edge_coordinate(lo: f64, hi: f64, n: usize, i: usize, shift: f64) -> f64 {
    if i == 0 {
        return lo;
    }
    if i == n {
        return hi;
    }
    lo + (hi - lo) * (i as f64 + shift) / n as f64
}
