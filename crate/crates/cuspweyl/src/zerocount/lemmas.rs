//! The three harmonic-weight counting identities and their direct sums.
//!
//! Each identity is Green's formula for log|F| against a harmonic weight u
//! that vanishes on part of the contour:
//!
//! * half-disk, u = log(T/|z − b|);
//! * big rectangle, u = (T − y)(x − d/2);
//! * small rectangle, u = cos(c(y − T₀))·sinh(c(x − d/2)).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::contour::{zero_near_contour, Piece};
use super::function::AnalyticFunction;
use super::zeros::ZeroList;
use crate::analysis::quad::{integrate_panels, integrate_with, Endpoint, QuadratureSpec};
use crate::error::{Error, Result};

const PROXIMITY: f64 = 1e-8;
const NUDGE: f64 = 1e-6;

/// Rectangle [d/2, b] × [0, T] and the small-box frequency c.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountingBox {
    pub b: f64,
    pub d_half: f64,
    pub t: f64,
    pub c: f64,
}

impl CountingBox {
    pub fn new(b: f64, d_half: f64, t: f64, c: f64) -> Result<Self> {
        if !(b > d_half) || !(t > 0.0) || !(c > 0.0) {
            return Err(Error::Precondition(format!(
                "counting box needs b > d/2, T > 0, c > 0 (b = {b}, d/2 = {d_half}, T = {t}, c = {c})"
            )));
        }
        Ok(CountingBox { b, d_half, t, c })
    }
}

/// A contour identity value, flagged when the contour had to be moved off a
/// nearby zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSum {
    pub value: f64,
    pub nudged: bool,
    pub near_zero: Option<Complex64>,
}

fn panels(a: f64, b: f64, per_unit: f64) -> Vec<f64> {
    let n = (((b - a).abs() * per_unit).ceil() as usize).clamp(4, 20_000);
    (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect()
}

fn finite(v: f64, what: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NotANumber(what.to_string()))
    }
}

fn carleman_pieces(b: f64, t: f64) -> Vec<Piece> {
    vec![
        Piece::Arc {
            center: Complex64::new(b, 0.0),
            radius: t,
            from: -PI / 2.0,
            to: PI / 2.0,
        },
        Piece::Segment(Complex64::new(b, -t), Complex64::new(b, t)),
    ]
}

fn carleman_raw(f: &AnalyticFunction, b: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    let fb = f.eval(Complex64::new(b, 0.0)).norm();
    if !(fb > 0.0) || !fb.is_finite() {
        return Err(Error::Precondition(format!("F({b}) must be finite and nonzero")));
    }
    let center = Complex64::new(b, 0.0);
    let arc = integrate_panels(
        |th: f64| f.eval(center + Complex64::from_polar(t, th)).norm().ln(),
        &panels(-PI / 2.0, PI / 2.0, 8.0 * t.max(1.0) / PI),
        spec,
    )
    .into_result("half-circle integral")?;
    let seg = integrate_with(
        |s: f64| {
            let up = f.log_derivative(Complex64::new(b, s)).re;
            let down = f.log_derivative(Complex64::new(b, -s)).re;
            (t / s).ln() * (up + down)
        },
        0.0,
        t,
        Endpoint::Log,
        Endpoint::Regular,
        spec,
    )
    .into_result("segment integral")?;
    finite((arc - PI * fb.ln() - seg) / (2.0 * PI), "Carleman identity")
}

/// (1/2π)[∫ log|F(b+Te^{iθ})|dθ − π log|F(b)| − ∫_{−T}^{T} log(T/|t|) Re F′/F(b+it) dt],
/// which equals Σ_{β>b, |z−b|<T} log(T/|z−b|).
pub fn carleman_weighted_count(
    f: &AnalyticFunction,
    b: f64,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<ContourSum> {
    if !(t > 0.0) {
        return Err(Error::Precondition(format!("radius must be positive, got {t}")));
    }
    let pieces = carleman_pieces(b, t);
    match zero_near_contour(f, &pieces, PROXIMITY) {
        None => Ok(ContourSum {
            value: carleman_raw(f, b, t, spec)?,
            nudged: false,
            near_zero: None,
        }),
        Some(z) => {
            let (b2, t2) = if pieces[0].distance(z) <= pieces[1].distance(z) {
                (b, t + NUDGE)
            } else {
                (b - NUDGE, t)
            };
            if let Some(z2) = zero_near_contour(f, &carleman_pieces(b2, t2), PROXIMITY) {
                return Err(Error::ContourProximity { re: z2.re, im: z2.im });
            }
            Ok(ContourSum {
                value: carleman_raw(f, b2, t2, spec)?,
                nudged: true,
                near_zero: Some(z),
            })
        }
    }
}

fn rectangle_pieces(x0: f64, x1: f64, y0: f64, y1: f64) -> Vec<Piece> {
    let c = |x: f64, y: f64| Complex64::new(x, y);
    vec![
        Piece::Segment(c(x0, y0), c(x1, y0)),
        Piece::Segment(c(x1, y0), c(x1, y1)),
        Piece::Segment(c(x1, y1), c(x0, y1)),
        Piece::Segment(c(x0, y1), c(x0, y0)),
    ]
}

/// Checks |F| = 1 on Re z = d/2 over |t| ≤ t_max and F real on [d/2, b].
fn check_symmetry(f: &AnalyticFunction, d_half: f64, b: f64, t_max: f64) -> Result<()> {
    for i in 0..=128 {
        let t = -t_max + 2.0 * t_max * i as f64 / 128.0;
        let v = f.eval(Complex64::new(d_half, t)).norm();
        if !((v - 1.0).abs() <= 1e-8) {
            return Err(Error::Precondition(format!(
                "|F(d/2 + {t}i)| = {v} is not 1 on the axis"
            )));
        }
    }
    for i in 0..=32 {
        let x = d_half + (b - d_half) * i as f64 / 32.0;
        let v = f.eval(Complex64::new(x, 0.0));
        if !(v.im.abs() <= 1e-8 * v.norm().max(1.0)) {
            return Err(Error::Precondition(format!("F({x}) = {v} is not real")));
        }
    }
    Ok(())
}

fn big_raw(f: &AnalyticFunction, bx: &CountingBox, spec: &QuadratureSpec) -> Result<f64> {
    let (b, dh, t) = (bx.b, bx.d_half, bx.t);
    let grid_t = panels(0.0, t, 4.0);
    let grid_x = panels(dh, b, 8.0);
    let i1 = integrate_panels(
        |s: f64| f.log_derivative(Complex64::new(b, s)).re * (t - s),
        &grid_t,
        spec,
    )
    .into_result("right-edge derivative integral")?
        * (b - dh);
    let i2 = integrate_panels(
        |x: f64| {
            let top = f.eval(Complex64::new(x, t)).norm().ln();
            let bottom = f.eval(Complex64::new(x, 0.0)).norm().ln();
            (top - bottom) * (x - dh)
        },
        &grid_x,
        spec,
    )
    .into_result("horizontal-edge integral")?;
    let i3 = integrate_panels(
        |s: f64| f.eval(Complex64::new(b, s)).norm().ln() * (t - s),
        &grid_t,
        spec,
    )
    .into_result("right-edge log integral")?;
    finite((i1 + i2 - i3) / (2.0 * PI), "big-rectangle identity")
}

/// Σ_{d/2≤β≤b, 0≤γ≤T} (T − γ)(β − d/2) through boundary integrals.
pub fn big_rectangle_weighted_sum(
    f: &AnalyticFunction,
    bx: &CountingBox,
    spec: &QuadratureSpec,
) -> Result<ContourSum> {
    check_symmetry(f, bx.d_half, bx.b, bx.t + 1.0)?;
    let pieces = rectangle_pieces(bx.d_half, bx.b, 0.0, bx.t);
    match zero_near_contour(f, &pieces, PROXIMITY) {
        None => Ok(ContourSum {
            value: big_raw(f, bx, spec)?,
            nudged: false,
            near_zero: None,
        }),
        Some(z) => {
            let dist: Vec<f64> = pieces.iter().map(|p| p.distance(z)).collect();
            let mut moved = *bx;
            if dist[1] <= dist[2] && dist[1] < dist[0] {
                moved.b += NUDGE;
            } else if dist[2] < dist[0] {
                moved.t += NUDGE;
            } else {
                // The bottom edge is the real axis and cannot move.
                return Err(Error::ContourProximity { re: z.re, im: z.im });
            }
            let again = rectangle_pieces(moved.d_half, moved.b, 0.0, moved.t);
            if let Some(z2) = zero_near_contour(f, &again, PROXIMITY) {
                return Err(Error::ContourProximity { re: z2.re, im: z2.im });
            }
            Ok(ContourSum {
                value: big_raw(f, &moved, spec)?,
                nudged: true,
                near_zero: Some(z),
            })
        }
    }
}

fn small_raw(f: &AnalyticFunction, bx: &CountingBox, t0: f64, spec: &QuadratureSpec) -> Result<f64> {
    let (b, dh, c) = (bx.b, bx.d_half, bx.c);
    let l = PI / c;
    let sh = (c * (b - dh)).sinh();
    let ch = (c * (b - dh)).cosh();
    let grid_t = panels(-l, l, 4.0);
    let grid_x = panels(dh, b, 8.0);
    let i1 = integrate_panels(
        |s: f64| (c * s).cos() * f.log_derivative(Complex64::new(b, t0 + s)).re,
        &grid_t,
        spec,
    )
    .into_result("small-box derivative integral")?
        * sh;
    let i2 = -c
        * ch
        * integrate_panels(
            |s: f64| (c * s).cos() * f.eval(Complex64::new(b, t0 + s)).norm().ln(),
            &grid_t,
            spec,
        )
        .into_result("small-box log integral")?;
    let i3 = integrate_panels(
        |x: f64| {
            let top = f.log_derivative(Complex64::new(x, t0 + l)).im;
            let bottom = f.log_derivative(Complex64::new(x, t0 - l)).im;
            (c * (x - dh)).sinh() * (top - bottom)
        },
        &grid_x,
        spec,
    )
    .into_result("small-box horizontal integral")?;
    finite((i1 + i2 + i3) / (2.0 * PI), "small-rectangle identity")
}

/// Σ cos(c(γ − T₀))·sinh(c(β − d/2)) over zeros with d/2 ≤ β ≤ b and
/// |γ − T₀| ≤ π/c, through boundary integrals.
pub fn small_rectangle_weighted_sum(
    f: &AnalyticFunction,
    bx: &CountingBox,
    t_center: f64,
    spec: &QuadratureSpec,
) -> Result<ContourSum> {
    let l = PI / bx.c;
    check_symmetry(f, bx.d_half, bx.b, t_center.abs() + l + 1.0)?;
    let pieces = rectangle_pieces(bx.d_half, bx.b, t_center - l, t_center + l);
    match zero_near_contour(f, &pieces, PROXIMITY) {
        None => Ok(ContourSum {
            value: small_raw(f, bx, t_center, spec)?,
            nudged: false,
            near_zero: None,
        }),
        Some(z) => {
            let dist: Vec<f64> = pieces.iter().map(|p| p.distance(z)).collect();
            let mut moved = *bx;
            let mut t0 = t_center;
            if dist[1] <= dist[0].min(dist[2]) {
                moved.b += NUDGE;
            } else if dist[2] < dist[0] {
                t0 += NUDGE;
            } else {
                t0 -= NUDGE;
            }
            let again = rectangle_pieces(moved.d_half, moved.b, t0 - l, t0 + l);
            if let Some(z2) = zero_near_contour(f, &again, PROXIMITY) {
                return Err(Error::ContourProximity { re: z2.re, im: z2.im });
            }
            Ok(ContourSum {
                value: small_raw(f, &moved, t0, spec)?,
                nudged: true,
                near_zero: Some(z),
            })
        }
    }
}

/// Which weighted sum to form directly from a zero list.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lemma {
    Carleman { b: f64, t: f64 },
    BigRectangle(CountingBox),
    SmallRectangle { bx: CountingBox, t_center: f64 },
}

const ON_CONTOUR: f64 = 1e-9;

/// The weighted sum over an explicit zero list; zeros flagged as boundary
/// zeros, or lying on the contour, carry half weight.
pub fn weighted_sum_direct(zeros: &ZeroList, lemma: &Lemma) -> f64 {
    let mut sum = 0.0;
    for e in &zeros.entries {
        let z = e.location;
        let (weight, on_edge) = match *lemma {
            Lemma::Carleman { b, t } => {
                let r = (z - b).norm();
                if z.re < b - ON_CONTOUR || r > t + ON_CONTOUR {
                    continue;
                }
                let edge = (z.re - b).abs() <= ON_CONTOUR || (r - t).abs() <= ON_CONTOUR;
                ((t / r).ln(), edge)
            }
            Lemma::BigRectangle(bx) => {
                if !inside(z, bx.d_half, bx.b, 0.0, bx.t) {
                    continue;
                }
                ((bx.t - z.im) * (z.re - bx.d_half), on_rect(z, bx.d_half, bx.b, 0.0, bx.t))
            }
            Lemma::SmallRectangle { bx, t_center } => {
                let l = PI / bx.c;
                let (y0, y1) = (t_center - l, t_center + l);
                if !inside(z, bx.d_half, bx.b, y0, y1) {
                    continue;
                }
                (
                    (bx.c * (z.im - t_center)).cos() * (bx.c * (z.re - bx.d_half)).sinh(),
                    on_rect(z, bx.d_half, bx.b, y0, y1),
                )
            }
        };
        let half = if e.on_boundary || on_edge { 0.5 } else { 1.0 };
        sum += half * e.multiplicity as f64 * weight;
    }
    sum
}

fn inside(z: Complex64, x0: f64, x1: f64, y0: f64, y1: f64) -> bool {
    z.re >= x0 - ON_CONTOUR && z.re <= x1 + ON_CONTOUR && z.im >= y0 - ON_CONTOUR && z.im <= y1 + ON_CONTOUR
}

fn on_rect(z: Complex64, x0: f64, x1: f64, y0: f64, y1: f64) -> bool {
    (z.re - x0).abs() <= ON_CONTOUR
        || (z.re - x1).abs() <= ON_CONTOUR
        || (z.im - y0).abs() <= ON_CONTOUR
        || (z.im - y1).abs() <= ON_CONTOUR
}
