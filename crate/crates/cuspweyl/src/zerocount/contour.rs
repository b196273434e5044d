//! Contour pieces and detection of zeros lying close to a contour.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::function::AnalyticFunction;

/// Segment or circular arc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Piece {
    Segment(Complex64, Complex64),
    Arc {
        center: Complex64,
        radius: f64,
        from: f64,
        to: f64,
    },
}

impl Piece {
    pub fn point(&self, s: f64) -> Complex64 {
        match *self {
            Piece::Segment(a, b) => a + (b - a) * s,
            Piece::Arc {
                center,
                radius,
                from,
                to,
            } => center + Complex64::from_polar(radius, from + (to - from) * s),
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            Piece::Segment(a, b) => (b - a).norm(),
            Piece::Arc { radius, from, to, .. } => radius * (to - from).abs(),
        }
    }

    pub fn distance(&self, z: Complex64) -> f64 {
        match *self {
            Piece::Segment(a, b) => {
                let d = b - a;
                let s = ((z - a) * d.conj()).re / d.norm_sqr();
                (z - (a + d * s.clamp(0.0, 1.0))).norm()
            }
            Piece::Arc {
                center,
                radius,
                from,
                to,
            } => {
                let w = z - center;
                let ang = w.arg();
                let (lo, hi) = if from <= to { (from, to) } else { (to, from) };
                let mut best = (self.point(0.0) - z).norm().min((self.point(1.0) - z).norm());
                for k in -1..=1 {
                    let a = ang + 2.0 * PI * k as f64;
                    if a >= lo && a <= hi {
                        best = best.min((w.norm() - radius).abs());
                    }
                }
                best
            }
        }
    }
}

/// Returns a zero of `f` within `radius` of the contour, if one is found.
///
/// Points are sampled along each piece; from every sample whose Newton step
/// is comparable to the sample spacing, Newton iteration is run and the limit
/// is tested against the contour.
pub fn zero_near_contour(f: &AnalyticFunction, pieces: &[Piece], radius: f64) -> Option<Complex64> {
    for piece in pieces {
        let n = ((piece.length() * 64.0).ceil() as usize).clamp(64, 4096);
        let spacing = piece.length() / n as f64;
        for i in 0..=n {
            let z0 = piece.point(i as f64 / n as f64);
            let fz = f.eval(z0);
            if !(fz.re.is_finite() && fz.im.is_finite()) || fz.norm() < 1e-300 {
                return Some(z0);
            }
            let step = fz / f.derivative(z0);
            if !(step.norm() < 4.0 * spacing) {
                continue;
            }
            let mut z = z0;
            for _ in 0..40 {
                let s = f.eval(z) / f.derivative(z);
                if !(s.re.is_finite() && s.im.is_finite()) {
                    break;
                }
                z -= s;
                if s.norm() < 1e-15 * z.norm().max(1.0) {
                    break;
                }
            }
            let near = pieces.iter().map(|p| p.distance(z)).fold(f64::INFINITY, f64::min);
            if near < radius && f.eval(z).norm() < 1e-10 * f.eval(z0).norm().max(1e-300) + 1e-12 {
                return Some(z);
            }
        }
    }
    None
}
