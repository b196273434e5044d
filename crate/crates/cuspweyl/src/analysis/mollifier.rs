//! Smooth plateau cutoff built from the standard bump exp(1 − 1/(1−v²)).
//!
//! B(v) = ∫_{−1}^{v} bump is tabulated once on a uniform grid by Gauss–Legendre
//! panels; between nodes it is reconstructed by quintic Hermite interpolation
//! using the exact values of B′ = bump and B″ = bump′.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TABLE_INTERVALS: usize = 4096;

// 8-point Gauss–Legendre on [−1, 1].
const GL_X: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_W: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// exp(1 − 1/(1−v²)) on (−1, 1), zero outside.
pub fn bump(v: f64) -> f64 {
    let w = 1.0 - v * v;
    if w <= 0.0 {
        0.0
    } else {
        (1.0 - 1.0 / w).exp()
    }
}

/// First derivative of [`bump`].
pub fn bump_d1(v: f64) -> f64 {
    let w = 1.0 - v * v;
    if w <= 0.0 {
        0.0
    } else {
        bump(v) * (-2.0 * v / (w * w))
    }
}

/// Second derivative of [`bump`].
pub fn bump_d2(v: f64) -> f64 {
    let w = 1.0 - v * v;
    if w <= 0.0 {
        return 0.0;
    }
    let w2 = w * w;
    bump(v) * (4.0 * v * v / (w2 * w2) - 2.0 / w2 - 8.0 * v * v / (w2 * w))
}

struct BumpTable {
    h: f64,
    values: Vec<f64>,
}

fn table() -> &'static BumpTable {
    static TABLE: OnceLock<BumpTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let h = 2.0 / TABLE_INTERVALS as f64;
        let mut values = Vec::with_capacity(TABLE_INTERVALS + 1);
        let mut acc = 0.0;
        values.push(0.0);
        for i in 0..TABLE_INTERVALS {
            let a = -1.0 + i as f64 * h;
            let c = a + 0.5 * h;
            let mut s = 0.0;
            for (x, w) in GL_X.iter().zip(GL_W.iter()) {
                s += w * (bump(c - 0.5 * h * x) + bump(c + 0.5 * h * x));
            }
            acc += 0.5 * h * s;
            values.push(acc);
        }
        BumpTable { h, values }
    })
}

/// B(v) = ∫_{−1}^{v} bump(u) du.
pub fn bump_integral(v: f64) -> f64 {
    let t = table();
    if v <= -1.0 {
        return 0.0;
    }
    if v >= 1.0 {
        return t.values[TABLE_INTERVALS];
    }
    let pos = (v + 1.0) / t.h;
    let i = (pos.floor() as usize).min(TABLE_INTERVALS - 1);
    let x0 = -1.0 + i as f64 * t.h;
    let s = (v - x0) / t.h;
    let h = t.h;
    let (p0, p1) = (t.values[i], t.values[i + 1]);
    let (d0, d1) = (bump(x0) * h, bump(x0 + h) * h);
    let (c0, c1) = (bump_d1(x0) * h * h, bump_d1(x0 + h) * h * h);
    // Quintic Hermite basis on [0, 1].
    let s2 = s * s;
    let s3 = s2 * s;
    let s4 = s3 * s;
    let s5 = s4 * s;
    let h00 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
    let h10 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
    let h20 = 0.5 * (s2 - 3.0 * s3 + 3.0 * s4 - s5);
    let h01 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
    let h11 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
    let h21 = 0.5 * (s3 - 2.0 * s4 + s5);
    p0 * h00 + d0 * h10 + c0 * h20 + p1 * h01 + d1 * h11 + c1 * h21
}

/// Total mass of the bump, B(1).
pub fn bump_mass() -> f64 {
    table().values[TABLE_INTERVALS]
}

/// Even plateau function: 1 on [−r₀, r₀], 0 outside (−1, 1), smooth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mollifier {
    pub flat_radius: f64,
}

impl Default for Mollifier {
    fn default() -> Self {
        Mollifier { flat_radius: 0.5 }
    }
}

impl Mollifier {
    pub const SUPPORT_RADIUS: f64 = 1.0;

    pub fn new(flat_radius: f64) -> Result<Self> {
        if !(flat_radius > 0.0 && flat_radius < 1.0) {
            return Err(Error::Precondition(format!(
                "flat radius must lie in (0, 1), got {flat_radius}"
            )));
        }
        Ok(Mollifier { flat_radius })
    }

    fn scale(&self) -> f64 {
        2.0 / (1.0 - self.flat_radius)
    }

    fn inner(&self, a: f64) -> f64 {
        (2.0 * a - 1.0 - self.flat_radius) / (1.0 - self.flat_radius)
    }

    /// ρ(t).
    pub fn eval(&self, t: f64) -> f64 {
        let a = t.abs();
        if a <= self.flat_radius {
            1.0
        } else if a >= 1.0 {
            0.0
        } else {
            let v = (1.0 - bump_integral(self.inner(a)) / bump_mass()).clamp(0.0, 1.0);
            v
        }
    }

    /// Derivatives ρ^{(n)}(t) for n = 0..=3.
    pub fn derivative(&self, n: usize, t: f64) -> f64 {
        if n == 0 {
            return self.eval(t);
        }
        let a = t.abs();
        if a <= self.flat_radius || a >= 1.0 {
            return 0.0;
        }
        let v = self.inner(a);
        let k = self.scale();
        let sign = if t < 0.0 { -1.0 } else { 1.0 };
        let m = bump_mass();
        match n {
            1 => -sign * k * bump(v) / m,
            2 => -k * k * bump_d1(v) / m,
            3 => -sign * k * k * k * bump_d2(v) / m,
            _ => panic!("mollifier derivatives are provided up to order 3"),
        }
    }
}
