//! Globally adaptive Gauss–Kronrod (10/21) quadrature.
//!
//! Endpoint singularities of type |x − c|^p are removed by the substitution
//! x = c ± u^{1/(1+p)}, which makes the transformed integrand bounded at u = 0.
//! Infinite upper limits are mapped onto a finite interval.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, AddAssign, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_7,
    0.973_906_528_517_171_720_1,
    0.930_157_491_355_708_226_0,
    0.865_063_366_688_984_510_7,
    0.780_817_726_586_416_897_1,
    0.679_409_568_299_024_406_2,
    0.562_757_134_668_604_683_3,
    0.433_395_394_129_247_190_8,
    0.294_392_862_701_460_198_1,
    0.148_874_338_981_631_210_9,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_28,
    0.032_558_162_307_964_727_48,
    0.054_755_896_574_351_996_03,
    0.075_039_674_810_919_952_77,
    0.093_125_454_583_697_605_54,
    0.109_387_158_802_297_641_9,
    0.123_491_976_262_065_851_1,
    0.134_709_217_311_473_325_9,
    0.142_775_938_577_060_080_8,
    0.147_739_104_901_338_491_4,
    0.149_445_554_002_916_905_7,
];

// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_59,
    0.149_451_349_150_580_593_1,
    0.219_086_362_515_982_043_996,
    0.269_266_719_309_996_355_1,
    0.295_524_224_714_752_870_2,
];

/// Tolerances and subdivision budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let spec = QuadratureSpec {
            rel_tol,
            abs_tol,
            max_subdivisions,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol >= 0.0) || self.max_subdivisions < 1 {
            return Err(Error::Precondition(format!("invalid quadrature spec {self:?}")));
        }
        Ok(())
    }

    pub fn with_abs(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_rel(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }
}

/// Values the integrator can accumulate.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + AddAssign
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
    fn is_finite_value(&self) -> bool;
    fn real_part(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
    fn real_part(&self) -> f64 {
        *self
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn real_part(&self) -> f64 {
        self.re
    }
}

/// Behaviour of the integrand at an endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Endpoint {
    Regular,
    /// Integrable power singularity |x − c|^p with p > −1.
    Power(f64),
    /// Logarithmic singularity log|x − c|.
    Log,
}

impl Endpoint {
    fn exponent(self) -> Option<f64> {
        match self {
            Endpoint::Regular => None,
            Endpoint::Power(p) => Some(p),
            // Squaring the variable turns log u into u log u.
            Endpoint::Log => Some(-0.5),
        }
    }
}

/// Result of an integration: estimate, error estimate and convergence flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl<T: QuadValue> Integral<T> {
    /// Converts a non-converged result into an error carrying the estimate.
    pub fn into_result(self, what: &str) -> Result<T> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::NonConvergence {
                what: what.to_string(),
                estimate: self.value.real_part(),
                error: self.error,
            })
        }
    }
}

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<T: QuadValue, F: Fn(f64) -> T>(f: &F, a: f64, b: f64) -> (T, f64, bool) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[10];
    let mut g = T::zero();
    let mut finite = fc.is_finite_value();
    for i in 0..10 {
        let x = h * XGK[i];
        let f1 = f(c - x);
        let f2 = f(c + x);
        finite &= f1.is_finite_value() && f2.is_finite_value();
        let s = f1 + f2;
        k += s * WGK[i];
        if i % 2 == 1 {
            g += s * WG[i / 2];
        }
    }
    let k = k * h;
    let g = g * h;
    let err = (k - g).magnitude();
    (k, err, finite)
}

/// Adaptive integration of a regular integrand over a finite interval.
pub fn integrate<T, F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Integral<T>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    integrate_with(f, a, b, Endpoint::Regular, Endpoint::Regular, spec)
}

/// Adaptive integration with declared endpoint behaviour; `b` may be +∞.
pub fn integrate_with<T, F>(
    f: F,
    a: f64,
    b: f64,
    left: Endpoint,
    right: Endpoint,
    spec: &QuadratureSpec,
) -> Integral<T>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    integrate_dyn(&f, a, b, left, right, spec)
}

fn integrate_dyn<T: QuadValue>(
    f: &dyn Fn(f64) -> T,
    a: f64,
    b: f64,
    left: Endpoint,
    right: Endpoint,
    spec: &QuadratureSpec,
) -> Integral<T> {
    if a == b {
        return Integral {
            value: T::zero(),
            error: 0.0,
            evaluations: 0,
            converged: true,
        };
    }
    if b < a {
        let r = integrate_dyn(f, b, a, right, left, spec);
        return Integral {
            value: r.value * -1.0,
            ..r
        };
    }
    if b.is_infinite() {
        // x = a + u/(1−u), u ∈ [0,1).
        let g = move |u: f64| {
            if u >= 1.0 {
                return T::zero();
            }
            let one_minus = 1.0 - u;
            f(a + u / one_minus) * (1.0 / (one_minus * one_minus))
        };
        return integrate_dyn(&g, 0.0, 1.0, left, Endpoint::Regular, spec);
    }
    match (left.exponent(), right.exponent()) {
        (None, None) => adapt(&f, a, b, spec),
        (Some(p), None) => {
            let q = 1.0 / (1.0 + p);
            let len = (b - a).powf(1.0 + p);
            let g = |u: f64| {
                if u <= 0.0 {
                    return T::zero();
                }
                f(a + u.powf(q)) * (q * u.powf(q - 1.0))
            };
            adapt(&g, 0.0, len, spec)
        }
        (None, Some(p)) => {
            let q = 1.0 / (1.0 + p);
            let len = (b - a).powf(1.0 + p);
            let g = |u: f64| {
                if u <= 0.0 {
                    return T::zero();
                }
                f(b - u.powf(q)) * (q * u.powf(q - 1.0))
            };
            adapt(&g, 0.0, len, spec)
        }
        (Some(_), Some(_)) => {
            let m = 0.5 * (a + b);
            let half = QuadratureSpec {
                abs_tol: 0.5 * spec.abs_tol,
                ..*spec
            };
            let l = integrate_dyn(f, a, m, left, Endpoint::Regular, &half);
            let r = integrate_dyn(f, m, b, Endpoint::Regular, right, &half);
            Integral {
                value: l.value + r.value,
                error: l.error + r.error,
                evaluations: l.evaluations + r.evaluations,
                converged: l.converged && r.converged,
            }
        }
    }
}

/// Integrates over consecutive panels [p_i, p_{i+1}], sharing the tolerance.
pub fn integrate_panels<T, F>(f: F, points: &[f64], spec: &QuadratureSpec) -> Integral<T>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    let mut total = Integral {
        value: T::zero(),
        error: 0.0,
        evaluations: 0,
        converged: true,
    };
    let n = points.len().saturating_sub(1).max(1) as f64;
    let panel_spec = QuadratureSpec {
        abs_tol: spec.abs_tol / n,
        ..*spec
    };
    for w in points.windows(2) {
        let r = adapt(&f, w[0], w[1], &panel_spec);
        total.value += r.value;
        total.error += r.error;
        total.evaluations += r.evaluations;
        total.converged &= r.converged;
    }
    total
}

fn adapt<T: QuadValue, F: Fn(f64) -> T>(f: &F, a: f64, b: f64, spec: &QuadratureSpec) -> Integral<T> {
    let (v, e, finite) = kronrod(f, a, b);
    let mut evaluations = 21;
    if !finite {
        return Integral {
            value: v,
            error: f64::INFINITY,
            evaluations,
            converged: false,
        };
    }
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value: v, error: e });
    let mut total = v;
    let mut total_err = e;
    let mut subdivisions = 1;
    loop {
        let tol = spec.abs_tol.max(spec.rel_tol * total.magnitude());
        if total_err <= tol {
            break;
        }
        if subdivisions >= spec.max_subdivisions {
            return Integral {
                value: total,
                error: total_err,
                evaluations,
                converged: false,
            };
        }
        let seg = match heap.pop() {
            Some(s) => s,
            None => break,
        };
        let m = 0.5 * (seg.a + seg.b);
        if m <= seg.a || m >= seg.b {
            // Interval exhausted at machine resolution.
            heap.push(seg);
            return Integral {
                value: total,
                error: total_err,
                evaluations,
                converged: false,
            };
        }
        let (v1, e1, f1) = kronrod(f, seg.a, m);
        let (v2, e2, f2) = kronrod(f, m, seg.b);
        evaluations += 42;
        if !(f1 && f2) {
            return Integral {
                value: total,
                error: f64::INFINITY,
                evaluations,
                converged: false,
            };
        }
        total = total - seg.value + v1 + v2;
        total_err = total_err - seg.error + e1 + e2;
        heap.push(Segment { a: seg.a, b: m, value: v1, error: e1 });
        heap.push(Segment { a: m, b: seg.b, value: v2, error: e2 });
        subdivisions += 1;
    }
    // Re-sum to shed accumulated rounding from the running updates.
    let mut value = T::zero();
    let mut err = 0.0;
    for s in heap.iter() {
        value += s.value;
        err += s.error;
    }
    Integral {
        value,
        error: err,
        evaluations,
        converged: true,
    }
}
