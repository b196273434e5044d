//! Exponential series Σ a_k e^{−sℓ_k} and classical series Σ c_k λ_k^{−s}.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde_json::Value;

use crate::error::{Error, Result};

/// A frequency stored in the form it was given, so that converting between
/// the exponential (ℓ) and classical (λ = e^ℓ) pictures loses nothing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Length(f64),
    Base(f64),
}

impl Exponent {
    pub fn length(self) -> f64 {
        match self {
            Exponent::Length(l) => l,
            Exponent::Base(b) => b.ln(),
        }
    }

    pub fn base(self) -> f64 {
        match self {
            Exponent::Length(l) => l.exp(),
            Exponent::Base(b) => b,
        }
    }
}

/// Term k of an infinite series, as (coefficient, exponent).
pub type TermGenerator = Arc<dyn Fn(usize) -> (Complex64, Exponent) + Send + Sync>;

/// Relative and absolute targets for the tail estimate.
const TAIL_REL: f64 = 1e-12;
const TAIL_ABS: f64 = 1e-14;
/// Margin above the abscissa required for evaluation.
pub const ABSCISSA_MARGIN: f64 = 1e-6;
const MAX_TERMS: usize = 50_000_000;

/// Σ a_k e^{−sℓ_k} with ℓ_0 < ℓ_1 < …; either finite (optionally with a
/// declared bound on the discarded tail) or continued by a generator.
#[derive(Clone)]
pub struct ExponentialDirichletSeries {
    terms: Vec<(Complex64, Exponent)>,
    tail_bound: f64,
    generator: Option<TermGenerator>,
    abscissa_hint: Option<f64>,
}

/// Σ c_k λ_k^{−s} with real coefficients and 0 < λ_0 < λ_1 < ….
#[derive(Clone)]
pub struct ClassicalDirichletSeries {
    inner: ExponentialDirichletSeries,
}

/// A partial sum together with a bound on what was left out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: Complex64,
    pub tail_bound: f64,
    pub terms_used: usize,
}

impl fmt::Debug for ExponentialDirichletSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExponentialDirichletSeries")
            .field("terms", &self.terms)
            .field("tail_bound", &self.tail_bound)
            .field("generated", &self.generator.is_some())
            .finish()
    }
}

impl fmt::Debug for ClassicalDirichletSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClassicalDirichletSeries").field("terms", &self.inner.terms).finish()
    }
}

fn check_increasing(terms: &[(Complex64, Exponent)]) -> Result<()> {
    for w in terms.windows(2) {
        if !(w[1].1.length() > w[0].1.length()) {
            return Err(Error::Precondition(format!(
                "exponents must be strictly increasing ({} then {})",
                w[0].1.length(),
                w[1].1.length()
            )));
        }
    }
    for (a, e) in terms {
        if !(a.re.is_finite() && a.im.is_finite() && e.length().is_finite()) {
            return Err(Error::NotANumber("series term".into()));
        }
    }
    Ok(())
}

impl ExponentialDirichletSeries {
    /// A finite series from (a_k, ℓ_k) pairs.
    pub fn new(terms: Vec<(Complex64, f64)>) -> Result<Self> {
        Self::from_terms(terms.into_iter().map(|(a, l)| (a, Exponent::Length(l))).collect())
    }

    pub fn from_terms(terms: Vec<(Complex64, Exponent)>) -> Result<Self> {
        check_increasing(&terms)?;
        Ok(ExponentialDirichletSeries {
            terms,
            tail_bound: 0.0,
            generator: None,
            abscissa_hint: None,
        })
    }

    /// A truncated series whose discarded tail is bounded by `bound` for
    /// every s with Re s above the abscissa.
    pub fn truncated(terms: Vec<(Complex64, f64)>, bound: f64) -> Result<Self> {
        if !(bound >= 0.0) {
            return Err(Error::Precondition("tail bound must be nonnegative".into()));
        }
        let mut s = Self::new(terms)?;
        s.tail_bound = bound;
        Ok(s)
    }

    /// An infinite series: `retained` terms are stored, the rest come from
    /// the generator on demand.
    pub fn from_generator(generator: TermGenerator, retained: usize) -> Result<Self> {
        let terms: Vec<_> = (0..retained).map(|k| generator(k)).collect();
        check_increasing(&terms)?;
        Ok(ExponentialDirichletSeries {
            terms,
            tail_bound: 0.0,
            generator: Some(generator),
            abscissa_hint: None,
        })
    }

    pub fn terms(&self) -> &[(Complex64, Exponent)] {
        &self.terms
    }

    pub fn coefficients(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.terms.iter().map(|t| t.0)
    }

    pub fn lengths(&self) -> impl Iterator<Item = f64> + '_ {
        self.terms.iter().map(|t| t.1.length())
    }

    pub fn is_finite(&self) -> bool {
        self.generator.is_none()
    }

    pub fn declared_tail_bound(&self) -> f64 {
        self.tail_bound
    }

    fn term(&self, k: usize) -> Option<(Complex64, Exponent)> {
        match (self.terms.get(k), &self.generator) {
            (Some(t), _) => Some(*t),
            (None, Some(g)) => Some(g(k)),
            (None, None) => None,
        }
    }

    /// Absolute abscissa of convergence; −∞ for finite series.
    pub fn abscissa(&self) -> f64 {
        if self.generator.is_none() {
            return f64::NEG_INFINITY;
        }
        if let Some(h) = self.abscissa_hint {
            return h;
        }
        abscissa_estimate(|k| self.term(k).unwrap())
    }

    /// Caches a known abscissa so evaluation does not re-estimate it.
    pub fn with_abscissa(mut self, abscissa: f64) -> Self {
        self.abscissa_hint = Some(abscissa);
        self
    }

    /// Partial sum plus tail estimate. Generated series are summed until a
    /// geometric bound from the last retained ratio falls below
    /// 1e−12·|sum| or 1e−14.
    pub fn evaluate(&self, s: Complex64) -> Result<SeriesValue> {
        let abscissa = self.abscissa();
        if !(s.re > abscissa + ABSCISSA_MARGIN) {
            return Err(Error::BelowAbscissa { sigma: s.re, abscissa });
        }
        let mut sum = Complex64::new(0.0, 0.0);
        let mut comp = Complex64::new(0.0, 0.0);
        let mut add = |x: Complex64, sum: &mut Complex64| {
            // Kahan summation keeps long generated sums accurate.
            let y = x - comp;
            let t = *sum + y;
            comp = (t - *sum) - y;
            *sum = t;
        };
        for (a, e) in &self.terms {
            add(term_value(*a, *e, s), &mut sum);
        }
        if self.generator.is_none() {
            let tail = self.tail_bound;
            return Ok(SeriesValue { value: sum, tail_bound: tail, terms_used: self.terms.len() });
        }
        let mut k = self.terms.len();
        let mut prev = self
            .terms
            .last()
            .map(|(a, e)| a.norm() * (-s.re * e.length()).exp())
            .unwrap_or(f64::NAN);
        loop {
            let (a, e) = self.term(k).unwrap();
            let t = term_value(a, e, s);
            add(t, &mut sum);
            k += 1;
            let mag = t.norm();
            let ratio = mag / prev;
            prev = mag;
            if ratio.is_finite() && ratio < 1.0 {
                let tail = mag * ratio / (1.0 - ratio);
                if tail <= TAIL_REL * sum.norm() || tail <= TAIL_ABS {
                    return Ok(SeriesValue { value: sum, tail_bound: tail, terms_used: k });
                }
            } else if mag == 0.0 && k > 16 {
                return Ok(SeriesValue { value: sum, tail_bound: 0.0, terms_used: k });
            }
            if k >= MAX_TERMS {
                return Err(Error::NonConvergence {
                    what: "Dirichlet series tail".into(),
                    estimate: sum.re,
                    error: mag,
                });
            }
        }
    }

    /// d/ds Σ a_k e^{−sℓ_k} = −Σ ℓ_k a_k e^{−sℓ_k} (finite part only).
    pub fn derivative(&self, s: Complex64) -> Result<Complex64> {
        let abscissa = self.abscissa();
        if !(s.re > abscissa + ABSCISSA_MARGIN) {
            return Err(Error::BelowAbscissa { sigma: s.re, abscissa });
        }
        if self.generator.is_some() {
            return Err(Error::Precondition("derivative needs a finite series".into()));
        }
        Ok(self
            .terms
            .iter()
            .map(|(a, e)| -term_value(*a, *e, s) * e.length())
            .sum())
    }

    /// The classical picture c_k λ_k^{−s}; requires real coefficients.
    pub fn to_classical(&self) -> Result<ClassicalDirichletSeries> {
        if self.terms.iter().any(|(a, _)| a.im != 0.0) {
            return Err(Error::Precondition("classical series need real coefficients".into()));
        }
        Ok(ClassicalDirichletSeries { inner: self.clone() })
    }

    /// Series from a JSON array of [coefficient, ℓ] pairs; a coefficient is
    /// a number or a [re, im] pair.
    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_terms(parse_pairs(text)?.into_iter().map(|(a, x)| (a, Exponent::Length(x))).collect())
    }

    pub fn to_json(&self) -> Result<String> {
        let arr: Vec<Value> = self
            .terms
            .iter()
            .map(|(a, e)| serde_json::json!([[a.re, a.im], e.length()]))
            .collect();
        Ok(serde_json::to_string(&arr)?)
    }
}

fn term_value(a: Complex64, e: Exponent, s: Complex64) -> Complex64 {
    if a == Complex64::new(0.0, 0.0) {
        return a;
    }
    match e {
        Exponent::Length(l) => a * (-s * l).exp(),
        Exponent::Base(b) => a * (-s * b.ln()).exp(),
    }
}

fn parse_pairs(text: &str) -> Result<Vec<(Complex64, f64)>> {
    let v: Value = serde_json::from_str(text)?;
    let arr = v.as_array().ok_or_else(|| Error::Parse("expected an array of pairs".into()))?;
    arr.iter()
        .map(|p| {
            let pair = p
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| Error::Parse("each term must be [coefficient, exponent]".into()))?;
            let coeff = match &pair[0] {
                Value::Number(n) => Complex64::new(n.as_f64().unwrap_or(f64::NAN), 0.0),
                Value::Array(c) if c.len() == 2 => Complex64::new(
                    c[0].as_f64().ok_or_else(|| Error::Parse("bad real part".into()))?,
                    c[1].as_f64().ok_or_else(|| Error::Parse("bad imaginary part".into()))?,
                ),
                _ => return Err(Error::Parse("coefficient must be a number or [re, im]".into())),
            };
            let x = pair[1].as_f64().ok_or_else(|| Error::Parse("exponent must be a number".into()))?;
            Ok((coeff, x))
        })
        .collect()
}

impl ClassicalDirichletSeries {
    /// A finite series from (c_k, λ_k) pairs.
    pub fn new(terms: Vec<(f64, f64)>) -> Result<Self> {
        if terms.iter().any(|t| !(t.1 > 0.0)) {
            return Err(Error::Precondition("bases λ_k must be positive".into()));
        }
        let inner = ExponentialDirichletSeries::from_terms(
            terms.into_iter().map(|(c, l)| (Complex64::new(c, 0.0), Exponent::Base(l))).collect(),
        )?;
        Ok(ClassicalDirichletSeries { inner })
    }

    /// An infinite series with term k given by (c_k, λ_k).
    pub fn from_generator(
        generator: impl Fn(usize) -> (f64, f64) + Send + Sync + 'static,
        retained: usize,
    ) -> Result<Self> {
        let g: TermGenerator = Arc::new(move |k| {
            let (c, l) = generator(k);
            (Complex64::new(c, 0.0), Exponent::Base(l))
        });
        Ok(ClassicalDirichletSeries { inner: ExponentialDirichletSeries::from_generator(g, retained)? })
    }

    /// Stored (c_k, λ_k).
    pub fn terms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.inner.terms.iter().map(|(a, e)| (a.re, e.base()))
    }

    pub fn to_exponential(&self) -> ExponentialDirichletSeries {
        self.inner.clone()
    }

    pub fn with_abscissa(self, abscissa: f64) -> Self {
        ClassicalDirichletSeries { inner: self.inner.with_abscissa(abscissa) }
    }

    pub fn abscissa(&self) -> f64 {
        self.inner.abscissa()
    }

    pub fn evaluate(&self, s: Complex64) -> Result<SeriesValue> {
        self.inner.evaluate(s)
    }

    /// Member of 𝒟⁰_b: decays as Re s → ∞.
    pub fn in_d0(&self) -> bool {
        self.inner.terms.first().map_or(true, |t| t.1.base() > 1.0)
    }

    /// Series from a JSON array of [c, λ] pairs.
    pub fn from_json(text: &str) -> Result<Self> {
        let pairs = parse_pairs(text)?;
        if pairs.iter().any(|p| p.0.im != 0.0) {
            return Err(Error::Parse("classical coefficients must be real".into()));
        }
        Self::new(pairs.into_iter().map(|(c, l)| (c.re, l)).collect())
    }
}

/// Evaluates either kind of series.
pub enum AnySeries<'a> {
    Exponential(&'a ExponentialDirichletSeries),
    Classical(&'a ClassicalDirichletSeries),
}

pub fn evaluate(series: AnySeries<'_>, s: Complex64) -> Result<SeriesValue> {
    match series {
        AnySeries::Exponential(e) => e.evaluate(s),
        AnySeries::Classical(c) => c.evaluate(s),
    }
}

const ABSCISSA_TERMS: usize = 1_000_000;

/// Cahen's formula by regression: if Σ|a_k| diverges the abscissa is the
/// growth rate of log Σ_{j≤k}|a_j| against ℓ_k, otherwise that of the tail
/// log Σ_{j>k}|a_j|. The slope is fitted over k ∈ [K^0.3, K^0.6] with
/// K = 10⁶ so the truncated tail stays accurate.
fn abscissa_estimate(term: impl Fn(usize) -> (Complex64, Exponent)) -> f64 {
    let n = ABSCISSA_TERMS;
    let mut mags = Vec::with_capacity(n);
    let mut lens = Vec::with_capacity(n);
    for k in 0..n {
        let (a, e) = term(k);
        mags.push(a.norm());
        lens.push(e.length());
    }
    let mut partial = vec![0.0; n];
    let mut acc = 0.0;
    for k in 0..n {
        acc += mags[k];
        partial[k] = acc;
    }
    let lo = (n as f64).powf(0.3) as usize;
    let hi = (n as f64).powf(0.6) as usize;
    let divergent = partial[n - 1] > 2.0 * partial[hi];
    let mut pts = Vec::new();
    for k in lo..=hi {
        let y = if divergent { partial[k] } else { partial[n - 1] - partial[k] };
        if y > 0.0 {
            pts.push((lens[k], y.ln()));
        }
    }
    if pts.len() < 2 {
        return f64::NEG_INFINITY;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
