use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

type ComplexFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// A holomorphic function with an optional analytic derivative.
#[derive(Clone)]
pub struct AnalyticFunction {
    pub name: String,
    value: ComplexFn,
    derivative: Option<ComplexFn>,
}

impl fmt::Debug for AnalyticFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticFunction")
            .field("name", &self.name)
            .field("analytic_derivative", &self.derivative.is_some())
            .finish()
    }
}

impl AnalyticFunction {
    pub fn new<F>(name: impl Into<String>, value: F) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        AnalyticFunction {
            name: name.into(),
            value: Arc::new(value),
            derivative: None,
        }
    }

    pub fn with_derivative<F>(mut self, derivative: F) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        self.derivative = Some(Arc::new(derivative));
        self
    }

    pub fn has_derivative(&self) -> bool {
        self.derivative.is_some()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.value)(z)
    }

    /// F′(z), analytic if supplied, else a central difference with
    /// h = 1e−6·max(1, |z|).
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        match &self.derivative {
            Some(d) => d(z),
            None => {
                let h = 1e-6 * z.norm().max(1.0);
                ((self.value)(z + h) - (self.value)(z - h)) / (2.0 * h)
            }
        }
    }

    /// F′/F(z).
    pub fn log_derivative(&self, z: Complex64) -> Complex64 {
        self.derivative(z) / self.eval(z)
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(name: impl Into<String>, roots: Vec<Complex64>) -> Self {
        let r1 = Arc::new(roots);
        let r2 = r1.clone();
        AnalyticFunction::new(name, move |z| r1.iter().map(|r| z - r).product())
            .with_derivative(move |z| {
                let p: Complex64 = r2.iter().map(|r| z - r).product();
                p * r2.iter().map(|r| (z - r).inv()).sum::<Complex64>()
            })
    }

    /// Polynomial Σ c_k z^k with coefficients in increasing degree.
    pub fn polynomial(name: impl Into<String>, coeffs: Vec<Complex64>) -> Self {
        let c1 = Arc::new(coeffs);
        let c2 = c1.clone();
        AnalyticFunction::new(name, move |z| {
            c1.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
        })
        .with_derivative(move |z| {
            c2.iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, (k, c)| acc * z + c * k as f64)
        })
    }

    /// exp(a(z − d/2)): equals the pure phase e^{iat} at z = d/2 + it, is real
    /// on ℝ and has no zeros.
    pub fn axis_phase(a: f64, d_half: f64) -> Self {
        AnalyticFunction::new(format!("exp({a}(z-{d_half}))"), move |z: Complex64| {
            ((z - d_half) * a).exp()
        })
        .with_derivative(move |z: Complex64| ((z - d_half) * a).exp() * a)
    }

    /// e^z.
    pub fn exp() -> Self {
        AnalyticFunction::new("exp", |z: Complex64| z.exp()).with_derivative(|z: Complex64| z.exp())
    }

    /// Pointwise product of two functions.
    pub fn times(&self, other: &AnalyticFunction) -> Self {
        let (a, b) = (self.clone(), other.clone());
        let (a2, b2) = (self.clone(), other.clone());
        AnalyticFunction::new(format!("{}*{}", self.name, other.name), move |z| a.eval(z) * b.eval(z))
            .with_derivative(move |z| a2.derivative(z) * b2.eval(z) + a2.eval(z) * b2.derivative(z))
    }
}
