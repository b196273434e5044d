//! Finite Blaschke-type products Π (z − ρ)/(z − d + ρ̄), closed under
//! conjugation so that F is real on ℝ and unimodular on Re z = d/2.

use num_complex::Complex64;
use rand::Rng;

use super::function::AnalyticFunction;

#[derive(Debug, Clone, PartialEq)]
pub struct BlaschkeProduct {
    pub d: f64,
    /// All zeros, conjugates included.
    pub zeros: Vec<Complex64>,
}

impl BlaschkeProduct {
    /// Product over `upper` and the conjugates of its non-real members.
    pub fn symmetric(d: f64, upper: &[Complex64]) -> Self {
        let mut zeros = Vec::with_capacity(2 * upper.len());
        for &z in upper {
            zeros.push(z);
            if z.im != 0.0 {
                zeros.push(z.conj());
            }
        }
        BlaschkeProduct { d, zeros }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.zeros
            .iter()
            .map(|&r| (z - r) / (z - self.d + r.conj()))
            .product()
    }

    pub fn log_derivative(&self, z: Complex64) -> Complex64 {
        self.zeros
            .iter()
            .map(|&r| (z - r).inv() - (z - self.d + r.conj()).inv())
            .sum()
    }

    pub fn to_function(&self, name: impl Into<String>) -> AnalyticFunction {
        let a = self.clone();
        let b = self.clone();
        AnalyticFunction::new(name, move |z| a.eval(z))
            .with_derivative(move |z| b.eval(z) * b.log_derivative(z))
    }

    /// `pairs` zeros drawn uniformly in [x0, x1] × [y0, y1] (upper half plane),
    /// each kept only if `accept` approves it.
    pub fn random<R: Rng>(
        rng: &mut R,
        d: f64,
        pairs: usize,
        x: (f64, f64),
        y: (f64, f64),
        accept: impl Fn(Complex64) -> bool,
    ) -> Self {
        let mut upper = Vec::with_capacity(pairs);
        let mut guard = 0;
        while upper.len() < pairs && guard < 100_000 {
            guard += 1;
            let z = Complex64::new(rng.gen_range(x.0..x.1), rng.gen_range(y.0..y.1));
            if accept(z) && upper.iter().all(|&w: &Complex64| (w - z).norm() > 1e-2) {
                upper.push(z);
            }
        }
        BlaschkeProduct::symmetric(d, &upper)
    }
}
