//! The diagonal term P(T) = c₀T^{d+1} + … + c_kT^{d+1−2k} + …, from the
//! pairings ∫ ψ(t) sinh|t| M_{k−(d+2)/2}(cosh t − 1) dt.

use nalgebra::{DMatrix, DVector};

use super::term::oscillation_panels;
use crate::analysis::malpha::{m_alpha_pair, MAlphaIndex, SmoothFunction};
use crate::analysis::psi::TestFunctionPsi;
use crate::analysis::quad::QuadratureSpec;
use crate::error::{Error, Result};
use crate::parametrix::c0_constant;

/// Series of acosh(1 + v)² in v.
const T2_SERIES: [f64; 14] = [
    0.0,
    2.0,
    -1.0 / 3.0,
    4.0 / 45.0,
    -1.0 / 35.0,
    16.0 / 1575.0,
    -8.0 / 2079.0,
    32.0 / 21021.0,
    -4.0 / 6435.0,
    256.0 / 984555.0,
    -128.0 / 1154725.0,
    512.0 / 10669659.0,
    -128.0 / 6084351.0,
    2048.0 / 219712675.0,
];

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut out = vec![0.0; n];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// ψ̃(v) = ψ(t) with cosh t − 1 = v; ψ is even, hence a function of v.
pub struct PsiInV<'a> {
    psi: &'a TestFunctionPsi,
    series: Vec<f64>,
    series_end: f64,
    cuts: Vec<f64>,
}

impl<'a> PsiInV<'a> {
    pub fn new(psi: &'a TestFunctionPsi) -> Self {
        let t = psi.cutoff_t;
        // Below t_s both sin(Tt)/(πt) is a rapidly converging series in t²
        // and ρ(At) = 1, so ψ̃ is a power series in v.
        let t_s = (0.2 / t).min(psi.mollifier.flat_radius / psi.scale_a);
        let series_end = t_s.cosh() - 1.0;
        let mut series = vec![0.0; T2_SERIES.len()];
        let mut power = vec![0.0; T2_SERIES.len()];
        power[0] = 1.0;
        let mut coeff = t / std::f64::consts::PI;
        for n in 0..10 {
            for (s, p) in series.iter_mut().zip(&power) {
                *s += coeff * p;
            }
            power = poly_mul(&power, &T2_SERIES);
            coeff *= -t * t / ((2 * n + 2) as f64 * (2 * n + 3) as f64);
        }
        let cuts = oscillation_panels(t, psi.support())
            .into_iter()
            .map(|x| x.cosh() - 1.0)
            .skip(1)
            .collect::<Vec<_>>();
        let cuts = cuts[..cuts.len() - 1].to_vec();
        PsiInV { psi, series, series_end, cuts }
    }
}

impl SmoothFunction for PsiInV<'_> {
    fn derivative(&self, n: usize, v: f64) -> f64 {
        if v <= self.series_end {
            let mut acc = 0.0;
            for k in (n..self.series.len()).rev() {
                let falling: f64 = (0..n).map(|j| (k - j) as f64).product();
                acc = acc * v + self.series[k] * falling;
            }
            return acc;
        }
        let t = v.ln_1p().acosh_from_log();
        let (sh, ch) = (t.sinh(), t.cosh());
        let p = |k: usize| self.psi.derivative(k, t);
        match n {
            0 => p(0),
            1 => p(1) / sh,
            2 => p(2) / (sh * sh) - p(1) * ch / sh.powi(3),
            3 => p(3) / sh.powi(3) - 3.0 * p(2) * ch / sh.powi(4) + p(1) * (3.0 * ch * ch - sh * sh) / sh.powi(5),
            _ => panic!("derivatives are provided up to order 3"),
        }
    }

    fn max_order(&self) -> usize {
        3
    }

    fn support_end(&self) -> f64 {
        self.psi.support().cosh() - 1.0
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.cuts.clone()
    }
}

/// acosh(1 + v) computed from log(1 + v) without cancellation.
trait AcoshFromLog {
    fn acosh_from_log(self) -> f64;
}

impl AcoshFromLog for f64 {
    fn acosh_from_log(self) -> f64 {
        // self = log(1+v); acosh(1+v) = log(1+v + sqrt(v(2+v))).
        let v = self.exp_m1();
        (v + (v * (2.0 + v)).sqrt()).ln_1p()
    }
}

/// ∫_ℝ ψ(t) sinh|t| M_{k−(d+2)/2}(cosh t − 1) dt.
pub fn diagonal_integral(psi: &TestFunctionPsi, d: usize, k: usize, spec: &QuadratureSpec) -> Result<f64> {
    let index = k as f64 - (d as f64 + 2.0) / 2.0;
    let idx = MAlphaIndex::for_index(index);
    if idx.reduction_order > 3 {
        return Err(Error::UnsupportedDimension(d));
    }
    let g = PsiInV::new(psi);
    Ok(2.0 * m_alpha_pair(idx, &g, spec)?)
}

/// P(T) as coefficients of T^{powers[j]}, fitted from samples.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalPolynomial {
    pub powers: Vec<i32>,
    pub coeffs: Vec<f64>,
    pub condition: f64,
    /// (T, Σ_k C₀(−½)^k U_k I_k(T)).
    pub samples: Vec<(f64, f64)>,
}

impl DiagonalPolynomial {
    pub fn eval(&self, t: f64) -> f64 {
        self.powers.iter().zip(&self.coeffs).map(|(&p, &c)| c * t.powi(p)).sum()
    }

    pub fn leading(&self) -> (i32, f64) {
        (self.powers[0], self.coeffs[0])
    }
}

const MAX_CONDITION: f64 = 1e12;

/// Σ_k C₀(−½)^k U_k ∫ ψ sinh|t| M_{k−(d+2)/2}(cosh t − 1) dt at T ∈ [T₀, 2T₀]
/// (T₀ the cutoff of `psi`, A fixed), then a least-squares fit on the powers
/// d+1, d−1, … . `u_diag[k]` is ∫ u_k(x, x) dx.
pub fn diagonal_term(psi: &TestFunctionPsi, d: usize, u_diag: &[f64]) -> Result<DiagonalPolynomial> {
    let top = d as i32 + 1;
    let last = match u_diag.iter().rposition(|&u| u != 0.0) {
        None => {
            return Ok(DiagonalPolynomial { powers: vec![top], coeffs: vec![0.0], condition: 1.0, samples: vec![] })
        }
        Some(k) => k,
    };
    let n_powers = last + 3;
    let powers: Vec<i32> = (0..n_powers).map(|j| top - 2 * j as i32).collect();
    let n_samples = n_powers + 4;
    let t0 = psi.cutoff_t;
    let spec = QuadratureSpec::default().with_rel(1e-12).with_abs(1e-13);
    let c0 = c0_constant(d);
    let mut samples = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        let t = t0 * (1.0 + i as f64 / (n_samples - 1) as f64);
        let p = TestFunctionPsi::with_mollifier(t, psi.scale_a, psi.mollifier)?;
        let mut total = 0.0;
        for (k, &u) in u_diag.iter().enumerate().take(last + 1) {
            if u != 0.0 {
                total += c0 * (-0.5f64).powi(k as i32) * u * diagonal_integral(&p, d, k, &spec)?;
            }
        }
        samples.push((t, total));
    }
    let a = DMatrix::from_fn(n_samples, n_powers, |i, j| (samples[i].0 / t0).powi(powers[j]));
    let b = DVector::from_iterator(n_samples, samples.iter().map(|s| s.1));
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let condition = sv.max() / sv.min();
    if !(condition < MAX_CONDITION) {
        return Err(Error::Conditioning { condition });
    }
    let q = svd.solve(&b, 1e-15).map_err(|e| Error::Degenerate(e.to_string()))?;
    let coeffs = powers.iter().zip(q.iter()).map(|(&p, &c)| c / t0.powi(p)).collect();
    Ok(DiagonalPolynomial { powers, coeffs, condition, samples })
}
