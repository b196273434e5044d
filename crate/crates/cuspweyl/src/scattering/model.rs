//! Resonance sets, spectral data and the factorized scattering determinant
//! φ(s) = φ(d/2) e^{iQ(s)} Π (s − d + ρ̄)/(s − ρ).

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when checking structural constraints.
pub const STRUCTURE_TOL: f64 = 1e-9;

/// Minimal distance between an evaluation point and a resonance.
pub const POLE_PROXIMITY: f64 = 1e-10;

/// Sets larger than this are reduced in parallel.
const PARALLEL_THRESHOLD: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resonance {
    pub re: f64,
    pub im: f64,
    #[serde(default = "one")]
    pub mult: u32,
}

fn one() -> u32 {
    1
}

impl Resonance {
    pub fn new(rho: Complex64, mult: u32) -> Self {
        Resonance { re: rho.re, im: rho.im, mult }
    }

    pub fn rho(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    /// A pole on Re s = d/2 gives the trivial factor 1.
    pub fn on_axis(&self, half: f64) -> bool {
        (self.re - half).abs() < 1e-15
    }
}

/// Poles of φ with multiplicities, in dimension d + 1 with κ cusps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceSet {
    pub d: usize,
    pub kappa: usize,
    pub entries: Vec<Resonance>,
}

impl ResonanceSet {
    /// Poles lie in Re ρ ≤ d/2 or on the real segment [d/2, d].
    pub fn new(d: usize, kappa: usize, entries: Vec<Resonance>) -> Result<Self> {
        if d == 0 || kappa == 0 {
            return Err(Error::Precondition("need d ≥ 1 and κ ≥ 1".into()));
        }
        let half = d as f64 / 2.0;
        for e in &entries {
            if !(e.re.is_finite() && e.im.is_finite()) {
                return Err(Error::NotANumber(format!("resonance {} + {}i", e.re, e.im)));
            }
            if e.mult == 0 {
                return Err(Error::Precondition("multiplicities must be positive".into()));
            }
            let in_half_plane = e.re <= half + STRUCTURE_TOL;
            let on_segment = e.im.abs() <= STRUCTURE_TOL && e.re >= half && e.re <= d as f64;
            if !(in_half_plane || on_segment) {
                return Err(Error::ClassMembership(format!(
                    "resonance {} + {}i lies outside Re s ≤ d/2 ∪ [d/2, d]",
                    e.re, e.im
                )));
            }
        }
        Ok(ResonanceSet { d, kappa, entries })
    }

    pub fn empty(d: usize, kappa: usize) -> Self {
        ResonanceSet { d, kappa, entries: Vec::new() }
    }

    /// Adds the conjugate of every entry with nonzero imaginary part.
    pub fn symmetric(d: usize, kappa: usize, upper: &[Resonance]) -> Result<Self> {
        let mut entries = Vec::with_capacity(2 * upper.len());
        for e in upper {
            entries.push(*e);
            if e.im.abs() > STRUCTURE_TOL {
                entries.push(Resonance { re: e.re, im: -e.im, mult: e.mult });
            }
        }
        Self::new(d, kappa, entries)
    }

    pub fn half(&self) -> f64 {
        self.d as f64 / 2.0
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.entries.iter().map(|e| e.mult as u64).sum()
    }

    /// Whether the set is closed under ρ ↦ ρ̄ (with multiplicity).
    pub fn is_conjugation_closed(&self) -> bool {
        let key = |e: &Resonance, flip: bool| {
            let im = if flip { -e.im } else { e.im };
            (e.re, im, e.mult)
        };
        let mut a: Vec<_> = self.entries.iter().map(|e| key(e, false)).collect();
        let mut b: Vec<_> = self.entries.iter().map(|e| key(e, true)).collect();
        let cmp = |x: &(f64, f64, u32), y: &(f64, f64, u32)| {
            x.1.total_cmp(&y.1).then(x.0.total_cmp(&y.0)).then(x.2.cmp(&y.2))
        };
        a.sort_by(cmp);
        b.sort_by(cmp);
        a.iter().zip(&b).all(|(x, y)| {
            (x.0 - y.0).abs() <= STRUCTURE_TOL && (x.1 - y.1).abs() <= STRUCTURE_TOL && x.2 == y.2
        })
    }

    /// Partial sums of Σ mult (d − 2Re ρ)/|ρ − d/2|², ordered by |ρ − d/2|.
    pub fn convergence_partial_sums(&self) -> Vec<(f64, f64)> {
        let h = self.half();
        let mut terms: Vec<(f64, f64)> = self
            .entries
            .iter()
            .filter(|e| (e.re - h).abs() > 0.0)
            .map(|e| {
                let w = e.rho() - h;
                (w.norm(), e.mult as f64 * (self.d as f64 - 2.0 * e.re) / w.norm_sqr())
            })
            .collect();
        terms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut acc = 0.0;
        terms
            .into_iter()
            .map(|(r, t)| {
                acc += t;
                (r, acc)
            })
            .collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: ResonanceSet = serde_json::from_str(text)?;
        Self::new(raw.d, raw.kappa, raw.entries)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Spectral parameter of an eigenvalue λ = d²/4 + r²: real r ≥ 0, or
/// imaginary r = i·r_im for the small eigenvalues below d²/4.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigen {
    #[serde(default)]
    pub r: f64,
    #[serde(default)]
    pub r_imag: f64,
    #[serde(default = "one")]
    pub mult: u32,
}

impl Eigen {
    pub fn real(r: f64) -> Self {
        Eigen { r, r_imag: 0.0, mult: 1 }
    }

    pub fn is_small(&self) -> bool {
        self.r_imag > 0.0
    }

    /// λ − d²/4.
    pub fn shifted_eigenvalue(&self) -> f64 {
        self.r * self.r - self.r_imag * self.r_imag
    }
}

/// Point spectrum, sorted by λ.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SpectrumData {
    pub eigen_r: Vec<Eigen>,
}

impl SpectrumData {
    pub fn new(mut eigen_r: Vec<Eigen>) -> Result<Self> {
        for e in &eigen_r {
            let ok = e.r.is_finite() && e.r_imag.is_finite() && e.r >= 0.0 && e.r_imag >= 0.0;
            if !ok || (e.r > 0.0 && e.r_imag > 0.0) {
                return Err(Error::Precondition(format!(
                    "spectral parameter must be real ≥ 0 or purely imaginary, got {} + {}i",
                    e.r, e.r_imag
                )));
            }
            if e.mult == 0 {
                return Err(Error::Precondition("multiplicities must be positive".into()));
            }
        }
        eigen_r.sort_by(|a, b| a.shifted_eigenvalue().total_cmp(&b.shifted_eigenvalue()));
        Ok(SpectrumData { eigen_r })
    }

    /// N_pp(T) = #{λ ≤ d²/4 + T²} with multiplicity.
    pub fn count(&self, t: f64) -> u64 {
        let t2 = t * t;
        self.eigen_r.iter().filter(|e| e.shifted_eigenvalue() <= t2).map(|e| e.mult as u64).sum()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SpectrumData = serde_json::from_str(text)?;
        Self::new(raw.eigen_r)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Anything that can be evaluated as a scalar scattering determinant.
pub trait ScatteringDeterminant: Sync {
    fn dimension(&self) -> usize;
    fn cusps(&self) -> usize;
    fn eval(&self, s: Complex64) -> Result<Complex64>;
    /// φ′/φ(s).
    fn log_derivative(&self, s: Complex64) -> Result<Complex64>;
    /// Known resonances, for models that carry them explicitly.
    fn resonances(&self) -> Option<&ResonanceSet> {
        None
    }
}

/// Scattering determinant with finitely many resonances and an explicit
/// polynomial Q, stored by its coefficients in w = s − d/2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiModel {
    pub resonances: ResonanceSet,
    pub phi_at_half: Complex64,
    pub q_coeffs: Vec<Complex64>,
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn merge(mut self, other: Compensated) -> Compensated {
        self.add(other.sum);
        self.add(other.carry);
        self
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Σ f(entry) with compensated real and imaginary parts, in parallel for
/// large sets.
pub(crate) fn compensated_sum<F>(entries: &[Resonance], f: F) -> Complex64
where
    F: Fn(&Resonance) -> Complex64 + Sync,
{
    let fold = |(mut re, mut im): (Compensated, Compensated), e: &Resonance| {
        let v = f(e);
        re.add(v.re);
        im.add(v.im);
        (re, im)
    };
    let (re, im) = if entries.len() > PARALLEL_THRESHOLD {
        entries
            .par_iter()
            .fold(|| (Compensated::default(), Compensated::default()), fold)
            .reduce(
                || (Compensated::default(), Compensated::default()),
                |a, b| (a.0.merge(b.0), a.1.merge(b.1)),
            )
    } else {
        entries.iter().fold((Compensated::default(), Compensated::default()), fold)
    };
    Complex64::new(re.value(), im.value())
}

impl PhiModel {
    /// Checks the structural constraints: degree of Q at most 2⌊d/2⌋ + 1,
    /// Q real on the axis and Q(s) + Q(d − s) constant, conjugation-closed
    /// resonances, |φ(d/2)| = 1 and consistency of φ(d/2) with the product.
    pub fn new(resonances: ResonanceSet, phi_at_half: Complex64, q_coeffs: Vec<Complex64>) -> Result<Self> {
        let d = resonances.d;
        let max_degree = 2 * (d / 2) + 1;
        if q_coeffs.len() > max_degree + 1 {
            return Err(Error::Precondition(format!(
                "Q has degree {} > {max_degree}",
                q_coeffs.len() - 1
            )));
        }
        for (k, q) in q_coeffs.iter().enumerate() {
            // Q(iT) real for real T and Q(w) + Q(−w) constant force
            // q_0 real, q_k = 0 for even k ≥ 2 and q_k imaginary for odd k.
            let bad = match k {
                0 => q.im.abs() > STRUCTURE_TOL,
                k if k % 2 == 0 => q.norm() > STRUCTURE_TOL,
                _ => q.re.abs() > STRUCTURE_TOL,
            };
            if bad {
                return Err(Error::Precondition(format!("coefficient q_{k} = {q} violates the constraints on Q")));
            }
        }
        if (phi_at_half.norm() - 1.0).abs() > STRUCTURE_TOL {
            return Err(Error::Precondition("|φ(d/2)| must be 1".into()));
        }
        if !resonances.is_conjugation_closed() {
            return Err(Error::Precondition("resonance set must be closed under conjugation".into()));
        }
        let m = PhiModel { resonances, phi_at_half, q_coeffs };
        let h = Complex64::new(m.resonances.half(), 0.0);
        if m.nearest_resonance(h).map_or(true, |(_, dist)| dist > POLE_PROXIMITY) {
            let at_half = m.eval_unchecked(h);
            if (at_half - phi_at_half).norm() > 1e-8 {
                return Err(Error::Precondition(format!(
                    "e^{{iQ(d/2)}} Π (d/2 − d + ρ̄)/(d/2 − ρ) = {} is inconsistent with φ(d/2)",
                    at_half / phi_at_half
                )));
            }
        }
        Ok(m)
    }

    /// Chooses q_0 so that the product formula reproduces φ(d/2).
    pub fn normalized(resonances: ResonanceSet, phi_at_half: Complex64, odd_coeffs: &[f64]) -> Result<Self> {
        // Odd coefficients q_1, q_3, … of the form i·c.
        let mut q = vec![Complex64::new(0.0, 0.0); (2 * odd_coeffs.len()).max(1)];
        for (j, c) in odd_coeffs.iter().enumerate() {
            q[2 * j + 1] = Complex64::new(0.0, *c);
        }
        let provisional = PhiModel { resonances, phi_at_half, q_coeffs: q };
        let h = Complex64::new(provisional.resonances.half(), 0.0);
        let sum = compensated_sum(&provisional.resonances.entries, |e| {
            if e.on_axis(h.re) {
                return Complex64::new(0.0, 0.0);
            }
            let rho = e.rho();
            e.mult as f64 * ((h - provisional.resonances.d as f64 + rho.conj()) / (h - rho)).ln()
        });
        // e^{i q_0 + sum} = 1 up to the 2π ambiguity; sum is imaginary
        // (±iπ per real pole) when the set is conjugation-closed.
        let mut model = provisional;
        model.q_coeffs[0] = Complex64::new(-sum.im, 0.0);
        Self::new(model.resonances, model.phi_at_half, model.q_coeffs)
    }

    pub fn trivial(d: usize, kappa: usize) -> Self {
        PhiModel {
            resonances: ResonanceSet::empty(d, kappa),
            phi_at_half: Complex64::new(1.0, 0.0),
            q_coeffs: vec![],
        }
    }

    pub fn d(&self) -> usize {
        self.resonances.d
    }

    /// Q(s) by Horner in w = s − d/2.
    pub fn q(&self, s: Complex64) -> Complex64 {
        let w = s - self.resonances.half();
        self.q_coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * w + c)
    }

    /// Q′(s).
    pub fn q_prime(&self, s: Complex64) -> Complex64 {
        let w = s - self.resonances.half();
        self.q_coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, (k, c)| acc * w + c * k as f64)
    }

    /// Q₂(T) = Re[Q(b + iT) − Q(d/2 + iT)] as real coefficients in T.
    pub fn q2_coefficients(&self, b: f64) -> Vec<f64> {
        let c = b - self.resonances.half();
        let n = self.q_coeffs.len();
        let mut out = vec![0.0; n.max(1)];
        for (k, q) in self.q_coeffs.iter().enumerate() {
            // (c + iT)^k − (iT)^k = Σ_{j<k} C(k, j) c^{k−j} (iT)^j.
            let mut binom = 1.0;
            for j in 0..k {
                if j > 0 {
                    binom *= (k - j + 1) as f64 / j as f64;
                }
                let ij = Complex64::new(0.0, 1.0).powu(j as u32);
                out[j] += (q * binom * c.powi((k - j) as i32) * ij).re;
            }
        }
        while out.len() > 1 && out.last().map_or(false, |v| v.abs() < 1e-15) {
            out.pop();
        }
        out
    }

    /// Nearest resonance and its distance.
    pub fn nearest_resonance(&self, s: Complex64) -> Option<(Complex64, f64)> {
        self.resonances
            .entries
            .iter()
            .filter(|e| !e.on_axis(self.resonances.half()))
            .map(|e| (e.rho(), (s - e.rho()).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }

    fn eval_unchecked(&self, s: Complex64) -> Complex64 {
        let d = self.d() as f64;
        let h = d / 2.0;
        let sum = compensated_sum(&self.resonances.entries, |e| {
            if e.on_axis(h) {
                return Complex64::new(0.0, 0.0);
            }
            let rho = e.rho();
            e.mult as f64 * ((s - d + rho.conj()) / (s - rho)).ln()
        });
        self.phi_at_half * (Complex64::new(0.0, 1.0) * self.q(s) + sum).exp()
    }
}

/// φ(s) by a compensated sum of log-factors.
pub fn phi_eval(m: &PhiModel, s: Complex64) -> Result<Complex64> {
    if let Some((rho, dist)) = m.nearest_resonance(s) {
        if dist <= POLE_PROXIMITY {
            return Err(Error::Pole { re: rho.re, im: rho.im });
        }
    }
    let v = m.eval_unchecked(s);
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::NotANumber(format!("φ({s})")));
    }
    Ok(v)
}

impl ScatteringDeterminant for PhiModel {
    fn dimension(&self) -> usize {
        self.d()
    }

    fn cusps(&self) -> usize {
        self.resonances.kappa
    }

    fn eval(&self, s: Complex64) -> Result<Complex64> {
        phi_eval(self, s)
    }

    fn log_derivative(&self, s: Complex64) -> Result<Complex64> {
        if let Some((rho, dist)) = self.nearest_resonance(s) {
            if dist <= POLE_PROXIMITY {
                return Err(Error::Pole { re: rho.re, im: rho.im });
            }
        }
        let d = self.d() as f64;
        let sum = compensated_sum(&self.resonances.entries, |e| {
            if e.on_axis(d / 2.0) {
                return Complex64::new(0.0, 0.0);
            }
            let rho = e.rho();
            e.mult as f64 * (1.0 / (s - d + rho.conj()) - 1.0 / (s - rho))
        });
        Ok(Complex64::new(0.0, 1.0) * self.q_prime(s) + sum)
    }

    fn resonances(&self) -> Option<&ResonanceSet> {
        Some(&self.resonances)
    }
}

/// Random conjugation-closed model with `pairs` resonances in the upper
/// half plane, Re ρ ∈ [d/2 − width, d/2), Im ρ ∈ (0, height].
pub fn random_model<R: rand::Rng>(
    rng: &mut R,
    d: usize,
    pairs: usize,
    width: f64,
    height: f64,
    odd_coeffs: &[f64],
) -> Result<PhiModel> {
    let h = d as f64 / 2.0;
    let upper: Vec<Resonance> = (0..pairs)
        .map(|_| Resonance {
            re: h - width * rng.gen_range(0.01..1.0),
            im: height * rng.gen_range(1e-3..1.0),
            mult: 1,
        })
        .collect();
    let set = ResonanceSet::symmetric(d, 1, &upper)?;
    let phi_half = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    PhiModel::normalized(set, Complex64::new(phi_half, 0.0), odd_coeffs)
}
