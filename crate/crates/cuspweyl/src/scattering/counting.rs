//! Counting estimators over a resonance set: the weighted strip sum, the
//! out-of-strip count, the per-resonance kernel on a horizontal segment,
//! the Lorentzian disc identity and the general Weyl count.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::model::{ResonanceSet, SpectrumData, STRUCTURE_TOL};
use crate::analysis::quad::{integrate_panels, QuadratureSpec};
use crate::error::{Error, Result};

/// Leading-term data of the first Dirichlet series: a⁰* and ℓ*.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeadingTerm {
    pub a_star: f64,
    pub ell_star: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StripSum {
    pub t: f64,
    /// Σ mult·(d − 2Re ρ) over d − b ≤ Re ρ ≤ d/2, 0 ≤ Im ρ ≤ T.
    pub weighted: f64,
    /// π Σ (β − d/2) over the mirrored zeros β + iγ = d − ρ̄.
    pub proof_form: f64,
    /// (κ/2π) T log T.
    pub leading: f64,
    /// (κ/2π) T log T − (T/π)(κ/2 + log|a⁰*| − (d/2)ℓ*).
    pub predicted: Option<f64>,
}

pub fn strip_weighted_sum(r: &ResonanceSet, b: f64, t: f64, lead: Option<LeadingTerm>) -> StripSum {
    let d = r.d as f64;
    let h = r.half();
    let mut weighted = 0.0;
    for e in &r.entries {
        // Located resonances carry rounding; the strip edges get a little slack.
        if e.re >= d - b - STRUCTURE_TOL && e.re <= h && e.im >= 0.0 && e.im <= t {
            weighted += e.mult as f64 * (d - 2.0 * e.re);
        }
    }
    let kappa = r.kappa as f64;
    let leading = kappa / (2.0 * PI) * t * t.ln();
    let predicted = lead.map(|l| leading - t / PI * (kappa / 2.0 + l.a_star.abs().ln() - d / 2.0 * l.ell_star));
    StripSum { t, weighted, proof_form: PI * weighted / 2.0, leading, predicted }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutOfStrip {
    pub t: f64,
    pub count: u64,
    /// (εT)^α, the radius and the reference size of the count.
    pub radius: f64,
}

/// Resonances with Re ρ < d − b and |ρ − d/2 − iT| ≤ (εT)^α.
pub fn out_of_strip_count(r: &ResonanceSet, b: f64, t: f64, eps: f64, alpha: f64) -> Result<OutOfStrip> {
    if !(eps > 0.0 && eps < 1.0) || !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Precondition(format!("need 0 < eps < 1 and 0 < alpha ≤ 1, got {eps}, {alpha}")));
    }
    let d = r.d as f64;
    let radius = (eps * t).powf(alpha);
    let centre = Complex64::new(r.half(), t);
    let count = r
        .entries
        .iter()
        .filter(|e| e.re < d - b && (e.rho() - centre).norm() <= radius)
        .map(|e| e.mult as u64)
        .sum();
    Ok(OutOfStrip { t, count, radius })
}

/// Resonances with Re ρ in [lo, hi] and |Im ρ − t| ≤ half_height.
pub fn box_count(r: &ResonanceSet, re_range: (f64, f64), t: f64, half_height: f64) -> u64 {
    r.entries
        .iter()
        .filter(|e| e.re >= re_range.0 && e.re <= re_range.1 && (e.im - t).abs() <= half_height)
        .map(|e| e.mult as u64)
        .sum()
}

/// f_ρ(s) = Im[1/(s − d + ρ̄) − 1/(s − ρ)].
pub fn kernel_f(rho: Complex64, d: usize, s: Complex64) -> f64 {
    let d = d as f64;
    ((s - d + rho.conj()).inv() - (s - rho).inv()).im
}

fn segment_check(rho: Complex64, d: usize, b: f64, t: f64) -> Result<()> {
    let h = d as f64 / 2.0;
    let mirror = d as f64 - rho.re;
    for x in [rho.re, mirror] {
        if (rho.im - t).abs() < 1e-12 && x >= h - 1e-12 && x <= b + 1e-12 && (2.0 * rho.re - d as f64).abs() > 0.0 {
            return Err(Error::Degenerate(format!("resonance {rho} sits on the segment [{h}, {b}] + i{t}")));
        }
    }
    Ok(())
}

/// ∫_{d/2}^b f_ρ(σ + iT) dσ by quadrature. Its modulus is at most π, being
/// a difference of two argument variations along a horizontal segment.
pub fn resonance_kernel_integral(rho: Complex64, d: usize, b: f64, t: f64) -> Result<f64> {
    let h = d as f64 / 2.0;
    if !(b > h) {
        return Err(Error::Precondition(format!("need b > d/2, got {b}")));
    }
    if rho.re == h {
        return Ok(0.0);
    }
    segment_check(rho, d, b, t)?;
    let mut pts = vec![h, b];
    for x in [rho.re, d as f64 - rho.re] {
        if x > h && x < b {
            pts.push(x);
        }
    }
    pts.sort_by(f64::total_cmp);
    let spec = QuadratureSpec::default().with_abs(1e-13).with_rel(1e-12);
    let v = integrate_panels(|x: f64| kernel_f(rho, d, Complex64::new(x, t)), &pts, &spec)
        .into_result("resonance kernel")?;
    if v.abs() > PI + 1e-8 {
        return Err(Error::NotANumber(format!("kernel integral {v} exceeds π")));
    }
    Ok(v)
}

/// Closed form of the same integral from argument differences.
pub fn resonance_kernel_closed_form(rho: Complex64, d: usize, b: f64, t: f64) -> Result<f64> {
    let h = d as f64 / 2.0;
    if rho.re == h {
        return Ok(0.0);
    }
    segment_check(rho, d, b, t)?;
    let shift = d as f64 - rho.conj();
    let var = |a: Complex64| (Complex64::new(b, t) - a).arg() - (Complex64::new(h, t) - a).arg();
    let wrap = |x: f64| if x > PI { x - 2.0 * PI } else if x < -PI { x + 2.0 * PI } else { x };
    Ok(wrap(var(shift)) - wrap(var(rho)))
}

/// ∫_{−T}^{T} (d − 2Re ρ)/|ρ − d/2 + it|² dt in closed form:
/// 2 arctan[(d − 2Re ρ)T/|ρ − d/2|² · (1 − T²/|ρ − d/2|²)⁻¹] plus 2π·sign(d − 2Re ρ)
/// inside the disc |ρ − d/2| < T. Axis entries count 2π inside, the limit
/// from the left.
pub fn lorentzian_strip_integral(rho: Complex64, d: usize, t: f64) -> Result<f64> {
    let h = d as f64 / 2.0;
    let r2 = (rho - h).norm_sqr();
    let r = r2.sqrt();
    if (r - t).abs() <= 1e-12 * t.max(1.0) {
        return Err(Error::Degenerate(format!("|ρ − d/2| = T = {t}")));
    }
    let w = d as f64 - 2.0 * rho.re;
    let inside = r < t;
    let constant = if !inside {
        0.0
    } else if w < 0.0 {
        -2.0 * PI
    } else {
        2.0 * PI
    };
    if w == 0.0 {
        return Ok(constant);
    }
    Ok(2.0 * (w * t / r2 / (1.0 - t * t / r2)).atan() + constant)
}

/// The same integral by quadrature, as an oracle.
pub fn lorentzian_by_quadrature(rho: Complex64, d: usize, t: f64) -> Result<f64> {
    let h = d as f64 / 2.0;
    let w = d as f64 - 2.0 * rho.re;
    let a = h - rho.re;
    let f = |x: f64| w / (a * a + (x + rho.im) * (x + rho.im));
    let mut pts = vec![-t, t];
    // Break at the peak and at a few widths around it.
    for k in [-4.0, -1.0, 0.0, 1.0, 4.0] {
        let x = -rho.im + k * a.abs();
        if x > -t && x < t {
            pts.push(x);
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let spec = QuadratureSpec::default().with_abs(1e-12).with_rel(1e-12);
    integrate_panels(f, &pts, &spec).into_result("Lorentzian strip integral")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneralCount {
    pub t: f64,
    /// #{|r_i| ≤ T}.
    pub eigen_count: u64,
    /// (1/2π) Σ ∫_{−T}^{T} (d − 2Re ρ)/|ρ − d/2 + it|² dt from the closed form.
    pub lorentzian_sum: f64,
    /// The same sum by quadrature.
    pub lorentzian_quadrature: f64,
    /// #{ρ : |ρ − d/2| < T} counted directly; real poles right of d/2
    /// enter with a minus sign, as they do in the identity.
    pub disc_count: i64,
    /// R(T) = (1/π) Σ arctan[…], split by ||ρ − d/2| − T| > 1.
    pub r_far: f64,
    pub r_shell: f64,
    pub shell_count: u64,
    /// eigen_count + lorentzian_sum, the left side of the global identity.
    pub lhs: f64,
    /// Disc count recovered as weyl_rhs − eigen_count − R(T).
    pub recovered: Option<f64>,
}

impl GeneralCount {
    pub fn r_total(&self) -> f64 {
        self.r_far + self.r_shell
    }
}

/// Assembles both sides of the global counting identity for a finite set.
/// Entries on the circle |ρ − d/2| = T are rejected.
pub fn general_weyl_count(
    r: &ResonanceSet,
    spec: &SpectrumData,
    t: f64,
    weyl_rhs: Option<f64>,
) -> Result<GeneralCount> {
    if !(t > 0.0) {
        return Err(Error::Precondition(format!("need T > 0, got {t}")));
    }
    let h = r.half();
    let mut lorentzian = 0.0;
    let mut quadrature = 0.0;
    let mut disc_count = 0i64;
    let (mut r_far, mut r_shell, mut shell_count) = (0.0, 0.0, 0u64);
    for e in &r.entries {
        let rho = e.rho();
        let m = e.mult as f64;
        let full = lorentzian_strip_integral(rho, r.d, t)?;
        lorentzian += m * full;
        if !e.on_axis(h) {
            quadrature += m * lorentzian_by_quadrature(rho, r.d, t)?;
        } else if full != 0.0 {
            quadrature += m * full;
        }
        let dist = (rho - h).norm();
        let sign = if rho.re > h { -1.0 } else { 1.0 };
        let constant = if dist < t {
            disc_count += sign as i64 * e.mult as i64;
            2.0 * PI * sign
        } else {
            0.0
        };
        let term = m * (full - constant) / (2.0 * PI);
        if (dist - t).abs() > 1.0 {
            r_far += term;
        } else {
            r_shell += term;
            shell_count += e.mult as u64;
        }
    }
    let eigen_count = spec.count(t);
    let lorentzian_sum = lorentzian / (2.0 * PI);
    let r_total = r_far + r_shell;
    Ok(GeneralCount {
        t,
        eigen_count,
        lorentzian_sum,
        lorentzian_quadrature: quadrature / (2.0 * PI),
        disc_count,
        r_far,
        r_shell,
        shell_count,
        lhs: eigen_count as f64 + lorentzian_sum,
        recovered: weyl_rhs.map(|w| w - eigen_count as f64 - r_total),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scattering::model::{Eigen, Resonance};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn strip_sum_trivial_cases() {
        let s = strip_weighted_sum(&ResonanceSet::empty(1, 1), 1.2, 10.0, None);
        assert_eq!(s.weighted, 0.0);
        let axis = ResonanceSet::symmetric(1, 1, &[Resonance::new(c(0.5, 3.0), 1)]).unwrap();
        assert_eq!(strip_weighted_sum(&axis, 1.2, 10.0, None).weighted, 0.0);
    }

    #[test]
    fn strip_sum_weights_and_window() {
        let upper: Vec<Resonance> = (1..=10).map(|n| Resonance::new(c(0.25, n as f64), 1)).collect();
        let set = ResonanceSet::symmetric(1, 1, &upper).unwrap();
        let s = strip_weighted_sum(&set, 0.8, 5.5, Some(LeadingTerm { a_star: 1.0, ell_star: 0.0 }));
        assert!((s.weighted - 2.5).abs() < 1e-15);
        assert!((s.proof_form - PI * 1.25).abs() < 1e-14);
        let p = s.predicted.unwrap();
        assert!((p - (5.5 * 5.5f64.ln() / (2.0 * PI) - 5.5 / (2.0 * PI))).abs() < 1e-13);
        // b = 0.7 excludes Re ρ = 0.25 < d − b = 0.3.
        assert_eq!(strip_weighted_sum(&set, 0.7, 5.5, None).weighted, 0.0);
    }

    #[test]
    fn out_of_strip_linear_density() {
        // n-th resonance at height n, far to the left.
        let upper: Vec<Resonance> = (1..=2000).map(|n| Resonance::new(c(-2.0, n as f64), 1)).collect();
        let set = ResonanceSet::symmetric(1, 1, &upper).unwrap();
        for (t, eps, alpha) in [(1000.0, 0.1, 1.0), (500.0, 0.5, 0.5)] {
            let o = out_of_strip_count(&set, 1.5, t, eps, alpha).unwrap();
            let expected = 2.0 * (o.radius * o.radius - 2.5f64.powi(2)).sqrt();
            assert!((o.count as f64 - expected).abs() <= 2.0, "{} vs {expected}", o.count);
        }
        assert_eq!(out_of_strip_count(&ResonanceSet::empty(1, 1), 1.5, 10.0, 0.5, 1.0).unwrap().count, 0);
        assert!(out_of_strip_count(&set, 1.5, 10.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn box_count_window() {
        let upper: Vec<Resonance> = (1..=100).map(|n| Resonance::new(c(0.3, n as f64 / 10.0), 1)).collect();
        let set = ResonanceSet::symmetric(1, 1, &upper).unwrap();
        assert_eq!(box_count(&set, (0.2, 0.5), 5.0, 0.25), 5);
        assert_eq!(box_count(&set, (0.4, 0.5), 5.0, 0.25), 0);
    }

    #[test]
    fn kernel_integral_agrees_with_arguments() {
        let rho = c(0.3, 5.0);
        let q = resonance_kernel_integral(rho, 1, 1.2, 5.4).unwrap();
        let a = resonance_kernel_closed_form(rho, 1, 1.2, 5.4).unwrap();
        assert!(q.abs() < PI);
        assert!((q - a).abs() < 1e-10, "{q} {a}");
        assert_eq!(resonance_kernel_integral(c(0.5, 2.0), 1, 1.2, 5.0).unwrap(), 0.0);
    }

    #[test]
    fn kernel_integral_bounded_by_pi() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let d = rng.gen_range(1..=3);
            let h = d as f64 / 2.0;
            let rho = c(h - rng.gen_range(0.001..2.0), rng.gen_range(0.0..20.0));
            let t = rng.gen_range(0.0..20.0);
            let b = h + rng.gen_range(0.1..2.0);
            let q = resonance_kernel_integral(rho, d, b, t).unwrap();
            let a = resonance_kernel_closed_form(rho, d, b, t).unwrap();
            assert!(q.abs() <= PI + 1e-8);
            assert!((q - a).abs() < 1e-8, "{rho} {t} {b}: {q} {a}");
        }
    }

    #[test]
    fn kernel_integral_decays_off_the_line() {
        // The proof bounds the integral by (2Re ρ − d)(T − Im ρ)/|d/2 + iT − ρ|⁴
        // up to a constant; the scaled values settle.
        let rho = c(0.2, 0.0);
        let scaled: Vec<f64> = [50.0, 100.0, 200.0, 400.0]
            .iter()
            .map(|&t| {
                let v = resonance_kernel_integral(rho, 1, 1.5, t).unwrap();
                let bound = (2.0 * rho.re - 1.0) * t / (c(0.5, t) - rho).norm().powi(4);
                v / bound
            })
            .collect();
        for w in scaled.windows(2) {
            assert!((w[1] / w[0] - 1.0).abs() < 0.05, "{scaled:?}");
        }
    }

    #[test]
    fn lorentzian_closed_form_matches_quadrature() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut done = 0;
        while done < 200 {
            let d = rng.gen_range(1..=3);
            let h = d as f64 / 2.0;
            let rho = c(h + rng.gen_range(-3.0..0.5), rng.gen_range(-30.0..30.0));
            let t = rng.gen_range(0.5..30.0);
            if ((rho - h).norm() - t).abs() < 1e-3 {
                continue;
            }
            let a = lorentzian_strip_integral(rho, d, t).unwrap();
            let q = lorentzian_by_quadrature(rho, d, t).unwrap();
            assert!((a - q).abs() < 1e-8, "{rho} {t}: {a} {q}");
            done += 1;
        }
        let v = lorentzian_strip_integral(c(0.3, 5.0), 1, 10.0).unwrap();
        assert!((v - lorentzian_by_quadrature(c(0.3, 5.0), 1, 10.0).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn lorentzian_special_cases() {
        assert_eq!(lorentzian_strip_integral(c(0.5, 3.0), 1, 5.0).unwrap(), 2.0 * PI);
        assert_eq!(lorentzian_strip_integral(c(0.5, 8.0), 1, 5.0).unwrap(), 0.0);
        assert!(matches!(lorentzian_strip_integral(c(0.5, 5.0), 1, 5.0), Err(Error::Degenerate(_))));
        let rho = c(0.2, 100.0);
        let v = lorentzian_strip_integral(rho, 1, 10.0).unwrap();
        let r2 = (rho - 0.5).norm_sqr();
        assert!(v.abs() <= 0.6 * 2.0 * 10.0 / r2 * 1.02);
    }

    #[test]
    fn general_count_empty_set() {
        let spec = SpectrumData::new(vec![Eigen::real(1.0), Eigen::real(4.0), Eigen::real(9.0)]).unwrap();
        let g = general_weyl_count(&ResonanceSet::empty(3, 1), &spec, 5.0, None).unwrap();
        assert_eq!(g.eigen_count, 2);
        assert_eq!(g.lhs, 2.0);
        assert_eq!(g.disc_count, 0);
    }

    #[test]
    fn general_count_recovers_prescribed_law() {
        // Resonances with density matching N(T) = T², then the identity's right
        // side rebuilt from them recovers the disc count.
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut upper = Vec::new();
        for n in 1..=800 {
            let rad = (2.0 * n as f64).sqrt();
            let theta: f64 = rng.gen_range(0.05..1.5);
            upper.push(Resonance::new(c(1.5 - rad * theta.cos(), rad * theta.sin()), 1));
        }
        let set = ResonanceSet::symmetric(3, 1, &upper).unwrap();
        let spec = SpectrumData::default();
        for t in [5.3, 10.7, 15.1] {
            let g = general_weyl_count(&set, &spec, t, None).unwrap();
            assert!((g.lorentzian_sum - g.lorentzian_quadrature).abs() < 1e-7);
            let rhs = g.lhs;
            let again = general_weyl_count(&set, &spec, t, Some(rhs)).unwrap();
            assert!((again.recovered.unwrap() - g.disc_count as f64).abs() < 1e-9);
            assert!((g.disc_count as f64 - t * t).abs() < 0.1 * t * t);
        }
    }
}
