//! The three contour identities checked against brute-force zeros on
//! random Blaschke products, shared by the command line and the tests.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use super::{
    big_rectangle_weighted_sum, brute_force_zeros, carleman_weighted_count, small_rectangle_weighted_sum,
    weighted_sum_direct, BlaschkeProduct, CountingBox, Lemma, Rect,
};
use crate::analysis::quad::QuadratureSpec;
use crate::error::{Error, Result};

/// One identity evaluated both ways.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaCheck {
    pub case: usize,
    pub lemma: &'static str,
    pub zeros: usize,
    pub contour: f64,
    pub direct: f64,
    pub difference: f64,
    pub passes: bool,
}

/// The fixed geometry of the suite: d = 1, b = 1.2, T = 8, c = 1, small
/// box centred at T₀ = 4, Carleman disc about 0.52 of radius 9.
#[derive(Debug, Clone, Copy)]
pub struct SuiteGeometry {
    pub big: CountingBox,
    pub t_center: f64,
    pub carleman_b: f64,
    pub carleman_t: f64,
}

impl Default for SuiteGeometry {
    fn default() -> Self {
        SuiteGeometry {
            big: CountingBox { b: 1.2, d_half: 0.5, t: 8.0, c: 1.0 },
            t_center: 4.0,
            carleman_b: 0.52,
            carleman_t: 9.0,
        }
    }
}

impl SuiteGeometry {
    /// Zeros closer than 0.05 to any contour are redrawn.
    pub fn clear_of_contours(&self, z: Complex64) -> bool {
        let l = PI / self.big.c;
        let lines = [
            (z.re - self.big.d_half).abs(),
            (z.re - self.big.b).abs(),
            (z.re - self.carleman_b).abs(),
            (z.im - self.big.t).abs(),
            (z.im - (self.t_center - l)).abs(),
            (z.im - (self.t_center + l)).abs(),
            ((z - self.carleman_b).norm() - self.carleman_t).abs(),
        ];
        lines.iter().all(|&d| d > 0.05)
    }
}

/// A random symmetric product with `pairs` zeros in the upper half of the
/// right strip, plus conjugates.
pub fn suite_product<R: Rng>(rng: &mut R, g: &SuiteGeometry, pairs: usize) -> BlaschkeProduct {
    BlaschkeProduct::random(rng, 2.0 * g.big.d_half, pairs, (0.55, 1.15), (0.3, 7.7), |z| g.clear_of_contours(z))
}

/// Evaluates the three identities for one product. The tolerance is
/// max(tol, tol·|direct|).
pub fn check_product(p: &BlaschkeProduct, g: &SuiteGeometry, case: usize, tol: f64) -> Result<Vec<LemmaCheck>> {
    let f = p.to_function(format!("case {case}"));
    let spec = QuadratureSpec::default();
    let rect = Rect::new(g.big.d_half + 0.01, g.big.b + 0.1, -g.big.t - 0.5, g.big.t + 0.5)?;
    let zeros = brute_force_zeros(&f, &rect, 1e-4)?;
    if zeros.total_multiplicity() as usize != p.zeros.len() {
        return Err(Error::Precondition(format!(
            "brute force found {} zeros, the product has {}",
            zeros.total_multiplicity(),
            p.zeros.len()
        )));
    }
    let evaluations = [
        (
            "carleman",
            carleman_weighted_count(&f, g.carleman_b, g.carleman_t, &spec)?.value,
            Lemma::Carleman { b: g.carleman_b, t: g.carleman_t },
        ),
        ("big-rect", big_rectangle_weighted_sum(&f, &g.big, &spec)?.value, Lemma::BigRectangle(g.big)),
        (
            "small-rect",
            small_rectangle_weighted_sum(&f, &g.big, g.t_center, &spec)?.value,
            Lemma::SmallRectangle { bx: g.big, t_center: g.t_center },
        ),
    ];
    Ok(evaluations
        .into_iter()
        .map(|(name, contour, lemma)| {
            let direct = weighted_sum_direct(&zeros, &lemma);
            let difference = contour - direct;
            LemmaCheck {
                case,
                lemma: name,
                zeros: p.zeros.len(),
                contour,
                direct,
                difference,
                passes: difference.abs() <= tol.max(tol * direct.abs()),
            }
        })
        .collect())
}
