use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cuspweyl::analysis::{m_alpha_eval, MAlphaIndex, Mollifier, QuadratureSpec, TestFunctionPsi};
use cuspweyl::cusp::{gamma_lattice, weyl_c0, Lattice};
use cuspweyl::dirichlet::{mean_value_integral, ClassicalDirichletSeries};
use cuspweyl::scattering::{
    log_grid, lorentzian_by_quadrature, lorentzian_strip_integral, phase_derivative, phi_eval, random_model,
    resonance_kernel_integral, scattering_phase, scattering_phase_by_argument, weyl_fit, ResonanceSet,
};
use cuspweyl::zerocount::{brute_force_zeros, carleman_weighted_count, winding_number, BlaschkeProduct, Rect};

/// Finite classical series with strictly increasing bases above 1.
fn series_terms() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-3.0f64..3.0, 1.1f64..50.0), 1..8).prop_map(|mut t| {
        t.sort_by(|x, y| x.1.total_cmp(&y.1));
        t.dedup_by(|x, y| x.1 - y.1 < 1e-6);
        t
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mollifier_contract(t in -1.5f64..1.5) {
        let rho = Mollifier::default();
        let v = rho.eval(t);
        prop_assert!((0.0..=1.0).contains(&v));
        prop_assert_eq!(v, rho.eval(-t));
        if t.abs() <= 0.5 {
            prop_assert_eq!(v, 1.0);
        }
        if t.abs() >= 1.0 {
            prop_assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn psi_is_even(t in 0.0f64..5.0, big_t in 10.0f64..200.0, a in 0.2f64..1.0) {
        let psi = TestFunctionPsi::new(big_t, a).unwrap();
        prop_assert_eq!(psi.eval(t), psi.eval(-t));
        prop_assert!(psi.eval(t).is_finite());
    }

    #[test]
    fn m_alpha_recursion(alpha in 0.05f64..6.0, s in 0.01f64..50.0) {
        let lhs = s * m_alpha_eval(MAlphaIndex::pointwise(alpha - 1.0), s).unwrap();
        let rhs = alpha * m_alpha_eval(MAlphaIndex::pointwise(alpha), s).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs());
    }

    #[test]
    fn weyl_constant_forms_agree(vol in 0.01f64..100.0, d in 1usize..=6) {
        let w = weyl_c0(vol, d).unwrap();
        prop_assert!(((w.heat_form - w.ball_form) / w.heat_form).abs() <= 1e-12);
    }

    #[test]
    fn lorentzian_closed_form(
        d in 1usize..=3,
        depth in 0.01f64..2.0,
        im in -30.0f64..30.0,
        t in 0.5f64..30.0,
    ) {
        let h = d as f64 / 2.0;
        let rho = Complex64::new(h - depth, im);
        prop_assume!(((rho - h).norm() - t).abs() > 1e-3);
        let a = lorentzian_strip_integral(rho, d, t).unwrap();
        let b = lorentzian_by_quadrature(rho, d, t).unwrap();
        prop_assert!((a - b).abs() <= 1e-8, "{} vs {}", a, b);
    }

    #[test]
    fn resonance_kernel_is_at_most_pi(
        d in 1usize..=3,
        depth in 0.01f64..2.0,
        im in -30.0f64..30.0,
        extra in 0.05f64..2.0,
        t in 0.0f64..30.0,
    ) {
        let h = d as f64 / 2.0;
        let rho = Complex64::new(h - depth, im);
        prop_assume!((im - t).abs() > 1e-3);
        let v = resonance_kernel_integral(rho, d, h + extra, t).unwrap();
        prop_assert!(v.abs() <= PI + 1e-8);
    }

    #[test]
    fn mean_value_bound(
        terms in series_terms(),
        b in 0.1f64..2.0,
        log_t in 0.0f64..(1e6f64).ln(),
    ) {
        let l = ClassicalDirichletSeries::new(terms).unwrap();
        let m = mean_value_integral(&l, b, log_t.exp()).unwrap();
        prop_assert!(m.value.abs() <= m.bound * (1.0 + 1e-12));
    }

    #[test]
    fn classical_exponential_round_trip(terms in series_terms()) {
        let l = ClassicalDirichletSeries::new(terms).unwrap();
        let back = l.to_exponential().to_classical().unwrap();
        let stored: Vec<(f64, f64)> = back.terms().collect();
        prop_assert_eq!(stored, l.terms().collect::<Vec<_>>());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn factorization_identities(seed in any::<u64>(), d in 1usize..=3, pairs in 1usize..200) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_model(&mut rng, d, pairs, 1.0, 40.0, &[0.25]).unwrap();
        let h = d as f64 / 2.0;
        for i in 0..40 {
            let t = 0.013 + i as f64;
            prop_assert!((phi_eval(&m, Complex64::new(h, t)).unwrap().norm() - 1.0).abs() <= 1e-10);
            prop_assert!(phase_derivative(&m, t).unwrap().resonance_sum <= 0.0);
            let s = Complex64::new(h + 0.37 + 0.01 * i as f64, 1.1 * t);
            if let (Ok(a), Ok(b)) = (phi_eval(&m, s), phi_eval(&m, d as f64 - s)) {
                prop_assert!((a * b - 1.0).norm() <= 1e-10);
            }
        }
    }

    #[test]
    fn phase_matches_argument_tracking(seed in any::<u64>(), d in 1usize..=3, pairs in 1usize..15) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_model(&mut rng, d, pairs, 1.0, 20.0, &[0.1]).unwrap();
        let a = scattering_phase(&m, 20.0).unwrap();
        let b = scattering_phase_by_argument(&m, 20.0, 0.05).unwrap();
        prop_assert!((a - b).abs() <= 1e-6, "{} vs {}", a, b);
    }

    #[test]
    fn weyl_fit_recovers_exact_data(a in 0.01f64..5.0, b in -3.0f64..3.0, c in -3.0f64..3.0) {
        let s: Vec<(f64, f64)> =
            log_grid(10.0, 1e4, 60).into_iter().map(|t| (t, a * t * t + b * t * t.ln() + c * t)).collect();
        let f = weyl_fit(&s, 1).unwrap();
        prop_assert!((f.a - a).abs() <= 1e-10 * a.abs().max(1.0));
        prop_assert!((f.b - b).abs() <= 1e-8 * b.abs().max(1.0));
    }

    #[test]
    fn resonance_set_json_round_trip(seed in any::<u64>(), pairs in 1usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_model(&mut rng, 2, pairs, 1.0, 40.0, &[]).unwrap();
        let back = ResonanceSet::from_json(&m.resonances.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, m.resonances);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn zero_count_equals_winding(seed in any::<u64>(), pairs in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = BlaschkeProduct::random(&mut rng, 1.0, pairs, (0.6, 1.4), (-3.0, 3.0), |_| true);
        let f = p.to_function("random");
        let rect = Rect::new(0.55, 1.5, -3.5, 3.5).unwrap();
        let w = winding_number(&f, &rect).unwrap();
        prop_assert!((w - w.round()).abs() < 0.1);
        let zeros = brute_force_zeros(&f, &rect, 1e-4).unwrap();
        prop_assert_eq!(zeros.total_multiplicity() as f64, w.round());
    }

    #[test]
    fn carleman_ignores_unimodular_factor(seed in any::<u64>(), theta in -PI..PI) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = BlaschkeProduct::random(&mut rng, 1.0, 3, (0.6, 1.1), (0.5, 5.0), |z| {
            ((z - 0.52).norm() - 6.0).abs() > 0.05
        });
        let spec = QuadratureSpec::default();
        let f = p.to_function("F");
        let q = p.clone();
        let unit = Complex64::from_polar(1.0, theta);
        let g = cuspweyl::zerocount::AnalyticFunction::new("e^{ib} F", move |z| unit * q.eval(z));
        let a = carleman_weighted_count(&f, 0.52, 6.0, &spec).unwrap().value;
        let b = carleman_weighted_count(&g, 0.52, 6.0, &spec).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn gamma_lattice_is_invariant(angle in 0.0f64..PI, shear in -2i32..=2) {
        let base = Lattice::integer(2);
        let reference = gamma_lattice(&base, 200.0).unwrap().value;
        let (c, s) = (angle.cos(), angle.sin());
        let rotated = base.transformed(&DMatrix::from_row_slice(2, 2, &[c, -s, s, c])).unwrap();
        let rebased = base.rebased(&DMatrix::from_row_slice(2, 2, &[1.0, shear as f64, 0.0, 1.0])).unwrap();
        prop_assert!((gamma_lattice(&rotated, 200.0).unwrap().value - reference).abs() <= 1e-8);
        prop_assert!((gamma_lattice(&rebased, 200.0).unwrap().value - reference).abs() <= 1e-8);
    }
}
