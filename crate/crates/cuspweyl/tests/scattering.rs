use std::f64::consts::PI;
use std::sync::OnceLock;

use cuspweyl::scattering::*;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn modular_set() -> &'static ResonanceSet {
    static SET: OnceLock<ResonanceSet> = OnceLock::new();
    SET.get_or_init(|| modular_resonances(100.0, 0.05).expect("modular resonances"))
}

#[test]
fn modular_set_has_the_zeta_zeros() {
    let set = modular_set();
    // 79 zeta zeros with 0 < γ ≤ 200, each mirrored.
    assert_eq!(set.total_multiplicity(), 158);
    assert!(set.is_conjugation_closed());
    assert!(set.entries.iter().all(|e| (e.re - 0.25).abs() < 1e-8));
}

#[test]
fn modular_strip_sum_matches_two_term_prediction() {
    let lead = LeadingTerm { a_star: PI.sqrt(), ell_star: 0.0 };
    let s = strip_weighted_sum(modular_set(), 0.75, 100.0, Some(lead));
    assert!((s.weighted - 39.5).abs() < 1e-9);
    let p = s.predicted.unwrap();
    assert!((s.weighted - p).abs() < 0.01 * p, "{} vs {p}", s.weighted);
}

#[test]
fn modular_general_count_is_self_consistent() {
    let g = general_weyl_count(modular_set(), &SpectrumData::default(), 100.0, None).unwrap();
    assert!((g.lorentzian_sum - g.lorentzian_quadrature).abs() < 1e-6);
    assert!((g.lhs - (g.disc_count as f64 + g.r_total())).abs() < 1e-9);
    assert_eq!(g.disc_count, 158);
}

#[test]
fn modular_out_of_strip_grows_at_most_linearly() {
    let ratios: Vec<f64> = [20.0, 40.0, 60.0]
        .iter()
        .map(|&t| out_of_strip_count(modular_set(), 0.6, t, 0.5, 1.0).unwrap().count as f64 / t)
        .collect();
    assert!(ratios.iter().all(|&r| r > 0.0));
    for w in ratios.windows(2) {
        assert!(w[1] / w[0] < 1.5, "{ratios:?}");
    }
}

#[test]
fn modular_phase_fit_sees_plus_one_over_pi() {
    let spec = SpectrumData::default();
    let samples: Vec<(f64, f64)> = log_grid(10.0, 200.0, 40)
        .into_iter()
        .map(|t| (t, tilde_n_backend(&spec, &ModularPhi, t, 0.05).unwrap()))
        .collect();
    let f = weyl_fit(&samples, 1).unwrap();
    assert!((f.b - 1.0 / PI).abs() < 0.1 / PI, "{}", f.b);
}

#[test]
fn modular_maass_selberg() {
    let (sigma, t, y) = (0.75, 20.0, 2.0);
    let abs = modular_phi(Complex64::new(sigma, t)).unwrap().norm();
    assert!(maass_selberg_bound(abs, sigma, t, y, 1, 1).unwrap().passes);
    let left = maass_selberg_axis_rhs(&ModularPhi, y, -2e-4).unwrap();
    let right = maass_selberg_axis_rhs(&ModularPhi, y, 2e-4).unwrap();
    let zero = maass_selberg_axis_rhs(&ModularPhi, y, 0.0).unwrap();
    assert!((left - right).abs() < 1e-9 && (zero - right).abs() < 1e-6, "{left} {zero} {right}");
}

#[test]
fn modular_gate_passes() {
    let axis: Vec<f64> = (0..50).map(|i| 0.37 + 2.0 * i as f64).collect();
    let pts: Vec<Complex64> = (0..20).map(|i| Complex64::new(0.6 + 0.02 * i as f64, 1.3 * i as f64 + 0.1)).collect();
    let (u, f) = modular_gate(&axis, &pts).unwrap();
    assert!(u < 1e-9 && f < 1e-9, "{u} {f}");
}

#[test]
fn phase_tracks_argument_on_random_models() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for d in 1..=3 {
        let m = random_model(&mut rng, d, 15, 0.5, 25.0, &[0.2]).unwrap();
        let closed = scattering_phase(&m, 25.0).unwrap();
        let tracked = scattering_phase_by_argument(&m, 25.0, 0.05).unwrap();
        assert!((closed - tracked).abs() < 1e-6);
    }
}

#[test]
fn resonance_set_round_trips_through_json() {
    let text = modular_set().to_json().unwrap();
    let back = ResonanceSet::from_json(&text).unwrap();
    assert_eq!(&back, modular_set());
}
