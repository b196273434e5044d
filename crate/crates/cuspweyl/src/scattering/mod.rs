//! Factorized scattering determinants, the scattering phase, resonance
//! counting estimators and the modular-surface backend.

pub mod counting;
pub mod fit;
pub mod maass;
pub mod model;
pub mod modular;
pub mod phase;

pub use model::{
    phi_eval, random_model, Eigen, PhiModel, Resonance, ResonanceSet, ScatteringDeterminant, SpectrumData,
};
pub use phase::{
    phase_derivative, scattering_phase, scattering_phase_by_argument, smear, tilde_n, tilde_n_backend,
    trace_formula_lhs, PhaseDerivative, SmearKernel,
};
pub use counting::{
    box_count, general_weyl_count, kernel_f, lorentzian_by_quadrature, lorentzian_strip_integral,
    out_of_strip_count, resonance_kernel_closed_form, resonance_kernel_integral, strip_weighted_sum, GeneralCount,
    LeadingTerm, OutOfStrip, StripSum,
};
pub use fit::{log_grid, remainder_weight, weyl_fit, weyl_fit_weighted, WeylFitResult};
pub use maass::{maass_selberg_axis_rhs, maass_selberg_bound, MaassSelbergCheck};
pub use modular::{modular_gate, modular_phi, modular_phi_derivative, modular_resonances, ModularPhi};
