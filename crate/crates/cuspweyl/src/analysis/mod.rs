//! Shared numerical substrate: special functions, quadrature, mollifiers,
//! the test function ψ and the M_α family.

pub mod malpha;
pub mod mollifier;
pub mod psi;
pub mod quad;
pub mod special;

pub use malpha::{m_alpha_eval, m_alpha_pair, GaussianBump, MAlphaIndex, SmoothFunction, Taper};
pub use mollifier::Mollifier;
pub use psi::TestFunctionPsi;
pub use quad::{integrate, integrate_with, Endpoint, Integral, QuadratureSpec};
pub use special::{log_gamma, riemann_zeta, EULER_GAMMA};

use num_complex::Complex64;

/// Complex numbers used throughout for s = σ + it and z = β + iγ.
pub type ComplexValue = Complex64;

/// ψ(t) for the given test function.
pub fn psi_eval(psi: &TestFunctionPsi, t: f64) -> f64 {
    psi.eval(t)
}

/// ψ̂(r) = ∫ ψ(t) e^{−irt} dt.
pub fn psi_hat(psi: &TestFunctionPsi, r: f64) -> crate::error::Result<f64> {
    psi.hat(r)
}
