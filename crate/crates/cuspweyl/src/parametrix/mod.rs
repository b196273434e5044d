//! Hadamard parametrix coefficients and volume densities on rotationally
//! symmetric model metrics.

pub mod constants;
pub mod profile;
pub mod theta;
pub mod transport;

pub use constants::c0_constant;
pub use profile::RadialCurvatureProfile;
pub use theta::{theta_hyperbolic, theta_on_intervals, theta_radial, theta_radial_with, ThetaSolution};
pub use transport::{u_k_radial, u_k_radial_with, verify_bound_uk, GrowthFit, UkTable};
