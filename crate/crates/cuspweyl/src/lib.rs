//! Numerical laboratory for spectral counting on manifolds with cusps.
//!
//! The crate evaluates zero-counting identities for holomorphic functions,
//! cusp lattice constants, Hadamard parametrix coefficients on radial model
//! metrics, Dirichlet-series expansions of scattering determinants and the
//! counting estimators built on a factorized determinant.

pub mod analysis;
pub mod cusp;
pub mod dirichlet;
pub mod error;
pub mod parametrix;
pub mod scattering;
pub mod zerocount;

pub use error::{Error, Result};
