//! Cusp lattice constants and the cusp and diagonal contributions to the
//! renormalized trace.

pub mod constants;
pub mod diagonal;
pub mod lattice;
pub mod term;

pub use diagonal::{diagonal_integral, diagonal_term, DiagonalPolynomial};
pub use constants::{c1_lattice, c_d_constant, sine_log_constant, weyl_c0, WeylConstant};
pub use lattice::{gamma_lattice, lattice_shell_sum, GammaEstimate, Lattice};
pub use term::{cusp_term, write_cusp_csv, CuspTermResult};
