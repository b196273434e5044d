//! Harmonic-weight zero-counting identities and an argument-principle oracle.

pub mod blaschke;
pub mod brute;
pub mod contour;
pub mod function;
pub mod lemmas;
pub mod suite;
pub mod zeros;

pub use blaschke::BlaschkeProduct;
pub use brute::{brute_force_zeros, winding_number, Rect};
pub use function::AnalyticFunction;
pub use lemmas::{
    big_rectangle_weighted_sum, carleman_weighted_count, small_rectangle_weighted_sum,
    weighted_sum_direct, ContourSum, CountingBox, Lemma,
};
pub use suite::{check_product, suite_product, LemmaCheck, SuiteGeometry};
pub use zeros::{ZeroEntry, ZeroList};
