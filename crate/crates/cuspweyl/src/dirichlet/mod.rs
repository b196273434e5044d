//! Dirichlet series in exponential and classical form, the parametrix
//! expansion of a scattering determinant, and the mean-value lemma.

pub mod mean_value;
pub mod parametrix;
pub mod series;

pub use mean_value::{mean_value_integral, MeanValue};
pub use parametrix::{leading_term, p1_p2_profile, parametrix_eval, ParametrixExpansion, Profile, ProfileRow};
pub use series::{
    evaluate, AnySeries, ClassicalDirichletSeries, Exponent, ExponentialDirichletSeries, SeriesValue,
    TermGenerator,
};
