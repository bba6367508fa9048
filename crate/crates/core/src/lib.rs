//! Predictability limits of discrete time series.
//!
//! Two estimators are provided. The entropy route estimates the entropy rate
//! of a series with a Lempel-Ziv match-length estimator and inverts the Fano
//! relation to get a single predictability value. The Bayes-error route
//! treats next-state prediction as classification of the state following a
//! fixed window of `r` past states, estimates the Bayes error rate of every
//! leave-one-class-out sub-problem with a plug-in (majority rule) estimator,
//! combines them into multiclass bounds, and converts the bounds into
//! predictability bounds through `predictability = 1 - bayes_error`.
//!
//! The [`generators`] and [`oracle`] modules provide the three synthetic
//! processes used to compare both routes against analytic ground truth, and
//! [`experiments`] runs the comparison sweeps.

pub mod ber;
pub mod cli;
pub mod dataset;
pub mod entropy;
pub mod error;
pub mod estimate;
pub mod experiments;
pub mod generators;
pub mod oracle;
pub mod series;

pub use ber::{
    ber_analysis, ber_predictability, empirical_predictability, leave_one_out_bers,
    multiclass_ber_bounds, plugin_ber, BerAnalysis, BerBounds,
};
pub use dataset::{
    build_counts, empirical_priors, extract_features, CountsTable, FeatureWindow, LabeledDataset,
};
pub use entropy::{entropy_predictability, fano_solve, lz_entropy_rate, EntropyEstimate};
pub use error::{Error, Result};
pub use estimate::{EstimateMeta, Method, PredictabilityEstimate};
pub use generators::{gen_additive, gen_copy, gen_markov3, GeneratorKind, GeneratorSpec};
pub use oracle::{brute_force_ber, true_predictability, BerReference, TruthRecord};
pub use series::{read_series, write_series, Series, StateId};
