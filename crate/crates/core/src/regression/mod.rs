//! One-hot least-squares payoff models and the payoff tables built from them.
//!
//! Each (family, target) pair gets its own model
//! `y = β₀ + β_market + β_pair + Σ β_situation·(x − x̄)` with drop-first
//! indicators for markets and ordered technology pairs. Tables use the
//! at-mean prediction `β₀ + β_market + β_pair`, plus an optional
//! market×pair interaction term when the model carries one.

mod coefficients;
mod dataset;
mod features;
mod fit;
mod lstsq;
mod synthetic;
mod tables;

pub use coefficients::{CoefficientBundle, CoefficientSet, Diagnostics, Target};
pub use dataset::{covariate_names, observations, record_covariates, target_value};
pub use features::{encode, Covariate, FeatureSpec, Observation, TechPair};
pub use fit::{fit, fit_observations};
pub use lstsq::{least_squares, LeastSquares};
pub use synthetic::{synthetic_bundle, SyntheticCoefficients};
pub use tables::{build_payoff_tables, bundle_from_tables, predict_pair, PayoffTables};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegressionError {
    #[error("unknown market level {0}")]
    UnknownMarket(u32),
    #[error("unknown technology pair {0}")]
    UnknownPair(String),
    #[error("unknown technology `{0}`")]
    UnknownTech(String),
    #[error("invalid feature spec: {0}")]
    InvalidSpec(String),
    #[error("design matrix is rank deficient; collinear columns: {}", columns.join(", "))]
    RankDeficient { columns: Vec<String> },
    #[error("too few rows: {rows} rows for {columns} columns")]
    TooFewRows { rows: usize, columns: usize },
    #[error("observation has {got} covariates, spec expects {expected}")]
    CovariateCount { expected: usize, got: usize },
    #[error("missing coefficient set for target {0}")]
    MissingTarget(Target),
    #[error("inconsistent coefficient bundle: {0}")]
    InconsistentBundle(String),
    #[error("malformed coefficient document: {0}")]
    Malformed(String),
}
