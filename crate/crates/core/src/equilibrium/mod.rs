//! Mixed-strategy Nash equilibria of two-player games.
//!
//! [`lemke_howson`] follows one complementary path per dropped label,
//! [`enumerate_equilibria`] runs every label and deduplicates, and
//! [`support_enumeration`] is the brute-force oracle used as a fallback and
//! in tests.

mod enumerate;
mod game;
mod lemke_howson;
mod support;

pub use enumerate::{enumerate_equilibria, enumerate_equilibria_with, Enumeration, SolvePath, SolverOptions};
pub use game::{expected_value, verify_equilibrium, BimatrixGame, MixedProfile, VerifyReport};
pub use lemke_howson::{lemke_howson, lemke_howson_with};
pub use support::{support_enumeration, SUPPORT_ENUMERATION_MAX};

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegeneracyKind {
    PivotBudget,
    Cycle,
    NoPivot,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EquilibriumError {
    #[error("payoff matrices must be non-empty, finite and of equal shape: {0}")]
    InvalidGame(String),
    #[error("profile dimensions {got:?} do not match game {expected:?}")]
    DimensionMismatch { expected: (usize, usize), got: (usize, usize) },
    #[error("invalid probability vector: {0}")]
    InvalidProfile(String),
    #[error("initial label {label} out of range 0..{labels}")]
    InvalidLabel { label: usize, labels: usize },
    #[error("degenerate pivoting from label {label}: {kind:?} after {pivots} pivots")]
    DegeneracyFailure { label: usize, kind: DegeneracyKind, pivots: usize },
    #[error("pivoting from label {label} ended at a non-equilibrium (max regret {regret:e})")]
    VerificationFailed { label: usize, regret: f64 },
    #[error("support enumeration limited to {max} strategies per player, game has {n}")]
    SupportGuard { n: usize, max: usize },
}
