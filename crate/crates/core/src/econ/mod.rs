//! Game families, market grids, outcomes and the regulator's metrics.

mod market;
mod metrics;
mod outcome;

pub use market::{enumerate_markets, Family, Horizon, MarketConfig};
pub use metrics::{
    bargaining_payoffs, efficiency, fairness, negotiation_payoffs, payoffs, persuasion_payoffs,
};
pub use outcome::{BargainingOutcome, NegotiationOutcome, Outcome, PersuasionOutcome, SituationParams};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EconError {
    #[error("domain violation: {0}")]
    Domain(String),
    #[error("inconsistent persuasion counts: {0}")]
    CountInconsistency(String),
    #[error("missing situational parameter `{0}`")]
    MissingParameter(&'static str),
    #[error("outcome family {outcome} does not match market family {market}")]
    FamilyMismatch { outcome: Family, market: Family },
}
