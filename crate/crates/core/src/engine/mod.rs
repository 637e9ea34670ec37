//! The regulator's meta-game: solve every market, pick the best one, and
//! measure what releasing a new technology does to that choice.

mod classify;
mod expansion;
mod metagame;

pub use classify::{classify, AdoptionMode, ClassifyInput, ClassifyOptions, Flags, EPS_ADOPT, EPS_PAY};
pub use expansion::{expand_technology, ExpansionReport, ReportSide, ReportSummary};
pub use metagame::{regulator_select, run_metagame, solve_market, MarketSolution, MetaGameResult};
pub use crate::regression::PayoffTables;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::equilibrium::EquilibriumError;
use crate::regression::{RegressionError, Target};

/// What the regulator maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Fairness,
    Efficiency,
}

impl Objective {
    pub const ALL: [Objective; 2] = [Objective::Fairness, Objective::Efficiency];

    pub fn target(self) -> Target {
        match self {
            Objective::Fairness => Target::Fairness,
            Objective::Efficiency => Target::Efficiency,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Objective::Fairness => "fairness",
            Objective::Efficiency => "efficiency",
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Objective {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fairness" => Ok(Objective::Fairness),
            "efficiency" => Ok(Objective::Efficiency),
            other => Err(format!("unknown objective `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("need at least two technologies, got {0}")]
    TooFewTechs(usize),
    #[error("technology `{0}` listed twice")]
    DuplicateTech(String),
    #[error("added technology `{0}` is already in the baseline set")]
    AlreadyPresent(String),
    #[error("no equilibrium found in market {0}")]
    NoEquilibrium(u32),
    #[error("no markets to choose from")]
    NoMarkets,
    #[error(transparent)]
    Regression(#[from] RegressionError),
    #[error(transparent)]
    Equilibrium(#[from] EquilibriumError),
}
