use serde::{Deserialize, Serialize};

use crate::econ::{efficiency, fairness, payoffs, EconError, MarketConfig, Outcome, SituationParams};

/// One played (or ingested) game with its metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameRecord {
    pub market: MarketConfig,
    pub situation: SituationParams,
    pub tech_a: String,
    pub tech_b: String,
    pub outcome: Outcome,
    pub payoff_a: f64,
    pub payoff_b: f64,
    pub fairness: f64,
    pub efficiency: f64,
    pub seed: u64,
}

impl GameRecord {
    /// Computes payoffs and metrics from the outcome.
    pub fn new(
        market: MarketConfig,
        situation: SituationParams,
        tech_a: impl Into<String>,
        tech_b: impl Into<String>,
        outcome: Outcome,
        seed: u64,
    ) -> Result<Self, EconError> {
        let (payoff_a, payoff_b, fairness, efficiency) = metrics(&market, &situation, &outcome)?;
        Ok(Self {
            market,
            situation,
            tech_a: tech_a.into(),
            tech_b: tech_b.into(),
            outcome,
            payoff_a,
            payoff_b,
            fairness,
            efficiency,
            seed,
        })
    }
}

/// `(payoff_a, payoff_b, fairness, efficiency)` after checking that the
/// outcome, market and situation agree.
pub(crate) fn metrics(
    market: &MarketConfig,
    situation: &SituationParams,
    outcome: &Outcome,
) -> Result<(f64, f64, f64, f64), EconError> {
    if outcome.family() != market.family {
        return Err(EconError::FamilyMismatch { outcome: outcome.family(), market: market.family });
    }
    situation.validate(market.family)?;
    outcome.validate()?;
    if let Outcome::Persuasion(p) = outcome {
        if Some(p.rounds) != situation.rounds {
            return Err(EconError::CountInconsistency(format!(
                "outcome has {} rounds, situation {:?}",
                p.rounds, situation.rounds
            )));
        }
    }
    let (a, b) = payoffs(outcome, situation)?;
    Ok((a, b, fairness(outcome, situation)?, efficiency(outcome, situation)?))
}
