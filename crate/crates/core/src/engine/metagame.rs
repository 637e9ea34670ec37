use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{EngineError, Objective, PayoffTables};
use crate::equilibrium::{enumerate_equilibria, expected_value, MixedProfile};
use crate::econ::enumerate_markets;
use crate::regression::{build_payoff_tables, CoefficientBundle};
use crate::scalar::Scalar;

/// Equilibria of one market and the uniform averages of their expected values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct MarketSolution<S = f64> {
    pub market_id: u32,
    pub equilibria: Vec<MixedProfile<S>>,
    pub avg_payoff_a: S,
    pub avg_payoff_b: S,
    pub avg_fairness: S,
    pub avg_efficiency: S,
}

impl<S: Scalar> MarketSolution<S> {
    pub fn avg_objective(&self, objective: Objective) -> S {
        match objective {
            Objective::Fairness => self.avg_fairness,
            Objective::Efficiency => self.avg_efficiency,
        }
    }

    /// `σ_a[i] + σ_b[i]` averaged over the equilibria.
    pub fn adoption(&self, index: usize) -> S {
        self.mass(index).sum::<S>() / S::from_usize_lossy(self.equilibria.len())
    }

    /// Largest `σ_a[i] + σ_b[i]` over the equilibria.
    pub fn max_adoption(&self, index: usize) -> S {
        self.mass(index).fold(S::zero(), S::max)
    }

    fn mass(&self, index: usize) -> impl Iterator<Item = S> + '_ {
        self.equilibria.iter().map(move |p| p.sigma_a[index] + p.sigma_b[index])
    }
}

pub fn solve_market<S: Scalar>(tables: &PayoffTables<S>) -> Result<MarketSolution<S>, EngineError> {
    let game = tables.game()?;
    let equilibria = enumerate_equilibria(&game);
    if equilibria.is_empty() {
        return Err(EngineError::NoEquilibrium(tables.market.market_id));
    }
    let n = S::from_usize_lossy(equilibria.len());
    let avg = |m| -> Result<S, EngineError> {
        let mut total = S::zero();
        for p in &equilibria {
            total = total + expected_value(p, m)?;
        }
        Ok(total / n)
    };
    Ok(MarketSolution {
        market_id: tables.market.market_id,
        avg_payoff_a: avg(&tables.u_a)?,
        avg_payoff_b: avg(&tables.u_b)?,
        avg_fairness: avg(&tables.d_f)?,
        avg_efficiency: avg(&tables.d_e)?,
        equilibria,
    })
}

/// Market with the highest averaged objective; ties go to the lowest id.
pub fn regulator_select<S: Scalar>(solutions: &[MarketSolution<S>], objective: Objective) -> Option<u32> {
    let mut best: Option<(u32, S)> = None;
    for s in solutions {
        let v = s.avg_objective(objective);
        if v.is_nan() {
            continue;
        }
        best = match best {
            Some((id, b)) if b > v || (b == v && id < s.market_id) => Some((id, b)),
            _ => Some((s.market_id, v)),
        };
    }
    best.map(|(id, _)| id)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct MetaGameResult<S = f64> {
    pub objective: Objective,
    pub techs: Vec<String>,
    pub chosen_market: u32,
    /// One entry per market, ordered by market id.
    pub solutions: Vec<MarketSolution<S>>,
    pub payoffs: (S, S),
    pub objective_value: S,
    /// Averaged equilibrium mass of each technology at the chosen market.
    pub adoption: BTreeMap<String, S>,
}

impl<S: Scalar> MetaGameResult<S> {
    pub fn solution(&self, market_id: u32) -> Option<&MarketSolution<S>> {
        self.solutions.iter().find(|s| s.market_id == market_id)
    }

    pub fn chosen(&self) -> &MarketSolution<S> {
        self.solution(self.chosen_market).expect("chosen market is among the solutions")
    }

    /// Per-equilibrium maximum mass of `tech` at the chosen market.
    pub fn max_adoption(&self, tech: &str) -> Option<S> {
        let i = self.techs.iter().position(|t| t == tech)?;
        Some(self.chosen().max_adoption(i))
    }
}

/// Builds and solves every market of the bundle's family for `techs`, then
/// lets the regulator choose.
pub fn run_metagame<S: Scalar>(
    bundle: &CoefficientBundle<S>,
    techs: &[String],
    objective: Objective,
) -> Result<MetaGameResult<S>, EngineError> {
    if techs.len() < 2 {
        return Err(EngineError::TooFewTechs(techs.len()));
    }
    let mut seen = HashSet::new();
    if let Some(t) = techs.iter().find(|t| !seen.insert(t.as_str())) {
        return Err(EngineError::DuplicateTech(t.clone()));
    }
    let mut solutions = Vec::new();
    for market in enumerate_markets(bundle.family()) {
        if !bundle.market_ids().contains(&market.market_id) {
            continue;
        }
        let tables = build_payoff_tables(bundle, market.market_id, techs)?;
        solutions.push(solve_market(&tables)?);
    }
    let chosen_market = regulator_select(&solutions, objective).ok_or(EngineError::NoMarkets)?;
    let chosen = solutions.iter().find(|s| s.market_id == chosen_market).unwrap();
    let adoption = techs.iter().enumerate().map(|(i, t)| (t.clone(), chosen.adoption(i))).collect();
    Ok(MetaGameResult {
        objective,
        techs: techs.to_vec(),
        chosen_market,
        payoffs: (chosen.avg_payoff_a, chosen.avg_payoff_b),
        objective_value: chosen.avg_objective(objective),
        adoption,
        solutions,
    })
}
