use serde::{Deserialize, Serialize};

use super::coefficients::{CoefficientBundle, CoefficientSet, Target};
use super::features::{FeatureSpec, TechPair};
use super::RegressionError;
use crate::econ::MarketConfig;
use crate::equilibrium::{BimatrixGame, EquilibriumError};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// At-mean prediction `β₀ + β_market + β_pair` (plus the market×pair
/// interaction when the model has one). Situational terms drop out because
/// covariates are centered.
pub fn predict_pair<S: Scalar>(
    coeffs: &CoefficientSet<S>,
    market_id: u32,
    tech_a: &str,
    tech_b: &str,
) -> Result<S, RegressionError> {
    let pair = TechPair::new(tech_a, tech_b);
    let market = *coeffs.beta_market.get(&market_id).ok_or(RegressionError::UnknownMarket(market_id))?;
    let pair_effect = *coeffs.beta_pair.get(&pair).ok_or_else(|| RegressionError::UnknownPair(pair.to_string()))?;
    let interaction = coeffs.beta_market_pair.get(&(market_id, pair)).copied().unwrap_or(S::zero());
    Ok(coeffs.beta0 + market + pair_effect + interaction)
}

/// The four N×N matrices of one market; rows are Alice's technology,
/// columns Bob's, in `techs` order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct PayoffTables<S = f64> {
    pub market: MarketConfig,
    pub techs: Vec<String>,
    pub u_a: Matrix<S>,
    pub u_b: Matrix<S>,
    pub d_f: Matrix<S>,
    pub d_e: Matrix<S>,
}

impl<S: Scalar> PayoffTables<S> {
    pub fn game(&self) -> Result<BimatrixGame<S>, EquilibriumError> {
        BimatrixGame::new(self.u_a.clone(), self.u_b.clone())
    }

    pub fn len(&self) -> usize {
        self.techs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.techs.is_empty()
    }

    pub fn matrix(&self, target: Target) -> &Matrix<S> {
        match target {
            Target::PayoffA => &self.u_a,
            Target::PayoffB => &self.u_b,
            Target::Fairness => &self.d_f,
            Target::Efficiency => &self.d_e,
        }
    }
}

pub fn build_payoff_tables<S: Scalar>(
    bundle: &CoefficientBundle<S>,
    market_id: u32,
    techs: &[String],
) -> Result<PayoffTables<S>, RegressionError> {
    let market = bundle.family().market(market_id).ok_or(RegressionError::UnknownMarket(market_id))?;
    let known = bundle.techs();
    if let Some(t) = techs.iter().find(|t| !known.contains(t)) {
        return Err(RegressionError::UnknownTech(t.clone()));
    }
    let n = techs.len();
    let table = |target: Target| -> Result<Matrix<S>, RegressionError> {
        let coeffs = bundle.get(target);
        let mut out = Matrix::zeros(n, n);
        for (i, a) in techs.iter().enumerate() {
            for (j, b) in techs.iter().enumerate() {
                out[(i, j)] = predict_pair(coeffs, market_id, a, b)?;
            }
        }
        Ok(out)
    };
    Ok(PayoffTables {
        market,
        techs: techs.to_vec(),
        u_a: table(Target::PayoffA)?,
        u_b: table(Target::PayoffB)?,
        d_f: table(Target::Fairness)?,
        d_e: table(Target::Efficiency)?,
    })
}

/// Inverse of [`build_payoff_tables`]: coefficients (with market×pair
/// interactions) that reproduce the given per-market tables exactly. All
/// tables must share one family and one technology order.
pub fn bundle_from_tables<S: Scalar>(tables: &[PayoffTables<S>]) -> Result<CoefficientBundle<S>, RegressionError> {
    let first = tables.first().ok_or_else(|| RegressionError::InconsistentBundle("no tables".into()))?;
    let family = first.market.family;
    let techs = &first.techs;
    if let Some(t) = tables.iter().find(|t| t.market.family != family || &t.techs != techs) {
        return Err(RegressionError::InconsistentBundle(format!(
            "market {} differs in family or technology order",
            t.market.market_id
        )));
    }
    let mut by_market: Vec<&PayoffTables<S>> = tables.iter().collect();
    by_market.sort_by_key(|t| t.market.market_id);
    let markets: Vec<u32> = by_market.iter().map(|t| t.market.market_id).collect();
    let mut cells: Vec<(TechPair, usize, usize)> = Vec::new();
    for (i, a) in techs.iter().enumerate() {
        for (j, b) in techs.iter().enumerate() {
            cells.push((TechPair::new(a.clone(), b.clone()), i, j));
        }
    }
    cells.sort();
    let pairs: Vec<TechPair> = cells.iter().map(|c| c.0.clone()).collect();
    let spec = FeatureSpec::new(markets.clone(), pairs, vec![], true)?;

    let sets = Target::ALL
        .iter()
        .map(|&target| {
            let value = |m: usize, c: usize| {
                let (_, i, j) = cells[c];
                by_market[m].matrix(target)[(i, j)]
            };
            let beta0 = value(0, 0);
            let mut set = CoefficientSet::constant(family, target, spec.clone(), beta0);
            for (m, id) in markets.iter().enumerate().skip(1) {
                set.beta_market.insert(*id, value(m, 0) - beta0);
            }
            for c in 1..cells.len() {
                set.beta_pair.insert(cells[c].0.clone(), value(0, c) - beta0);
            }
            for (m, id) in markets.iter().enumerate().skip(1) {
                for c in 1..cells.len() {
                    let rest = value(m, c) - beta0 - set.beta_market[id] - set.beta_pair[&cells[c].0];
                    if rest != S::zero() {
                        set.beta_market_pair.insert((*id, cells[c].0.clone()), rest);
                    }
                }
            }
            set
        })
        .collect();
    CoefficientBundle::new(sets)
}
