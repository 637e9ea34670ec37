use super::coefficients::Target;
use super::features::{Observation, TechPair};
use crate::econ::Family;
use crate::sim::GameRecord;

/// Situational covariates used for `family`, in column order.
pub fn covariate_names(family: Family) -> &'static [&'static str] {
    match family {
        Family::Bargaining => &["delta_a", "delta_b", "m_scale", "rounds_10"],
        Family::Negotiation => &["delta_a", "delta_b", "m_scale", "f_a", "f_b", "rounds_10"],
        Family::Persuasion => &["prior_p", "v_value", "m_scale", "rounds_10"],
    }
}

/// Covariate values of a record, matching [`covariate_names`]. The round
/// count enters as an indicator for the long (10-round) games.
pub fn record_covariates(record: &GameRecord) -> Vec<f64> {
    let s = &record.situation;
    let rounds_10 = if s.rounds == Some(10) { 1.0 } else { 0.0 };
    let v = |x: Option<f64>| x.unwrap_or(0.0);
    match record.market.family {
        Family::Bargaining => vec![v(s.delta_a), v(s.delta_b), s.m_scale, rounds_10],
        Family::Negotiation => {
            vec![v(s.delta_a), v(s.delta_b), s.m_scale, v(s.f_a), v(s.f_b), rounds_10]
        }
        Family::Persuasion => vec![v(s.prior_p), v(s.v_value), s.m_scale, rounds_10],
    }
}

/// Regression target of a record. Bargaining payoffs are normalized by the
/// pie size so they live on the share scale.
pub fn target_value(record: &GameRecord, target: Target) -> f64 {
    match target {
        Target::PayoffA | Target::PayoffB => {
            let raw = if target == Target::PayoffA { record.payoff_a } else { record.payoff_b };
            if record.market.family == Family::Bargaining {
                raw / record.situation.m_scale
            } else {
                raw
            }
        }
        Target::Fairness => record.fairness,
        Target::Efficiency => record.efficiency,
    }
}

/// The `family` rows of `corpus` as regression observations.
pub fn observations(corpus: &[GameRecord], family: Family, target: Target) -> Vec<Observation<f64>> {
    corpus
        .iter()
        .filter(|r| r.market.family == family)
        .map(|r| Observation {
            market_id: r.market.market_id,
            pair: TechPair::new(r.tech_a.clone(), r.tech_b.clone()),
            covariates: record_covariates(r),
            target: target_value(r, target),
        })
        .collect()
}
