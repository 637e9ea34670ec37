//! Payoff formulas and the fairness / efficiency metrics.

use super::{BargainingOutcome, EconError, NegotiationOutcome, Outcome, PersuasionOutcome, SituationParams};
use crate::scalar::Scalar;

/// Discounted bargaining payoffs; no agreement pays `(0, 0)`.
pub fn bargaining_payoffs<S: Scalar>(
    outcome: &BargainingOutcome<S>,
    params: &SituationParams<S>,
) -> Result<(S, S), EconError> {
    match *outcome {
        BargainingOutcome::NoAgreement => Ok((S::zero(), S::zero())),
        BargainingOutcome::Agreement { round, share } => {
            Outcome::Bargaining(*outcome).validate()?;
            let exp = (round - 1) as i32;
            let u_a = params.delta_a()?.powi(exp) * share * params.m_scale;
            let u_b = params.delta_b()?.powi(exp) * (S::one() - share) * params.m_scale;
            Ok((u_a, u_b))
        }
    }
}

/// Seller (Alice) and buyer (Bob) surplus at the trade price.
pub fn negotiation_payoffs<S: Scalar>(
    outcome: &NegotiationOutcome<S>,
    params: &SituationParams<S>,
) -> Result<(S, S), EconError> {
    match *outcome {
        NegotiationOutcome::NoTrade => Ok((S::zero(), S::zero())),
        NegotiationOutcome::Trade { price } => {
            let (v_a, v_b) = params.valuations()?;
            Ok((price - v_a, v_b - price))
        }
    }
}

/// Seller earns one unit per sale; the buyer gains `M(v−1)` per High unit
/// bought and loses `M` per Low unit bought.
pub fn persuasion_payoffs<S: Scalar>(
    outcome: &PersuasionOutcome,
    bought_low: u32,
    params: &SituationParams<S>,
) -> Result<(S, S), EconError> {
    outcome.validate()?;
    if bought_low != outcome.bought_low() {
        return Err(EconError::CountInconsistency(format!(
            "bought_low = {bought_low}, expected (T − n) − r = {}",
            outcome.bought_low()
        )));
    }
    let k = S::from_u32(outcome.bought_high).unwrap();
    let low = S::from_u32(bought_low).unwrap();
    let m = params.m_scale;
    let v = params.v_value()?;
    Ok((k + low, k * m * (v - S::one()) - low * m))
}

pub fn payoffs<S: Scalar>(outcome: &Outcome<S>, params: &SituationParams<S>) -> Result<(S, S), EconError> {
    match outcome {
        Outcome::Bargaining(o) => bargaining_payoffs(o, params),
        Outcome::Negotiation(o) => negotiation_payoffs(o, params),
        Outcome::Persuasion(o) => persuasion_payoffs(o, o.bought_low(), params),
    }
}

/// Efficiency of one outcome.
///
/// Persuasion with no High-quality rounds is vacuously efficient (1).
pub fn efficiency<S: Scalar>(outcome: &Outcome<S>, params: &SituationParams<S>) -> Result<S, EconError> {
    outcome.validate()?;
    match *outcome {
        Outcome::Bargaining(BargainingOutcome::NoAgreement) => Ok(S::zero()),
        Outcome::Bargaining(BargainingOutcome::Agreement { round, share }) => {
            let exp = (round - 1) as i32;
            Ok(params.delta_a()?.powi(exp) * share + params.delta_b()?.powi(exp) * (S::one() - share))
        }
        Outcome::Negotiation(o) => {
            let (v_a, v_b) = params.valuations()?;
            let efficient = match o {
                NegotiationOutcome::Trade { .. } => v_b >= v_a,
                NegotiationOutcome::NoTrade => v_a > v_b,
            };
            Ok(if efficient { S::one() } else { S::zero() })
        }
        Outcome::Persuasion(p) => Ok(if p.high == 0 {
            S::one()
        } else {
            S::from_u32(p.bought_high).unwrap() / S::from_u32(p.high).unwrap()
        }),
    }
}

/// Fairness of one outcome.
///
/// No agreement / no trade scores 1; persuasion without Low-quality rounds
/// scores 1.
pub fn fairness<S: Scalar>(outcome: &Outcome<S>, params: &SituationParams<S>) -> Result<S, EconError> {
    outcome.validate()?;
    let four = S::lit(4.0);
    let half = S::lit(0.5);
    match *outcome {
        Outcome::Bargaining(BargainingOutcome::NoAgreement)
        | Outcome::Negotiation(NegotiationOutcome::NoTrade) => Ok(S::one()),
        Outcome::Bargaining(BargainingOutcome::Agreement { share, .. }) => {
            let d = share - half;
            Ok(S::one() - four * d * d)
        }
        Outcome::Negotiation(NegotiationOutcome::Trade { price }) => {
            let (v_a, v_b) = params.valuations()?;
            let fair_price = (v_a + v_b) * half;
            let d = (price - fair_price) / params.m_scale;
            Ok(S::one() - four * d * d)
        }
        Outcome::Persuasion(p) => Ok(if p.low() == 0 {
            S::one()
        } else {
            S::from_u32(p.rejected_low).unwrap() / S::from_u32(p.low()).unwrap()
        }),
    }
}
