use serde::{Deserialize, Serialize};

use super::{EconError, Family};
use crate::scalar::Scalar;

/// Per-game economic variables. Fields that do not apply to a family are
/// `None`. Persuasion's price and Low-quality value are the constants 1 and 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct SituationParams<S = f64> {
    pub delta_a: Option<S>,
    pub delta_b: Option<S>,
    pub m_scale: S,
    pub f_a: Option<S>,
    pub f_b: Option<S>,
    pub prior_p: Option<S>,
    pub v_value: Option<S>,
    /// Round count for finite bargaining/negotiation and for persuasion.
    pub rounds: Option<u32>,
}

impl<S: Scalar> SituationParams<S> {
    pub fn delta_a(&self) -> Result<S, EconError> {
        self.delta_a.ok_or(EconError::MissingParameter("delta_a"))
    }

    pub fn delta_b(&self) -> Result<S, EconError> {
        self.delta_b.ok_or(EconError::MissingParameter("delta_b"))
    }

    /// Seller and buyer valuations `(V_A, V_B) = (M·F_A, M·F_B)`.
    pub fn valuations(&self) -> Result<(S, S), EconError> {
        let f_a = self.f_a.ok_or(EconError::MissingParameter("f_a"))?;
        let f_b = self.f_b.ok_or(EconError::MissingParameter("f_b"))?;
        Ok((self.m_scale * f_a, self.m_scale * f_b))
    }

    pub fn v_value(&self) -> Result<S, EconError> {
        self.v_value.ok_or(EconError::MissingParameter("v_value"))
    }

    /// Checks the ranges of the fields the family uses.
    pub fn validate(&self, family: Family) -> Result<(), EconError> {
        let open_unit = |name: &str, v: S| {
            if v > S::zero() && v < S::one() {
                Ok(())
            } else {
                Err(EconError::Domain(format!("{name} = {v} not in (0, 1)")))
            }
        };
        if !(self.m_scale > S::zero()) {
            return Err(EconError::Domain(format!("m_scale = {} must be positive", self.m_scale)));
        }
        match family {
            Family::Bargaining | Family::Negotiation => {
                open_unit("delta_a", self.delta_a()?)?;
                open_unit("delta_b", self.delta_b()?)?;
                if family == Family::Negotiation {
                    for (name, v) in [("f_a", self.f_a), ("f_b", self.f_b)] {
                        let v = v.ok_or(EconError::MissingParameter(if name == "f_a" {
                            "f_a"
                        } else {
                            "f_b"
                        }))?;
                        if v < S::zero() {
                            return Err(EconError::Domain(format!("{name} = {v} is negative")));
                        }
                    }
                }
            }
            Family::Persuasion => {
                let p = self.prior_p.ok_or(EconError::MissingParameter("prior_p"))?;
                if p < S::zero() || p > S::one() {
                    return Err(EconError::Domain(format!("prior_p = {p} not in [0, 1]")));
                }
                let v = self.v_value()?;
                if v <= S::one() {
                    return Err(EconError::Domain(format!("v_value = {v} must exceed 1")));
                }
                match self.rounds {
                    Some(t) if t > 0 => {}
                    _ => return Err(EconError::MissingParameter("rounds")),
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub enum BargainingOutcome<S = f64> {
    /// Agreement in `round` (1-based) giving Alice `share` of the surplus.
    Agreement { round: u32, share: S },
    NoAgreement,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub enum NegotiationOutcome<S = f64> {
    Trade { price: S },
    NoTrade,
}

/// Counts over a persuasion game of `rounds` rounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PersuasionOutcome {
    pub rounds: u32,
    /// Rounds in which the product was High quality.
    pub high: u32,
    /// High-quality products bought.
    pub bought_high: u32,
    /// Low-quality products rejected.
    pub rejected_low: u32,
}

impl PersuasionOutcome {
    pub fn validate(&self) -> Result<(), EconError> {
        let ok = self.rounds > 0
            && self.bought_high <= self.high
            && self.high <= self.rounds
            && self.rejected_low <= self.rounds - self.high;
        if ok {
            Ok(())
        } else {
            Err(EconError::CountInconsistency(format!(
                "T={}, n={}, k={}, r={}",
                self.rounds, self.high, self.bought_high, self.rejected_low
            )))
        }
    }

    pub fn low(&self) -> u32 {
        self.rounds - self.high
    }

    /// Low-quality products that were bought.
    pub fn bought_low(&self) -> u32 {
        self.low() - self.rejected_low
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub enum Outcome<S = f64> {
    Bargaining(BargainingOutcome<S>),
    Negotiation(NegotiationOutcome<S>),
    Persuasion(PersuasionOutcome),
}

impl<S: Scalar> Outcome<S> {
    pub fn family(&self) -> Family {
        match self {
            Outcome::Bargaining(_) => Family::Bargaining,
            Outcome::Negotiation(_) => Family::Negotiation,
            Outcome::Persuasion(_) => Family::Persuasion,
        }
    }

    pub fn validate(&self) -> Result<(), EconError> {
        match self {
            Outcome::Bargaining(BargainingOutcome::Agreement { round, share }) => {
                if *round == 0 {
                    return Err(EconError::Domain("agreement round must be >= 1".into()));
                }
                if !(*share >= S::zero() && *share <= S::one()) {
                    return Err(EconError::Domain(format!("share {share} not in [0, 1]")));
                }
                Ok(())
            }
            Outcome::Negotiation(NegotiationOutcome::Trade { price }) if !price.is_finite() => {
                Err(EconError::Domain(format!("trade price {price} is not finite")))
            }
            Outcome::Persuasion(p) => p.validate(),
            _ => Ok(()),
        }
    }
}
