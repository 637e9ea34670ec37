use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::SimError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BargainingStyle {
    /// Own share demanded in the first proposal, in `[0.5, 1]`.
    pub initial_demand: f64,
    /// Share conceded per subsequent proposal.
    pub concession_rate: f64,
    /// Smallest share accepted as responder in round 1.
    pub accept_threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegotiationStyle {
    /// Relative markup over (seller) or discount from (buyer) own valuation.
    pub markup: f64,
    pub concession_rate: f64,
    /// Tolerance past own valuation when accepting.
    pub reservation_slack: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PersuasionStyle {
    /// Probability the seller reports a Low product truthfully.
    pub honesty_prob: f64,
    /// Posterior on High quality the buyer needs before buying.
    pub trust_threshold: f64,
}

/// A synthetic technology: one behavioural parameter vector per family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TechPolicy {
    pub tech_id: String,
    pub bargaining: BargainingStyle,
    pub negotiation: NegotiationStyle,
    pub persuasion: PersuasionStyle,
}

impl TechPolicy {
    pub fn validate(&self) -> Result<(), SimError> {
        let b = &self.bargaining;
        let n = &self.negotiation;
        let p = &self.persuasion;
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        let nonneg = |v: f64| v >= 0.0 && v.is_finite();
        let checks: [(&'static str, f64, bool); 7] = [
            ("initial_demand", b.initial_demand, (0.5..=1.0).contains(&b.initial_demand)),
            ("bargaining.concession_rate", b.concession_rate, nonneg(b.concession_rate)),
            ("accept_threshold", b.accept_threshold, unit(b.accept_threshold)),
            ("markup", n.markup, nonneg(n.markup)),
            ("negotiation.concession_rate", n.concession_rate, nonneg(n.concession_rate)),
            ("honesty_prob", p.honesty_prob, unit(p.honesty_prob)),
            ("trust_threshold", p.trust_threshold, unit(p.trust_threshold)),
        ];
        for (field, value, ok) in checks {
            if !ok {
                return Err(SimError::PolicyRange { tech: self.tech_id.clone(), field, value });
            }
        }
        if !nonneg(n.reservation_slack) {
            return Err(SimError::PolicyRange {
                tech: self.tech_id.clone(),
                field: "reservation_slack",
                value: n.reservation_slack,
            });
        }
        Ok(())
    }

    /// Draws a random policy.
    pub fn random<R: Rng + ?Sized>(tech_id: impl Into<String>, rng: &mut R) -> Self {
        Self {
            tech_id: tech_id.into(),
            bargaining: BargainingStyle {
                initial_demand: rng.random_range(0.5..0.95),
                concession_rate: rng.random_range(0.0..0.12),
                accept_threshold: rng.random_range(0.2..0.55),
            },
            negotiation: NegotiationStyle {
                markup: rng.random_range(0.05..0.6),
                concession_rate: rng.random_range(0.0..0.15),
                reservation_slack: rng.random_range(0.0..0.2),
            },
            persuasion: PersuasionStyle {
                honesty_prob: rng.random_range(0.1..1.0),
                trust_threshold: rng.random_range(0.3..0.9),
            },
        }
    }
}

/// Tech ids `A`, `B`, ... (then `T13`, `T14`, ... past 26).
pub fn tech_name(i: usize) -> String {
    if i < 26 {
        char::from(b'A' + i as u8).to_string()
    } else {
        format!("T{i}")
    }
}

/// `size` distinct random policies derived from `seed`.
pub fn generate_roster(size: usize, seed: u64) -> Result<Vec<TechPolicy>, SimError> {
    if size < 2 {
        return Err(SimError::RosterTooSmall(size));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..size).map(|i| TechPolicy::random(tech_name(i), &mut rng)).collect())
}

pub(crate) fn validate_roster(roster: &[TechPolicy]) -> Result<(), SimError> {
    if roster.len() < 2 {
        return Err(SimError::RosterTooSmall(roster.len()));
    }
    let mut seen = HashSet::new();
    for p in roster {
        p.validate()?;
        if !seen.insert(p.tech_id.as_str()) {
            return Err(SimError::DuplicateTech(p.tech_id.clone()));
        }
    }
    Ok(())
}
