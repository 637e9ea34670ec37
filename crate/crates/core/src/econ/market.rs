use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Bargaining,
    Negotiation,
    Persuasion,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Bargaining, Family::Negotiation, Family::Persuasion];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Bargaining => "bargaining",
            Family::Negotiation => "negotiation",
            Family::Persuasion => "persuasion",
        }
    }

    /// Looks up a market by its 1-based id within this family's grid.
    pub fn market(self, market_id: u32) -> Option<MarketConfig> {
        enumerate_markets(self).into_iter().find(|m| m.market_id == market_id)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bargaining" => Ok(Family::Bargaining),
            "negotiation" => Ok(Family::Negotiation),
            "persuasion" => Ok(Family::Persuasion),
            other => Err(format!("unknown game family `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Horizon {
    /// Fixed number of rounds; the count itself is situational.
    Finite,
    /// Stochastic termination.
    Infinite,
}

impl fmt::Display for Horizon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Horizon::Finite => "finite",
            Horizon::Infinite => "infinite",
        })
    }
}

impl FromStr for Horizon {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "finite" => Ok(Horizon::Finite),
            "infinite" => Ok(Horizon::Infinite),
            other => Err(format!("unknown horizon `{other}`")),
        }
    }
}

/// One structural market: the rule set the regulator can impose.
///
/// `horizon` is set exactly for bargaining and negotiation, `myopic_buyer`
/// exactly for persuasion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MarketConfig {
    pub family: Family,
    pub market_id: u32,
    pub complete_info: bool,
    pub messages_allowed: bool,
    pub horizon: Option<Horizon>,
    pub myopic_buyer: Option<bool>,
}

impl MarketConfig {
    pub fn is_well_formed(&self) -> bool {
        match self.family {
            Family::Persuasion => self.horizon.is_none() && self.myopic_buyer.is_some(),
            _ => self.horizon.is_some() && self.myopic_buyer.is_none(),
        }
    }

    pub fn describe(&self) -> String {
        let info = if self.complete_info { "Complete" } else { "Incomplete" };
        let comm = if self.messages_allowed { "Messages" } else { "No Messages" };
        match (self.horizon, self.myopic_buyer) {
            (Some(Horizon::Finite), _) => format!("{info}, {comm}, Finite"),
            (Some(Horizon::Infinite), _) => format!("{info}, {comm}, Infinite"),
            (None, Some(true)) => format!("{info}, {comm}, Myopic"),
            _ => format!("{info}, {comm}, Long-living"),
        }
    }
}

// (complete_info, messages_allowed, infinite) in market-id order.
const ALTERNATING_GRID: [(bool, bool, bool); 8] = [
    (false, false, false),
    (false, false, true),
    (false, true, false),
    (false, true, true),
    (true, true, false),
    (true, true, true),
    (true, false, false),
    (true, false, true),
];

/// The family's market grid in market-id order (ids start at 1).
pub fn enumerate_markets(family: Family) -> Vec<MarketConfig> {
    match family {
        Family::Bargaining | Family::Negotiation => ALTERNATING_GRID
            .iter()
            .zip(1..)
            .map(|(&(ci, ma, infinite), id)| MarketConfig {
                family,
                market_id: id,
                complete_info: ci,
                messages_allowed: ma,
                horizon: Some(if infinite { Horizon::Infinite } else { Horizon::Finite }),
                myopic_buyer: None,
            })
            .collect(),
        Family::Persuasion => {
            let mut out = Vec::with_capacity(8);
            for ci in [false, true] {
                for ma in [false, true] {
                    for myopic in [false, true] {
                        out.push(MarketConfig {
                            family,
                            market_id: out.len() as u32 + 1,
                            complete_info: ci,
                            messages_allowed: ma,
                            horizon: None,
                            myopic_buyer: Some(myopic),
                        });
                    }
                }
            }
            out
        }
    }
}
