use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::features::{FeatureSpec, TechPair};
use super::RegressionError;
use crate::econ::Family;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    PayoffA,
    PayoffB,
    Fairness,
    Efficiency,
}

impl Target {
    pub const ALL: [Target; 4] = [Target::PayoffA, Target::PayoffB, Target::Fairness, Target::Efficiency];

    pub fn as_str(self) -> &'static str {
        match self {
            Target::PayoffA => "payoff_a",
            Target::PayoffB => "payoff_b",
            Target::Fairness => "fairness",
            Target::Efficiency => "efficiency",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Target::ALL
            .into_iter()
            .find(|t| t.as_str() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| format!("unknown regression target `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub rmse: f64,
    pub r2: f64,
    pub rows: usize,
}

/// Fitted coefficients of one (family, target) model.
///
/// Every market and pair level of `spec` has an entry in `beta_market` /
/// `beta_pair`; the reference levels hold zero. `beta_market_pair` holds the
/// optional market×pair interactions; missing entries are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar", into = "CoefficientDoc<S>", try_from = "CoefficientDoc<S>")]
pub struct CoefficientSet<S = f64> {
    pub family: Family,
    pub target: Target,
    pub beta0: S,
    pub beta_market: BTreeMap<u32, S>,
    pub beta_pair: BTreeMap<TechPair, S>,
    pub beta_market_pair: BTreeMap<(u32, TechPair), S>,
    pub beta_situation: BTreeMap<String, S>,
    pub spec: FeatureSpec,
    pub diagnostics: Option<Diagnostics>,
}

impl<S: Scalar> CoefficientSet<S> {
    /// All-zero coefficients over `spec` with the given intercept.
    pub fn constant(family: Family, target: Target, spec: FeatureSpec, beta0: S) -> Self {
        Self {
            family,
            target,
            beta0,
            beta_market: spec.market_levels.iter().map(|&m| (m, S::zero())).collect(),
            beta_pair: spec.pair_levels.iter().map(|p| (p.clone(), S::zero())).collect(),
            beta_market_pair: BTreeMap::new(),
            beta_situation: spec.situational.iter().map(|c| (c.name.clone(), S::zero())).collect(),
            spec,
            diagnostics: None,
        }
    }

    fn check(&self) -> Result<(), RegressionError> {
        for m in &self.spec.market_levels {
            if !self.beta_market.contains_key(m) {
                return Err(RegressionError::Malformed(format!("no coefficient for market {m}")));
            }
        }
        for p in &self.spec.pair_levels {
            if !self.beta_pair.contains_key(p) {
                return Err(RegressionError::Malformed(format!("no coefficient for pair {p}")));
            }
        }
        for (m, p) in self.beta_market_pair.keys() {
            self.spec.market_position(*m)?;
            self.spec.pair_position(p)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
struct CoefficientDoc<S> {
    family: Family,
    target: Target,
    beta0: S,
    beta_market: BTreeMap<String, S>,
    beta_pair: BTreeMap<String, S>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    beta_market_pair: BTreeMap<String, S>,
    beta_situation: BTreeMap<String, S>,
    spec: FeatureSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    diagnostics: Option<Diagnostics>,
}

impl<S: Scalar> From<CoefficientSet<S>> for CoefficientDoc<S> {
    fn from(c: CoefficientSet<S>) -> Self {
        Self {
            family: c.family,
            target: c.target,
            beta0: c.beta0,
            beta_market: c.beta_market.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            beta_pair: c.beta_pair.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            beta_market_pair: c.beta_market_pair.into_iter().map(|((m, p), v)| (format!("{m}|{p}"), v)).collect(),
            beta_situation: c.beta_situation,
            spec: c.spec,
            diagnostics: c.diagnostics,
        }
    }
}

impl<S: Scalar> TryFrom<CoefficientDoc<S>> for CoefficientSet<S> {
    type Error = RegressionError;

    fn try_from(doc: CoefficientDoc<S>) -> Result<Self, Self::Error> {
        let market_key = |k: &str| k.parse::<u32>().map_err(|_| RegressionError::Malformed(format!("market key `{k}`")));
        let beta_market = doc
            .beta_market
            .into_iter()
            .map(|(k, v)| Ok((market_key(&k)?, v)))
            .collect::<Result<_, RegressionError>>()?;
        let beta_pair =
            doc.beta_pair.into_iter().map(|(k, v)| Ok((k.parse()?, v))).collect::<Result<_, RegressionError>>()?;
        let beta_market_pair = doc
            .beta_market_pair
            .into_iter()
            .map(|(k, v)| {
                let (m, p) = k.split_once('|').ok_or_else(|| RegressionError::Malformed(format!("interaction key `{k}`")))?;
                Ok(((market_key(m)?, p.parse()?), v))
            })
            .collect::<Result<_, RegressionError>>()?;
        let mut spec = doc.spec;
        spec.index()?;
        let set = CoefficientSet {
            family: doc.family,
            target: doc.target,
            beta0: doc.beta0,
            beta_market,
            beta_pair,
            beta_market_pair,
            beta_situation: doc.beta_situation,
            spec,
            diagnostics: doc.diagnostics,
        };
        set.check()?;
        Ok(set)
    }
}

/// One coefficient set per target for a single family, sharing one spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar", into = "Vec<CoefficientSet<S>>", try_from = "Vec<CoefficientSet<S>>")]
pub struct CoefficientBundle<S = f64> {
    family: Family,
    sets: BTreeMap<Target, CoefficientSet<S>>,
}

impl<S: Scalar> CoefficientBundle<S> {
    pub fn new(sets: Vec<CoefficientSet<S>>) -> Result<Self, RegressionError> {
        let first = sets.first().ok_or(RegressionError::MissingTarget(Target::PayoffA))?;
        let family = first.family;
        let (markets, pairs) = (first.spec.market_levels.clone(), first.spec.pair_levels.clone());
        let mut map = BTreeMap::new();
        for set in sets {
            if set.family != family {
                return Err(RegressionError::InconsistentBundle(format!("{} vs {}", set.family, family)));
            }
            if set.spec.market_levels != markets || set.spec.pair_levels != pairs {
                return Err(RegressionError::InconsistentBundle(format!("target {} uses different levels", set.target)));
            }
            if map.insert(set.target, set).is_some() {
                return Err(RegressionError::InconsistentBundle("duplicate target".into()));
            }
        }
        for t in Target::ALL {
            if !map.contains_key(&t) {
                return Err(RegressionError::MissingTarget(t));
            }
        }
        Ok(Self { family, sets: map })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn get(&self, target: Target) -> &CoefficientSet<S> {
        &self.sets[&target]
    }

    pub fn spec(&self) -> &FeatureSpec {
        &self.get(Target::PayoffA).spec
    }

    pub fn market_ids(&self) -> &[u32] {
        &self.spec().market_levels
    }

    /// Technologies appearing as Alice in some pair level, sorted.
    pub fn techs(&self) -> Vec<String> {
        let mut t: Vec<String> = self.spec().pair_levels.iter().map(|p| p.tech_a.clone()).collect();
        t.sort();
        t.dedup();
        t
    }

    pub fn sets(&self) -> impl Iterator<Item = &CoefficientSet<S>> {
        self.sets.values()
    }
}

impl<S: Scalar> From<CoefficientBundle<S>> for Vec<CoefficientSet<S>> {
    fn from(b: CoefficientBundle<S>) -> Self {
        b.sets.into_values().collect()
    }
}

impl<S: Scalar> TryFrom<Vec<CoefficientSet<S>>> for CoefficientBundle<S> {
    type Error = RegressionError;

    fn try_from(sets: Vec<CoefficientSet<S>>) -> Result<Self, Self::Error> {
        Self::new(sets)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regression::Covariate;

    fn spec() -> FeatureSpec {
        FeatureSpec::new(
            vec![1, 2],
            vec![TechPair::new("A", "A"), TechPair::new("A", "B")],
            vec![Covariate { name: "delta_a".into(), mean: 0.9 }],
            false,
        )
        .unwrap()
    }

    #[test]
    fn json_document_shape_and_round_trip() {
        let mut set = CoefficientSet::constant(Family::Bargaining, Target::Fairness, spec(), 0.5);
        set.beta_pair.insert(TechPair::new("A", "B"), 0.25);
        set.beta_market_pair.insert((2, TechPair::new("A", "B")), -0.125);
        set.diagnostics = Some(Diagnostics { rmse: 0.0, r2: 1.0, rows: 10 });
        let json = serde_json::to_value(&set).unwrap();
        assert_eq!(json["family"], "bargaining");
        assert_eq!(json["target"], "fairness");
        assert_eq!(json["beta_pair"]["A|B"], 0.25);
        assert_eq!(json["beta_market"]["2"], 0.0);
        assert_eq!(json["beta_market_pair"]["2|A|B"], -0.125);
        assert_eq!(json["diagnostics"]["rows"], 10);
        let back: CoefficientSet = serde_json::from_value(json).unwrap();
        assert_eq!(back, set);
    }

    #[test]
    fn rejects_incomplete_documents() {
        let set = CoefficientSet::constant(Family::Bargaining, Target::Fairness, spec(), 0.5);
        let mut json = serde_json::to_value(&set).unwrap();
        json["beta_pair"].as_object_mut().unwrap().remove("A|B");
        assert!(serde_json::from_value::<CoefficientSet>(json).is_err());
    }

    #[test]
    fn bundle_requires_all_targets() {
        let sets: Vec<_> = Target::ALL[..3]
            .iter()
            .map(|&t| CoefficientSet::constant(Family::Bargaining, t, spec(), 0.0))
            .collect();
        assert_eq!(CoefficientBundle::new(sets).unwrap_err(), RegressionError::MissingTarget(Target::Efficiency));
        let all: Vec<_> =
            Target::ALL.iter().map(|&t| CoefficientSet::constant(Family::Bargaining, t, spec(), 0.0)).collect();
        let bundle = CoefficientBundle::new(all).unwrap();
        assert_eq!(bundle.techs(), vec!["A".to_string()]);
        let text = serde_json::to_string(&bundle).unwrap();
        assert_eq!(serde_json::from_str::<CoefficientBundle>(&text).unwrap(), bundle);
    }
}
