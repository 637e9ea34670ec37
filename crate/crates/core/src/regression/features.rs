use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::RegressionError;
use crate::scalar::Scalar;

/// Ordered (Alice's tech, Bob's tech) pair. Serialized as `"a|b"`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TechPair {
    pub tech_a: String,
    pub tech_b: String,
}

impl TechPair {
    pub fn new(tech_a: impl Into<String>, tech_b: impl Into<String>) -> Self {
        Self { tech_a: tech_a.into(), tech_b: tech_b.into() }
    }
}

impl fmt::Display for TechPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.tech_a, self.tech_b)
    }
}

impl FromStr for TechPair {
    type Err = RegressionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split('|').collect::<Vec<_>>().as_slice() {
            [a, b] if !a.is_empty() && !b.is_empty() => Ok(TechPair::new(*a, *b)),
            _ => Err(RegressionError::Malformed(format!("pair key `{s}`"))),
        }
    }
}

impl Serialize for TechPair {
    fn serialize<Z: serde::Serializer>(&self, serializer: Z) -> Result<Z::Ok, Z::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TechPair {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Covariate {
    pub name: String,
    pub mean: f64,
}

/// Levels and centering constants shared by every model of one family.
///
/// The first market and first pair are the reference levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub market_levels: Vec<u32>,
    pub pair_levels: Vec<TechPair>,
    pub situational: Vec<Covariate>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub market_pair_interactions: bool,
    #[serde(skip)]
    market_index: HashMap<u32, usize>,
    #[serde(skip)]
    pair_index: HashMap<TechPair, usize>,
}

impl FeatureSpec {
    pub fn new(
        market_levels: Vec<u32>,
        pair_levels: Vec<TechPair>,
        situational: Vec<Covariate>,
        market_pair_interactions: bool,
    ) -> Result<Self, RegressionError> {
        let mut spec = Self {
            market_levels,
            pair_levels,
            situational,
            market_pair_interactions,
            market_index: HashMap::new(),
            pair_index: HashMap::new(),
        };
        spec.index()?;
        Ok(spec)
    }

    /// Builds levels (sorted) and covariate means from observed data.
    pub fn from_observations<S: Scalar>(
        rows: &[Observation<S>],
        covariate_names: &[&str],
        market_pair_interactions: bool,
    ) -> Result<Self, RegressionError> {
        let markets: BTreeSet<u32> = rows.iter().map(|r| r.market_id).collect();
        let pairs: BTreeSet<TechPair> = rows.iter().map(|r| r.pair.clone()).collect();
        let mut sums = vec![0.0; covariate_names.len()];
        for r in rows {
            if r.covariates.len() != covariate_names.len() {
                return Err(RegressionError::CovariateCount {
                    expected: covariate_names.len(),
                    got: r.covariates.len(),
                });
            }
            for (s, v) in sums.iter_mut().zip(&r.covariates) {
                *s += v.as_f64();
            }
        }
        let n = rows.len().max(1) as f64;
        let situational = covariate_names
            .iter()
            .zip(sums)
            .map(|(name, s)| Covariate { name: name.to_string(), mean: s / n })
            .collect();
        Self::new(markets.into_iter().collect(), pairs.into_iter().collect(), situational, market_pair_interactions)
    }

    /// Rebuilds lookup tables after deserialization and checks invariants.
    pub(crate) fn index(&mut self) -> Result<(), RegressionError> {
        if self.market_levels.is_empty() || self.pair_levels.is_empty() {
            return Err(RegressionError::InvalidSpec("market and pair levels must be non-empty".into()));
        }
        self.market_index = self.market_levels.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        if self.market_index.len() != self.market_levels.len() {
            return Err(RegressionError::InvalidSpec("duplicate market level".into()));
        }
        self.pair_index = self.pair_levels.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        if self.pair_index.len() != self.pair_levels.len() {
            return Err(RegressionError::InvalidSpec("duplicate pair level".into()));
        }
        for p in &self.pair_levels {
            if p.tech_a.contains('|') || p.tech_b.contains('|') {
                return Err(RegressionError::InvalidSpec(format!("tech id in `{p}` contains `|`")));
            }
        }
        let mut names = BTreeSet::new();
        for c in &self.situational {
            if !c.mean.is_finite() {
                return Err(RegressionError::InvalidSpec(format!("covariate `{}` has non-finite mean", c.name)));
            }
            if !names.insert(c.name.as_str()) {
                return Err(RegressionError::InvalidSpec(format!("duplicate covariate `{}`", c.name)));
            }
        }
        Ok(())
    }

    pub fn market_position(&self, market_id: u32) -> Result<usize, RegressionError> {
        self.market_index.get(&market_id).copied().ok_or(RegressionError::UnknownMarket(market_id))
    }

    pub fn pair_position(&self, pair: &TechPair) -> Result<usize, RegressionError> {
        self.pair_index.get(pair).copied().ok_or_else(|| RegressionError::UnknownPair(pair.to_string()))
    }

    fn interaction_count(&self) -> usize {
        if self.market_pair_interactions {
            (self.market_levels.len() - 1) * (self.pair_levels.len() - 1)
        } else {
            0
        }
    }

    /// Number of design-matrix columns.
    pub fn width(&self) -> usize {
        1 + (self.market_levels.len() - 1)
            + (self.pair_levels.len() - 1)
            + self.interaction_count()
            + self.situational.len()
    }

    /// Human-readable column names, in design order.
    pub fn column_names(&self) -> Vec<String> {
        let mut names = vec!["intercept".to_string()];
        names.extend(self.market_levels[1..].iter().map(|m| format!("market={m}")));
        names.extend(self.pair_levels[1..].iter().map(|p| format!("pair={p}")));
        if self.market_pair_interactions {
            for m in &self.market_levels[1..] {
                for p in &self.pair_levels[1..] {
                    names.push(format!("market={m}:pair={p}"));
                }
            }
        }
        names.extend(self.situational.iter().map(|c| c.name.clone()));
        names
    }

    pub(crate) fn market_offset(&self) -> usize {
        1
    }

    pub(crate) fn pair_offset(&self) -> usize {
        self.market_levels.len()
    }

    pub(crate) fn interaction_offset(&self) -> usize {
        self.pair_offset() + self.pair_levels.len() - 1
    }

    pub(crate) fn situational_offset(&self) -> usize {
        self.interaction_offset() + self.interaction_count()
    }
}

/// One training row.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation<S = f64> {
    pub market_id: u32,
    pub pair: TechPair,
    pub covariates: Vec<S>,
    pub target: S,
}

/// `[1] ++ one-hot(market)[1..] ++ one-hot(pair)[1..] ++ interactions ++ (x − x̄)`.
pub fn encode<S: Scalar>(row: &Observation<S>, spec: &FeatureSpec) -> Result<Vec<S>, RegressionError> {
    let mut out = vec![S::zero(); spec.width()];
    encode_into(row, spec, &mut out)?;
    Ok(out)
}

pub(crate) fn encode_into<S: Scalar>(
    row: &Observation<S>,
    spec: &FeatureSpec,
    out: &mut [S],
) -> Result<(), RegressionError> {
    if row.covariates.len() != spec.situational.len() {
        return Err(RegressionError::CovariateCount { expected: spec.situational.len(), got: row.covariates.len() });
    }
    out.fill(S::zero());
    out[0] = S::one();
    let m = spec.market_position(row.market_id)?;
    let p = spec.pair_position(&row.pair)?;
    if m > 0 {
        out[spec.market_offset() + m - 1] = S::one();
    }
    if p > 0 {
        out[spec.pair_offset() + p - 1] = S::one();
    }
    if spec.market_pair_interactions && m > 0 && p > 0 {
        out[spec.interaction_offset() + (m - 1) * (spec.pair_levels.len() - 1) + (p - 1)] = S::one();
    }
    let base = spec.situational_offset();
    for (k, (x, c)) in row.covariates.iter().zip(&spec.situational).enumerate() {
        out[base + k] = *x - S::lit(c.mean);
    }
    Ok(())
}
