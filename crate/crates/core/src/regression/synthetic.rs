use rand::Rng;

use super::coefficients::{CoefficientBundle, CoefficientSet, Target};
use super::features::{FeatureSpec, TechPair};
use crate::econ::{enumerate_markets, Family};

/// Ranges for randomly drawn coefficient bundles. Effects are drawn
/// uniformly from `[-scale, scale]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticCoefficients {
    pub market_scale: f64,
    pub pair_scale: f64,
    pub interaction_scale: f64,
}

impl Default for SyntheticCoefficients {
    fn default() -> Self {
        Self { market_scale: 0.02, pair_scale: 0.08, interaction_scale: 0.05 }
    }
}

fn intercept(target: Target) -> f64 {
    match target {
        Target::PayoffA | Target::PayoffB => 0.5,
        Target::Fairness => 0.9,
        Target::Efficiency => 0.8,
    }
}

/// Random coefficients over every market of `family` and every ordered pair
/// of `techs`, with market×pair interactions when `interaction_scale > 0`.
pub fn synthetic_bundle<R: Rng + ?Sized>(
    family: Family,
    techs: &[String],
    ranges: &SyntheticCoefficients,
    rng: &mut R,
) -> CoefficientBundle<f64> {
    let markets: Vec<u32> = enumerate_markets(family).iter().map(|m| m.market_id).collect();
    let pairs: Vec<TechPair> =
        techs.iter().flat_map(|a| techs.iter().map(move |b| TechPair::new(a.clone(), b.clone()))).collect();
    let interactions = ranges.interaction_scale > 0.0;
    let spec = FeatureSpec::new(markets.clone(), pairs.clone(), vec![], interactions)
        .expect("synthetic levels are distinct");
    let draw = |scale: f64, rng: &mut R| if scale > 0.0 { rng.random_range(-scale..=scale) } else { 0.0 };

    let sets = Target::ALL
        .iter()
        .map(|&target| {
            let mut set = CoefficientSet::constant(family, target, spec.clone(), intercept(target));
            for m in &markets[1..] {
                set.beta_market.insert(*m, draw(ranges.market_scale, rng));
            }
            for p in &pairs[1..] {
                set.beta_pair.insert(p.clone(), draw(ranges.pair_scale, rng));
            }
            if interactions {
                for m in &markets[1..] {
                    for p in &pairs[1..] {
                        set.beta_market_pair.insert((*m, p.clone()), draw(ranges.interaction_scale, rng));
                    }
                }
            }
            set
        })
        .collect();
    CoefficientBundle::new(sets).expect("all targets present")
}
