//! Many expansion experiments over random technology subsets, aggregated
//! into frequency panels with Wilson intervals.

mod report;
mod stats;

pub use report::{write_experiments_jsonl, write_panels_csv, write_stats_json, ReportFormat};
pub use stats::{wilson_interval, CellStats, Counts, Panel, PanelRow, SweepStats, Z_95};

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::econ::Family;
use crate::engine::{expand_technology, ClassifyOptions, EngineError, Flags, Objective};
use crate::regression::{
    covariate_names, fit_observations, observations, synthetic_bundle, CoefficientBundle, FeatureSpec,
    RegressionError, SyntheticCoefficients, Target,
};
use crate::sim::{cell_rng, generate_corpus, generate_roster, tech_name, GameRecord, SimError};

/// Slack allowed when checking that the regulator never does worse than
/// keeping its old market.
pub const OPTIMALITY_SLACK: f64 = 1e-9;

/// Where the per-family coefficient bundles come from.
#[derive(Debug, Clone, PartialEq)]
pub enum CoefficientSource {
    /// Randomly drawn coefficients, one bundle per family.
    Synthetic(SyntheticCoefficients),
    /// Simulate a corpus with a generated roster, then fit it.
    Simulated { games_per_cell: usize },
    /// Caller-supplied bundles; tech ids must be `A`, `B`, ... up to the
    /// roster size.
    Fixed(Vec<CoefficientBundle>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub families: Vec<Family>,
    pub objectives: Vec<Objective>,
    pub roster_size: usize,
    pub subset_sizes: Vec<usize>,
    pub experiments_per_cell: usize,
    pub seed: u64,
    pub source: CoefficientSource,
    pub classify: ClassifyOptions,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            families: Family::ALL.to_vec(),
            objectives: Objective::ALL.to_vec(),
            roster_size: 13,
            subset_sizes: (2..=12).collect(),
            experiments_per_cell: 10,
            seed: 0,
            source: CoefficientSource::Synthetic(SyntheticCoefficients::default()),
            classify: ClassifyOptions::default(),
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), SweepError> {
        if self.roster_size < 3 || self.roster_size > 26 {
            return Err(SweepError::Config(format!("roster size {} not in [3, 26]", self.roster_size)));
        }
        if let Some(n) = self.subset_sizes.iter().find(|&&n| n < 2 || n >= self.roster_size) {
            return Err(SweepError::Config(format!(
                "subset size {n} must satisfy 2 <= N < roster size {}",
                self.roster_size
            )));
        }
        if self.families.is_empty() || self.objectives.is_empty() {
            return Err(SweepError::Config("families and objectives must be non-empty".into()));
        }
        Ok(())
    }

    pub fn techs(&self) -> Vec<String> {
        (0..self.roster_size).map(tech_name).collect()
    }

    /// Every (family, objective, N) cell in experiment order.
    pub fn cells(&self) -> Vec<(Family, Objective, usize)> {
        let mut out = Vec::new();
        for &f in &self.families {
            for &o in &self.objectives {
                for &n in &self.subset_sizes {
                    out.push((f, o, n));
                }
            }
        }
        out
    }
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid sweep config: {0}")]
    Config(String),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Regression(#[from] RegressionError),
    #[error("experiment {index}: {source}")]
    Engine { index: usize, source: EngineError },
}

/// One expansion experiment, reduced to the numbers the panels need.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub index: usize,
    pub family: Family,
    pub objective: Objective,
    pub baseline: Vec<String>,
    pub added: String,
    pub baseline_market: u32,
    pub expanded_market: u32,
    pub baseline_payoffs: [f64; 2],
    pub expanded_payoffs: [f64; 2],
    pub baseline_objective: f64,
    pub expanded_objective: f64,
    pub inertia_objective: f64,
    pub adoption: f64,
    pub flags: Flags,
}

impl ExperimentRecord {
    pub fn optimality_violated(&self) -> bool {
        self.expanded_objective < self.inertia_objective - OPTIMALITY_SLACK
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub stats: SweepStats,
    pub experiments: Vec<ExperimentRecord>,
    /// The simulated corpus, when the source simulates one.
    pub corpus: Option<Vec<GameRecord>>,
    pub bundles: Vec<CoefficientBundle>,
}

/// Coefficient bundles for each configured family, plus the corpus they were
/// fitted on when simulating.
pub fn sweep_bundles(config: &SweepConfig) -> Result<(Vec<CoefficientBundle>, Option<Vec<GameRecord>>), SweepError> {
    let techs = config.techs();
    match &config.source {
        CoefficientSource::Synthetic(ranges) => {
            let bundles = config
                .families
                .iter()
                .map(|&family| {
                    let mut rng = cell_rng(config.seed, u64::MAX - family as u64);
                    synthetic_bundle(family, &techs, ranges, &mut rng)
                })
                .collect();
            Ok((bundles, None))
        }
        CoefficientSource::Simulated { games_per_cell } => {
            let roster = generate_roster(config.roster_size, config.seed)?;
            let corpus = generate_corpus(&roster, &config.families, *games_per_cell, config.seed)?;
            let bundles = config
                .families
                .iter()
                .map(|&family| fit_family(&corpus, family))
                .collect::<Result<_, _>>()?;
            Ok((bundles, Some(corpus)))
        }
        CoefficientSource::Fixed(bundles) => {
            let picked = config
                .families
                .iter()
                .map(|&family| {
                    bundles.iter().find(|b| b.family() == family).cloned().ok_or_else(|| {
                        SweepError::Config(format!("no coefficient bundle for {family}"))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            for b in &picked {
                let known = b.techs();
                if let Some(t) = techs.iter().find(|t| !known.contains(t)) {
                    return Err(SweepError::Config(format!("bundle for {} lacks tech {t}", b.family())));
                }
            }
            Ok((picked, None))
        }
    }
}

/// Fits all four targets for one family with market×pair interactions.
pub fn fit_family(corpus: &[GameRecord], family: Family) -> Result<CoefficientBundle, RegressionError> {
    let names = covariate_names(family);
    let spec = FeatureSpec::from_observations(&observations(corpus, family, Target::PayoffA), names, true)?;
    let sets = Target::ALL
        .iter()
        .map(|&target| fit_observations(&observations(corpus, family, target), &spec, family, target))
        .collect::<Result<Vec<_>, _>>()?;
    CoefficientBundle::new(sets)
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutput, SweepError> {
    config.validate()?;
    let (bundles, corpus) = sweep_bundles(config)?;
    let techs = config.techs();
    let jobs: Vec<(usize, Family, Objective, usize)> = config
        .cells()
        .into_iter()
        .flat_map(|(f, o, n)| std::iter::repeat_n((f, o, n), config.experiments_per_cell))
        .enumerate()
        .map(|(i, (f, o, n))| (i, f, o, n))
        .collect();

    let experiments = jobs
        .par_iter()
        .map(|&(index, family, objective, n)| {
            let bundle = &bundles[config.families.iter().position(|&f| f == family).unwrap()];
            let mut rng = cell_rng(config.seed, index as u64);
            let picks = sample(&mut rng, techs.len(), n + 1).into_vec();
            let baseline: Vec<String> = picks[..n].iter().map(|&i| techs[i].clone()).collect();
            let added = techs[picks[n]].clone();
            let report = expand_technology(bundle, &baseline, &added, objective, &config.classify)
                .map_err(|source| SweepError::Engine { index, source })?;
            let s = report.summary();
            Ok(ExperimentRecord {
                index,
                family,
                objective,
                baseline,
                added,
                baseline_market: s.baseline.market,
                expanded_market: s.expanded.market,
                baseline_payoffs: s.baseline.payoffs,
                expanded_payoffs: s.expanded.payoffs,
                baseline_objective: s.baseline.objective,
                expanded_objective: s.expanded.objective,
                inertia_objective: s.inertia_objective,
                adoption: s.added_adoption,
                flags: s.flags,
            })
        })
        .collect::<Result<Vec<_>, SweepError>>()?;

    let stats = aggregate(config, &experiments);
    Ok(SweepOutput { stats, experiments, corpus, bundles })
}

/// Tallies experiments into cells and panels. Only integer counts are
/// accumulated, so the result does not depend on experiment order.
pub fn aggregate(config: &SweepConfig, experiments: &[ExperimentRecord]) -> SweepStats {
    let mut cells: BTreeMap<(Family, Objective, usize), Counts> =
        config.cells().into_iter().map(|c| (c, Counts::default())).collect();
    for e in experiments {
        cells
            .entry((e.family, e.objective, e.baseline.len()))
            .or_default()
            .record(&e.flags, e.optimality_violated());
    }
    let mut pooled: BTreeMap<(Family, Objective), Counts> = BTreeMap::new();
    let mut totals = Counts::default();
    for ((f, o, _), c) in &cells {
        pooled.entry((*f, *o)).or_default().merge(c);
        totals.merge(c);
    }
    let panels = pooled
        .iter()
        .flat_map(|(&(f, o), c)| Panel::ALL.iter().map(move |&p| PanelRow::new(p, f, o, c)))
        .collect();
    SweepStats {
        cells: cells
            .into_iter()
            .map(|((family, objective, subset_size), counts)| CellStats { family, objective, subset_size, counts })
            .collect(),
        panels,
        totals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SweepConfig {
        SweepConfig {
            families: vec![Family::Bargaining],
            objectives: vec![Objective::Fairness],
            roster_size: 6,
            subset_sizes: vec![2, 3, 5],
            experiments_per_cell: 4,
            seed: 11,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn empty_sweep() {
        let out = run_sweep(&SweepConfig { experiments_per_cell: 0, ..small() }).unwrap();
        assert!(out.experiments.is_empty());
        assert!(out.stats.panels.iter().all(|p| p.n == 0 && p.frequency.is_none()));
    }

    #[test]
    fn deterministic_and_order_free() {
        let cfg = small();
        let one = run_sweep(&cfg).unwrap();
        let two = run_sweep(&cfg).unwrap();
        assert_eq!(one.experiments, two.experiments);
        assert_eq!(one.stats, two.stats);
        let mut shuffled = one.experiments.clone();
        shuffled.reverse();
        shuffled.rotate_left(3);
        assert_eq!(aggregate(&cfg, &shuffled), one.stats);
    }

    #[test]
    fn subset_size_bounds() {
        assert!(SweepConfig { subset_sizes: vec![6], ..small() }.validate().is_err());
        assert!(SweepConfig { subset_sizes: vec![1], ..small() }.validate().is_err());
    }
}
