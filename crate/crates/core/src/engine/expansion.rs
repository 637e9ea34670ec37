use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{classify, run_metagame, AdoptionMode, ClassifyInput, ClassifyOptions, EngineError, Flags, MetaGameResult, Objective};
use crate::regression::CoefficientBundle;
use crate::scalar::Scalar;

/// Before/after meta-games for one released technology.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct ExpansionReport<S = f64> {
    pub objective: Objective,
    pub added_tech: String,
    pub baseline: MetaGameResult<S>,
    pub expanded: MetaGameResult<S>,
    /// Expanded objective at the baseline's chosen market.
    pub inertia_objective: S,
    pub options: ClassifyOptions,
    pub flags: Flags,
}

impl<S: Scalar> ExpansionReport<S> {
    pub fn classify_input(&self, mode: AdoptionMode) -> ClassifyInput {
        let adoption = match mode {
            AdoptionMode::Averaged => self.expanded.adoption[&self.added_tech],
            AdoptionMode::Strict => self.expanded.max_adoption(&self.added_tech).unwrap_or(S::zero()),
        };
        ClassifyInput {
            delta_a: (self.expanded.payoffs.0 - self.baseline.payoffs.0).as_f64(),
            delta_b: (self.expanded.payoffs.1 - self.baseline.payoffs.1).as_f64(),
            adoption: adoption.as_f64(),
            baseline_objective: self.baseline.objective_value.as_f64(),
            expanded_objective: self.expanded.objective_value.as_f64(),
            inertia_objective: self.inertia_objective.as_f64(),
        }
    }

    pub fn summary(&self) -> ReportSummary {
        let side = |r: &MetaGameResult<S>| ReportSide {
            techs: r.techs.clone(),
            market: r.chosen_market,
            payoffs: [r.payoffs.0.as_f64(), r.payoffs.1.as_f64()],
            objective: r.objective_value.as_f64(),
            adoption: r.adoption.iter().map(|(k, v)| (k.clone(), v.as_f64())).collect(),
        };
        ReportSummary {
            objective: self.objective,
            added_tech: self.added_tech.clone(),
            baseline: side(&self.baseline),
            expanded: side(&self.expanded),
            inertia_objective: self.inertia_objective.as_f64(),
            added_adoption: self.classify_input(self.options.adoption_mode).adoption,
            options: self.options,
            flags: self.flags,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportSide {
    pub techs: Vec<String>,
    pub market: u32,
    pub payoffs: [f64; 2],
    pub objective: f64,
    pub adoption: BTreeMap<String, f64>,
}

/// Flat, serializable view of an [`ExpansionReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub objective: Objective,
    pub added_tech: String,
    pub baseline: ReportSide,
    pub expanded: ReportSide,
    pub inertia_objective: f64,
    /// Adoption of the added technology under `options.adoption_mode`.
    pub added_adoption: f64,
    pub options: ClassifyOptions,
    pub flags: Flags,
}

impl ReportSummary {
    pub fn classify_input(&self) -> ClassifyInput {
        ClassifyInput {
            delta_a: self.expanded.payoffs[0] - self.baseline.payoffs[0],
            delta_b: self.expanded.payoffs[1] - self.baseline.payoffs[1],
            adoption: self.added_adoption,
            baseline_objective: self.baseline.objective,
            expanded_objective: self.expanded.objective,
            inertia_objective: self.inertia_objective,
        }
    }

    /// Flags recomputed from the stored numbers.
    pub fn reclassify(&self) -> Flags {
        classify(&self.classify_input(), &self.options)
    }
}

/// Runs the meta-game on `baseline_techs` and on `baseline_techs + new_tech`.
pub fn expand_technology<S: Scalar>(
    bundle: &CoefficientBundle<S>,
    baseline_techs: &[String],
    new_tech: &str,
    objective: Objective,
    options: &ClassifyOptions,
) -> Result<ExpansionReport<S>, EngineError> {
    if baseline_techs.iter().any(|t| t == new_tech) {
        return Err(EngineError::AlreadyPresent(new_tech.to_string()));
    }
    let baseline = run_metagame(bundle, baseline_techs, objective)?;
    let mut techs = baseline_techs.to_vec();
    techs.push(new_tech.to_string());
    let expanded = run_metagame(bundle, &techs, objective)?;
    let inertia_objective = expanded
        .solution(baseline.chosen_market)
        .expect("both runs cover the same markets")
        .avg_objective(objective);
    let mut report = ExpansionReport {
        objective,
        added_tech: new_tech.to_string(),
        baseline,
        expanded,
        inertia_objective,
        options: *options,
        flags: Flags::default(),
    };
    report.flags = classify(&report.classify_input(options.adoption_mode), options);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture::{fixture_techs, poisoned_apple_bundle};

    #[test]
    fn poisoned_apple_replay() {
        let bundle = poisoned_apple_bundle();
        let r = expand_technology(&bundle, &fixture_techs(false), "E", Objective::Fairness, &ClassifyOptions::default())
            .unwrap();
        assert_eq!(r.baseline.chosen_market, 4);
        assert!((r.baseline.objective_value - 1.0).abs() < 1e-9);
        assert!((r.baseline.payoffs.0 - 0.49).abs() < 1e-9 && (r.baseline.payoffs.1 - 0.50).abs() < 1e-9);
        assert_eq!(r.expanded.chosen_market, 8);
        assert!((r.expanded.objective_value - 0.990).abs() < 1e-9);
        assert!((r.expanded.payoffs.0 - 0.52).abs() < 1e-9 && (r.expanded.payoffs.1 - 0.46).abs() < 1e-9);
        assert!((r.inertia_objective - 0.976).abs() < 1e-9);
        assert!(r.expanded.adoption["E"] <= 1e-6);
        assert!(r.flags.poisoned_apple && r.flags.inertia_harm && !r.flags.objective_improved);
        let summary = r.summary();
        assert_eq!(summary.reclassify(), r.flags);
        let json = serde_json::to_string(&summary).unwrap();
        let back: ReportSummary = serde_json::from_str(&json).unwrap();
        assert_eq!(back, summary);
    }

    #[test]
    fn rejects_present_tech() {
        let bundle = poisoned_apple_bundle();
        let err = expand_technology(&bundle, &fixture_techs(false), "A", Objective::Fairness, &ClassifyOptions::default());
        assert!(matches!(err, Err(EngineError::AlreadyPresent(_))));
    }
}
