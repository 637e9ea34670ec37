use std::collections::BTreeMap;

use super::coefficients::{CoefficientSet, Diagnostics, Target};
use super::dataset::observations;
use super::features::{encode_into, FeatureSpec, Observation};
use super::lstsq::least_squares;
use super::RegressionError;
use crate::econ::Family;
use crate::scalar::Scalar;
use crate::sim::GameRecord;

/// Fits one (family, target) model on the family's records in `corpus`.
pub fn fit(
    corpus: &[GameRecord],
    family: Family,
    target: Target,
    spec: &FeatureSpec,
) -> Result<CoefficientSet<f64>, RegressionError> {
    let rows = observations(corpus, family, target);
    fit_observations(&rows, spec, family, target)
}

/// Ordinary least squares on pre-extracted rows.
pub fn fit_observations<S: Scalar>(
    rows: &[Observation<S>],
    spec: &FeatureSpec,
    family: Family,
    target: Target,
) -> Result<CoefficientSet<S>, RegressionError> {
    let width = spec.width();
    if rows.len() < width {
        return Err(RegressionError::TooFewRows { rows: rows.len(), columns: width });
    }
    let mut columns = vec![Vec::with_capacity(rows.len()); width];
    let mut buf = vec![S::zero(); width];
    for row in rows {
        encode_into(row, spec, &mut buf)?;
        for (col, &v) in columns.iter_mut().zip(&buf) {
            col.push(v);
        }
    }
    let y: Vec<S> = rows.iter().map(|r| r.target).collect();
    let solution = least_squares(columns, y.clone()).map_err(|cols| {
        let names = spec.column_names();
        RegressionError::RankDeficient { columns: cols.into_iter().map(|c| names[c].clone()).collect() }
    })?;
    let beta = solution.coefficients;

    let n = S::from_usize_lossy(rows.len());
    let mean = y.iter().copied().sum::<S>() / n;
    let total: S = y.iter().map(|&v| (v - mean) * (v - mean)).sum();
    let rss = solution.residual_sum_squares.max(S::zero());
    let rmse = (rss / n).sqrt().as_f64();
    let r2 = if total > S::zero() {
        (S::one() - rss / total).as_f64()
    } else if rss.as_f64() <= 1e-20 {
        1.0
    } else {
        0.0
    };

    let mut beta_market = BTreeMap::new();
    for (k, &m) in spec.market_levels.iter().enumerate() {
        beta_market.insert(m, if k == 0 { S::zero() } else { beta[spec.market_offset() + k - 1] });
    }
    let mut beta_pair = BTreeMap::new();
    for (k, p) in spec.pair_levels.iter().enumerate() {
        beta_pair.insert(p.clone(), if k == 0 { S::zero() } else { beta[spec.pair_offset() + k - 1] });
    }
    let mut beta_market_pair = BTreeMap::new();
    if spec.market_pair_interactions {
        let stride = spec.pair_levels.len() - 1;
        for (mi, &m) in spec.market_levels.iter().enumerate().skip(1) {
            for (pi, p) in spec.pair_levels.iter().enumerate().skip(1) {
                let v = beta[spec.interaction_offset() + (mi - 1) * stride + (pi - 1)];
                beta_market_pair.insert((m, p.clone()), v);
            }
        }
    }
    let beta_situation = spec
        .situational
        .iter()
        .enumerate()
        .map(|(k, c)| (c.name.clone(), beta[spec.situational_offset() + k]))
        .collect();

    Ok(CoefficientSet {
        family,
        target,
        beta0: beta[0],
        beta_market,
        beta_pair,
        beta_market_pair,
        beta_situation,
        spec: spec.clone(),
        diagnostics: Some(Diagnostics { rmse, r2, rows: rows.len() }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regression::TechPair;

    fn pairs(techs: &[&str]) -> Vec<TechPair> {
        techs.iter().flat_map(|a| techs.iter().map(move |b| TechPair::new(*a, *b))).collect()
    }

    #[test]
    fn constant_target_gives_intercept_only() {
        let mut rows = Vec::new();
        for m in 1..=3 {
            for p in pairs(&["A", "B"]) {
                for k in 0..3 {
                    let x = (m * 7 + k) as f64 * 0.1 - 0.9;
                    rows.push(Observation { market_id: m, pair: p.clone(), covariates: vec![x], target: 0.7 });
                }
            }
        }
        let spec = FeatureSpec::from_observations(&rows, &["x"], false).unwrap();
        let set = fit_observations(&rows, &spec, Family::Bargaining, Target::Fairness).unwrap();
        assert!((set.beta0 - 0.7).abs() < 1e-12);
        for v in set.beta_market.values().chain(set.beta_pair.values()).chain(set.beta_situation.values()) {
            assert!(v.abs() < 1e-12);
        }
        let diag = set.diagnostics.unwrap();
        assert!(diag.rmse < 1e-12);
        assert_eq!(diag.rows, rows.len());
    }

    #[test]
    fn duplicate_covariate_column_is_named() {
        let mut rows = Vec::new();
        for m in 1..=2 {
            for p in pairs(&["A"]) {
                for k in 0..4 {
                    let x = k as f64 + m as f64;
                    rows.push(Observation { market_id: m, pair: p.clone(), covariates: vec![x, x], target: x });
                }
            }
        }
        let spec = FeatureSpec::from_observations(&rows, &["x", "x_copy"], false).unwrap();
        match fit_observations(&rows, &spec, Family::Bargaining, Target::Fairness) {
            Err(RegressionError::RankDeficient { columns }) => {
                assert_eq!(columns.len(), 1);
                assert!(columns[0] == "x" || columns[0] == "x_copy");
            }
            other => panic!("expected rank deficiency, got {other:?}"),
        }
    }

    #[test]
    fn too_few_rows() {
        let rows = vec![Observation { market_id: 1, pair: TechPair::new("A", "A"), covariates: vec![], target: 1.0 }];
        let spec = FeatureSpec::new(vec![1, 2], pairs(&["A"]), vec![], false).unwrap();
        assert!(matches!(
            fit_observations(&rows, &spec, Family::Bargaining, Target::Fairness),
            Err(RegressionError::TooFewRows { rows: 1, columns: 2 })
        ));
    }
}
