use log::debug;

use super::game::{verify_equilibrium, BimatrixGame, MixedProfile};
use super::lemke_howson::lemke_howson_with;
use super::support::support_enumeration_unguarded;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Overrides the `10·4^N` pivot allowance.
    pub pivot_budget: Option<usize>,
    /// Skip the perturbation retry for failed labels.
    pub disable_perturbation: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { pivot_budget: None, disable_perturbation: false }
    }
}

/// Which stage produced the equilibria.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolvePath {
    Pivoting,
    /// At least one profile came from a perturbed re-solve.
    Perturbed,
    SupportEnumeration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Enumeration<S> {
    pub equilibria: Vec<MixedProfile<S>>,
    pub path: SolvePath,
    pub failed_labels: Vec<usize>,
}

/// Deduplicated equilibria reached from every starting label.
pub fn enumerate_equilibria<S: Scalar>(game: &BimatrixGame<S>) -> Vec<MixedProfile<S>> {
    enumerate_equilibria_with(game, &SolverOptions::default()).equilibria
}

pub fn enumerate_equilibria_with<S: Scalar>(game: &BimatrixGame<S>, options: &SolverOptions) -> Enumeration<S> {
    let dedup = S::lit(S::DEDUP_TOL);
    let tol = S::lit(S::VERIFY_TOL);
    let mut equilibria: Vec<MixedProfile<S>> = Vec::new();
    let mut failed_labels = Vec::new();
    let mut perturbed_used = false;
    let mut perturbed_game = None;

    let push = |list: &mut Vec<MixedProfile<S>>, p: MixedProfile<S>| {
        if !list.iter().any(|q| q.distance(&p) < dedup) {
            list.push(p);
        }
    };

    for label in 0..game.label_count() {
        match lemke_howson_with(game, label, options.pivot_budget) {
            Ok(p) => push(&mut equilibria, p),
            Err(err) => {
                debug!("label {label}: {err}");
                failed_labels.push(label);
                if options.disable_perturbation {
                    continue;
                }
                let perturbed = perturbed_game.get_or_insert_with(|| perturb(game));
                if let Ok(p) = lemke_howson_with(perturbed, label, options.pivot_budget) {
                    if verify_equilibrium(game, &p, tol).is_ok_and(|r| r.is_equilibrium) {
                        perturbed_used = true;
                        push(&mut equilibria, p);
                    }
                }
            }
        }
    }

    if equilibria.is_empty() {
        debug!("all pivoting starts failed; falling back to support enumeration");
        return Enumeration {
            equilibria: support_enumeration_unguarded(game),
            path: SolvePath::SupportEnumeration,
            failed_labels,
        };
    }
    let path = if perturbed_used { SolvePath::Perturbed } else { SolvePath::Pivoting };
    Enumeration { equilibria, path, failed_labels }
}

/// Adds `1e-9·(1 + flat index)` to every payoff entry.
fn perturb<S: Scalar>(game: &BimatrixGame<S>) -> BimatrixGame<S> {
    let (m, n) = game.shape();
    let bump = |mat: &Matrix<S>| {
        Matrix::from_fn(m, n, |i, j| mat[(i, j)] + S::lit(1e-9 * (1 + i * n + j) as f64))
    };
    BimatrixGame::new(bump(game.payoff_a()), bump(game.payoff_b())).expect("perturbation keeps game valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::support_enumeration;

    fn game(a: &[Vec<f64>], b: &[Vec<f64>]) -> BimatrixGame {
        BimatrixGame::from_rows(a, b).unwrap()
    }

    #[test]
    fn prisoners_dilemma_has_one_equilibrium() {
        let g = game(&[vec![3.0, 0.0], vec![5.0, 1.0]], &[vec![3.0, 5.0], vec![0.0, 1.0]]);
        let eqs = enumerate_equilibria(&g);
        assert_eq!(eqs.len(), 1);
        assert_eq!(eqs[0].as_pure(), Some((1, 1)));
    }

    #[test]
    fn coordination_results_are_oracle_equilibria() {
        let coord = vec![vec![2.0, 0.0], vec![0.0, 1.0]];
        let g = game(&coord, &coord);
        let oracle = support_enumeration(&g).unwrap();
        assert_eq!(oracle.len(), 3);
        let eqs = enumerate_equilibria(&g);
        assert!(!eqs.is_empty());
        for p in &eqs {
            assert!(oracle.iter().any(|o| o.distance(p) < 1e-9));
            assert!(verify_equilibrium(&g, p, 1e-8).unwrap().is_equilibrium);
        }
    }

    #[test]
    fn constant_game_fallback_path() {
        let flat = vec![vec![2.0; 3]; 3];
        let g = game(&flat, &flat);
        assert!(!enumerate_equilibria(&g).is_empty());

        let forced = enumerate_equilibria_with(
            &g,
            &SolverOptions { pivot_budget: Some(0), disable_perturbation: false },
        );
        assert_eq!(forced.path, SolvePath::SupportEnumeration);
        assert_eq!(forced.failed_labels.len(), 6);
        assert!(!forced.equilibria.is_empty());
        for p in &forced.equilibria {
            assert!(verify_equilibrium(&g, p, 1e-8).unwrap().is_equilibrium);
        }
    }

    #[test]
    fn duplicate_strategies_are_handled() {
        // Row 2 duplicates row 0 for both players.
        let a = vec![vec![3.0, 1.0], vec![0.0, 2.0], vec![3.0, 1.0]];
        let b = vec![vec![2.0, 0.0], vec![1.0, 3.0], vec![2.0, 0.0]];
        let g = game(&a, &b);
        let eqs = enumerate_equilibria(&g);
        assert!(!eqs.is_empty());
        for p in &eqs {
            assert!(verify_equilibrium(&g, p, 1e-8).unwrap().is_equilibrium);
        }
    }
}
