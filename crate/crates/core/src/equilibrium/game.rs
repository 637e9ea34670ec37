use serde::{Deserialize, Serialize};

use super::EquilibriumError;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Two-player normal-form game; Alice picks rows, Bob picks columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct BimatrixGame<S = f64> {
    payoff_a: Matrix<S>,
    payoff_b: Matrix<S>,
}

impl<S: Scalar> BimatrixGame<S> {
    pub fn new(payoff_a: Matrix<S>, payoff_b: Matrix<S>) -> Result<Self, EquilibriumError> {
        if payoff_a.rows() == 0 || payoff_a.cols() == 0 {
            return Err(EquilibriumError::InvalidGame("empty payoff matrix".into()));
        }
        if payoff_a.rows() != payoff_b.rows() || payoff_a.cols() != payoff_b.cols() {
            return Err(EquilibriumError::InvalidGame(format!(
                "{}x{} vs {}x{}",
                payoff_a.rows(),
                payoff_a.cols(),
                payoff_b.rows(),
                payoff_b.cols()
            )));
        }
        if !payoff_a.all_finite() || !payoff_b.all_finite() {
            return Err(EquilibriumError::InvalidGame("non-finite payoff entry".into()));
        }
        Ok(Self { payoff_a, payoff_b })
    }

    pub fn from_rows(a: &[Vec<S>], b: &[Vec<S>]) -> Result<Self, EquilibriumError> {
        let ragged = || EquilibriumError::InvalidGame("ragged rows".into());
        Self::new(Matrix::from_rows(a).ok_or_else(ragged)?, Matrix::from_rows(b).ok_or_else(ragged)?)
    }

    pub fn payoff_a(&self) -> &Matrix<S> {
        &self.payoff_a
    }

    pub fn payoff_b(&self) -> &Matrix<S> {
        &self.payoff_b
    }

    /// `(rows, cols)` = strategies of (Alice, Bob).
    pub fn shape(&self) -> (usize, usize) {
        (self.payoff_a.rows(), self.payoff_a.cols())
    }

    pub fn label_count(&self) -> usize {
        self.payoff_a.rows() + self.payoff_a.cols()
    }

    /// Adds constants to each player's payoffs.
    pub fn shifted(&self, shift_a: S, shift_b: S) -> Self {
        Self { payoff_a: self.payoff_a.map(|v| v + shift_a), payoff_b: self.payoff_b.map(|v| v + shift_b) }
    }
}

/// A pair of probability vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct MixedProfile<S = f64> {
    pub sigma_a: Vec<S>,
    pub sigma_b: Vec<S>,
}

impl<S: Scalar> MixedProfile<S> {
    /// Validates both vectors: tiny negative entries are clamped to zero and
    /// each vector must sum to one.
    pub fn new(sigma_a: Vec<S>, sigma_b: Vec<S>) -> Result<Self, EquilibriumError> {
        Ok(Self { sigma_a: checked_distribution(sigma_a)?, sigma_b: checked_distribution(sigma_b)? })
    }

    /// Clamps small negatives and rescales each vector to sum to one.
    pub fn normalized(sigma_a: Vec<S>, sigma_b: Vec<S>) -> Result<Self, EquilibriumError> {
        Self::new(rescale(sigma_a)?, rescale(sigma_b)?)
    }

    pub fn pure(rows: usize, cols: usize, row: usize, col: usize) -> Self {
        let unit = |n: usize, k: usize| (0..n).map(|i| if i == k { S::one() } else { S::zero() }).collect();
        Self { sigma_a: unit(rows, row), sigma_b: unit(cols, col) }
    }

    /// Max-norm distance over both players' vectors.
    pub fn distance(&self, other: &Self) -> S {
        self.sigma_a
            .iter()
            .zip(&other.sigma_a)
            .chain(self.sigma_b.iter().zip(&other.sigma_b))
            .fold(S::zero(), |acc, (&x, &y)| acc.max((x - y).abs()))
    }

    /// Pure strategy indices when the profile is (numerically) pure.
    pub fn as_pure(&self) -> Option<(usize, usize)> {
        let pick = |v: &[S]| v.iter().position(|&p| p > S::one() - S::lit(S::SUM_TOL));
        Some((pick(&self.sigma_a)?, pick(&self.sigma_b)?))
    }
}

fn rescale<S: Scalar>(mut v: Vec<S>) -> Result<Vec<S>, EquilibriumError> {
    for p in v.iter_mut() {
        if *p < S::zero() && *p >= -S::lit(S::PIVOT_EPS) {
            *p = S::zero();
        }
    }
    let total: S = v.iter().copied().sum();
    if !(total > S::zero()) || !total.is_finite() {
        return Err(EquilibriumError::InvalidProfile(format!("vector sums to {total}")));
    }
    Ok(v.into_iter().map(|p| p / total).collect())
}

fn checked_distribution<S: Scalar>(mut v: Vec<S>) -> Result<Vec<S>, EquilibriumError> {
    let clamp = S::lit(S::PIVOT_EPS);
    for p in v.iter_mut() {
        if !p.is_finite() || *p < -clamp {
            return Err(EquilibriumError::InvalidProfile(format!("entry {p}")));
        }
        if *p < S::zero() {
            *p = S::zero();
        }
    }
    let total: S = v.iter().copied().sum();
    if (total - S::one()).abs() > S::lit(S::SUM_TOL) {
        return Err(EquilibriumError::InvalidProfile(format!("vector sums to {total}")));
    }
    Ok(v)
}

/// Outcome of the best-response check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyReport<S = f64> {
    pub is_equilibrium: bool,
    pub regret_a: S,
    pub regret_b: S,
}

impl<S: Scalar> VerifyReport<S> {
    pub fn max_regret(&self) -> S {
        self.regret_a.max(self.regret_b)
    }
}

/// Checks that no pure deviation gains either player more than `tol`.
pub fn verify_equilibrium<S: Scalar>(
    game: &BimatrixGame<S>,
    profile: &MixedProfile<S>,
    tol: S,
) -> Result<VerifyReport<S>, EquilibriumError> {
    check_dims(game, profile)?;
    let row_payoffs = game.payoff_a.mul_vec(&profile.sigma_b);
    let col_payoffs = game.payoff_b.vec_mul(&profile.sigma_a);
    let value_a = dot(&profile.sigma_a, &row_payoffs);
    let value_b = dot(&col_payoffs, &profile.sigma_b);
    let best = |v: &[S]| v.iter().copied().fold(S::neg_infinity(), S::max);
    let regret_a = (best(&row_payoffs) - value_a).max(S::zero());
    let regret_b = (best(&col_payoffs) - value_b).max(S::zero());
    Ok(VerifyReport { is_equilibrium: regret_a <= tol && regret_b <= tol, regret_a, regret_b })
}

/// Bilinear value `σ_Aᵀ · M · σ_B`.
pub fn expected_value<S: Scalar>(profile: &MixedProfile<S>, matrix: &Matrix<S>) -> Result<S, EquilibriumError> {
    if matrix.rows() != profile.sigma_a.len() || matrix.cols() != profile.sigma_b.len() {
        return Err(EquilibriumError::DimensionMismatch {
            expected: (matrix.rows(), matrix.cols()),
            got: (profile.sigma_a.len(), profile.sigma_b.len()),
        });
    }
    Ok(dot(&profile.sigma_a, &matrix.mul_vec(&profile.sigma_b)))
}

fn check_dims<S: Scalar>(game: &BimatrixGame<S>, profile: &MixedProfile<S>) -> Result<(), EquilibriumError> {
    let expected = game.shape();
    let got = (profile.sigma_a.len(), profile.sigma_b.len());
    if expected != got {
        return Err(EquilibriumError::DimensionMismatch { expected, got });
    }
    Ok(())
}

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prisoners_dilemma() -> BimatrixGame {
        let a = vec![vec![3.0, 0.0], vec![5.0, 1.0]];
        let b = vec![vec![3.0, 5.0], vec![0.0, 1.0]];
        BimatrixGame::from_rows(&a, &b).unwrap()
    }

    #[test]
    fn verify_prisoners_dilemma() {
        let g = prisoners_dilemma();
        let dd = verify_equilibrium(&g, &MixedProfile::pure(2, 2, 1, 1), 1e-8).unwrap();
        assert!(dd.is_equilibrium);
        assert_eq!((dd.regret_a, dd.regret_b), (0.0, 0.0));
        let cc = verify_equilibrium(&g, &MixedProfile::pure(2, 2, 0, 0), 1e-8).unwrap();
        assert!(!cc.is_equilibrium);
        assert_eq!((cc.regret_a, cc.regret_b), (2.0, 2.0));
    }

    #[test]
    fn constant_game_accepts_any_profile() {
        let ones = vec![vec![1.0; 3]; 3];
        let g = BimatrixGame::from_rows(&ones, &ones).unwrap();
        let p = MixedProfile::new(vec![0.2, 0.3, 0.5], vec![1.0, 0.0, 0.0]).unwrap();
        assert!(verify_equilibrium(&g, &p, 1e-8).unwrap().is_equilibrium);
    }

    #[test]
    fn expected_value_examples() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(expected_value(&MixedProfile::pure(2, 2, 0, 1), &m).unwrap(), 2.0);
        let ones = Matrix::filled(2, 2, 1.0);
        let uniform = MixedProfile::new(vec![0.5, 0.5], vec![0.5, 0.5]).unwrap();
        assert_eq!(expected_value(&uniform, &ones).unwrap(), 1.0);
        let coord: Matrix<f64> = Matrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let mixed = MixedProfile::new(vec![1.0 / 3.0, 2.0 / 3.0], vec![1.0 / 3.0, 2.0 / 3.0]).unwrap();
        assert!((expected_value(&mixed, &coord).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn profile_validation() {
        let p = MixedProfile::new(vec![-1e-13, 1.0], vec![1.0]).unwrap();
        assert_eq!(p.sigma_a[0], 0.0);
        assert!(MixedProfile::new(vec![-1e-3, 1.001], vec![1.0]).is_err());
        assert!(MixedProfile::new(vec![0.5, 0.6], vec![1.0]).is_err());
        let n = MixedProfile::normalized(vec![2.0, 6.0], vec![1.0, 1.0]).unwrap();
        assert_eq!(n.sigma_a, vec![0.25, 0.75]);
    }

    #[test]
    fn rejects_mismatched_dimensions() {
        let g = prisoners_dilemma();
        let p = MixedProfile::pure(3, 2, 0, 0);
        assert!(matches!(verify_equilibrium(&g, &p, 1e-8), Err(EquilibriumError::DimensionMismatch { .. })));
        assert!(BimatrixGame::from_rows(&[vec![1.0]], &[vec![1.0, 2.0]]).is_err());
        assert!(BimatrixGame::from_rows(&[vec![f64::NAN]], &[vec![1.0]]).is_err());
    }
}
