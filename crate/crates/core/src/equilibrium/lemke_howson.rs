//! Lemke-Howson complementary pivoting.
//!
//! Labels `0..m` are Alice's strategies and `m..m+n` Bob's. Two tableaux are
//! kept, one per best-response polytope:
//!
//! * `P = {x ≥ 0 : Bᵀx ≤ 1}` with variables `x_i` (label `i`) and slacks
//!   `s_j` (label `m+j`), initially basic in the slacks;
//! * `Q = {y ≥ 0 : Ay ≤ 1}` with slacks `r_i` (label `i`) and variables
//!   `y_j` (label `m+j`), initially basic in the slacks.
//!
//! Both payoff matrices are shifted to have minimum entry 1 so the polytopes
//! are bounded. Ties in the ratio test are broken lexicographically.

use std::cmp::Ordering;
use std::collections::HashSet;

use log::trace;

use super::game::{verify_equilibrium, BimatrixGame, MixedProfile};
use super::{DegeneracyKind, EquilibriumError};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

struct Tableau<S> {
    /// One row per basic variable; the last column is the right-hand side.
    rows: Matrix<S>,
    basis: Vec<usize>,
    /// Columns of the initial basis, in order, for lexicographic tie-breaking.
    lex_cols: Vec<usize>,
}

impl<S: Scalar> Tableau<S> {
    /// Rows `slack + Σ coeff·var = 1`. `coeff(row, var)` gives the entry for
    /// the non-slack variables in `vars`; `slacks[row]` is the slack label.
    fn build(labels: usize, slacks: Vec<usize>, vars: &[usize], coeff: impl Fn(usize, usize) -> S) -> Self {
        let height = slacks.len();
        let mut rows = Matrix::zeros(height, labels + 1);
        for (r, &slack) in slacks.iter().enumerate() {
            rows[(r, slack)] = S::one();
            for (k, &var) in vars.iter().enumerate() {
                rows[(r, var)] = coeff(r, k);
            }
            rows[(r, labels)] = S::one();
        }
        Self { rows, lex_cols: slacks.clone(), basis: slacks }
    }

    fn rhs_col(&self) -> usize {
        self.rows.cols() - 1
    }

    fn compare_rows(&self, r1: usize, r2: usize, entering: usize, tol: S) -> Ordering {
        let p1 = self.rows[(r1, entering)];
        let p2 = self.rows[(r2, entering)];
        let cols = std::iter::once(self.rhs_col()).chain(self.lex_cols.iter().copied());
        for c in cols {
            let a = self.rows[(r1, c)] / p1;
            let b = self.rows[(r2, c)] / p2;
            if (a - b).abs() > tol {
                return a.partial_cmp(&b).unwrap_or(Ordering::Equal);
            }
        }
        Ordering::Equal
    }

    /// Brings `entering` into the basis and returns the label that left.
    fn pivot(&mut self, entering: usize) -> Option<usize> {
        let eps = S::lit(S::PIVOT_EPS);
        let tol = S::lit(S::PIVOT_EPS * 1e3);
        let candidates = (0..self.rows.rows()).filter(|&r| self.rows[(r, entering)] > eps);
        let row = candidates.min_by(|&a, &b| self.compare_rows(a, b, entering, tol))?;

        let width = self.rows.cols();
        let pivot = self.rows[(row, entering)];
        for c in 0..width {
            self.rows[(row, c)] = self.rows[(row, c)] / pivot;
        }
        for r in 0..self.rows.rows() {
            if r == row {
                continue;
            }
            let factor = self.rows[(r, entering)];
            if factor == S::zero() {
                continue;
            }
            for c in 0..width {
                let v = self.rows[(row, c)];
                self.rows[(r, c)] = self.rows[(r, c)] - factor * v;
            }
            self.rows[(r, entering)] = S::zero();
        }
        Some(std::mem::replace(&mut self.basis[row], entering))
    }

    fn basic_values(&self, labels: std::ops::Range<usize>) -> Vec<S> {
        let offset = labels.start;
        let mut out = vec![S::zero(); labels.len()];
        for (r, &label) in self.basis.iter().enumerate() {
            if labels.contains(&label) {
                out[label - offset] = self.rows[(r, self.rhs_col())];
            }
        }
        out
    }

    fn dump(&self, name: &str) {
        if log::log_enabled!(log::Level::Trace) {
            trace!("{name} basis {:?}", self.basis);
            for r in 0..self.rows.rows() {
                trace!("{name}  {:?}", self.rows.row(r));
            }
        }
    }
}

/// Pivot allowance `10·4^N`, saturating.
fn default_budget(n: usize) -> usize {
    u32::try_from(n)
        .ok()
        .and_then(|n| 4usize.checked_pow(n))
        .and_then(|p| p.checked_mul(10))
        .unwrap_or(usize::MAX)
}

/// One equilibrium reached by dropping `initial_label` from the artificial
/// equilibrium.
pub fn lemke_howson<S: Scalar>(
    game: &BimatrixGame<S>,
    initial_label: usize,
) -> Result<MixedProfile<S>, EquilibriumError> {
    lemke_howson_with(game, initial_label, None)
}

/// As [`lemke_howson`] with an explicit pivot budget.
pub fn lemke_howson_with<S: Scalar>(
    game: &BimatrixGame<S>,
    initial_label: usize,
    pivot_budget: Option<usize>,
) -> Result<MixedProfile<S>, EquilibriumError> {
    let (m, n) = game.shape();
    let labels = m + n;
    if initial_label >= labels {
        return Err(EquilibriumError::InvalidLabel { label: initial_label, labels });
    }
    let budget = pivot_budget.unwrap_or_else(|| default_budget(m.max(n)));

    let positive = |mat: &Matrix<S>| {
        let shift = S::one() - mat.min_entry().unwrap_or(S::zero());
        mat.map(|v| v + shift)
    };
    let a = positive(game.payoff_a());
    let b = positive(game.payoff_b());

    let bob_vars: Vec<usize> = (m..labels).collect();
    let alice_vars: Vec<usize> = (0..m).collect();
    // P: one row per Bob strategy j, entries B[i][j] on x_i.
    let mut p = Tableau::build(labels, bob_vars.clone(), &alice_vars, |j, i| b[(i, j)]);
    // Q: one row per Alice strategy i, entries A[i][j] on y_j.
    let mut q = Tableau::build(labels, alice_vars, &bob_vars, |i, j| a[(i, j)]);

    let degenerate = |kind, pivots| EquilibriumError::DegeneracyFailure { label: initial_label, kind, pivots };

    let mut in_p = initial_label < m;
    let mut entering = initial_label;
    let mut seen = HashSet::new();
    let mut pivots = 0usize;
    loop {
        if pivots >= budget {
            return Err(degenerate(DegeneracyKind::PivotBudget, pivots));
        }
        let tableau = if in_p { &mut p } else { &mut q };
        let leaving = tableau.pivot(entering).ok_or_else(|| degenerate(DegeneracyKind::NoPivot, pivots))?;
        pivots += 1;
        trace!("pivot {pivots} in {}: {entering} in, {leaving} out", if in_p { "P" } else { "Q" });
        tableau.dump(if in_p { "P" } else { "Q" });
        if leaving == initial_label {
            break;
        }
        let mut state: Vec<usize> = p.basis.clone();
        state.sort_unstable();
        let mut q_basis = q.basis.clone();
        q_basis.sort_unstable();
        state.push(usize::MAX);
        state.extend(q_basis);
        state.push(usize::from(in_p));
        if !seen.insert(state) {
            return Err(degenerate(DegeneracyKind::Cycle, pivots));
        }
        entering = leaving;
        in_p = !in_p;
    }

    let x = p.basic_values(0..m);
    let y = q.basic_values(m..labels);
    let profile = MixedProfile::normalized(x, y)
        .map_err(|_| degenerate(DegeneracyKind::NoPivot, pivots))?;
    let report = verify_equilibrium(game, &profile, S::lit(S::VERIFY_TOL))?;
    if !report.is_equilibrium {
        return Err(EquilibriumError::VerificationFailed {
            label: initial_label,
            regret: report.max_regret().as_f64(),
        });
    }
    Ok(profile)
}
