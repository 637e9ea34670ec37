use super::game::{verify_equilibrium, BimatrixGame, MixedProfile};
use super::EquilibriumError;
use crate::matrix::{solve_linear, Matrix};
use crate::scalar::Scalar;

/// Largest strategy count accepted by [`support_enumeration`].
pub const SUPPORT_ENUMERATION_MAX: usize = 8;

/// Every equilibrium whose two supports have equal size, found by solving the
/// indifference conditions on each support pair.
pub fn support_enumeration<S: Scalar>(game: &BimatrixGame<S>) -> Result<Vec<MixedProfile<S>>, EquilibriumError> {
    let (m, n) = game.shape();
    let size = m.max(n);
    if size > SUPPORT_ENUMERATION_MAX {
        return Err(EquilibriumError::SupportGuard { n: size, max: SUPPORT_ENUMERATION_MAX });
    }
    Ok(support_enumeration_unguarded(game))
}

pub(crate) fn support_enumeration_unguarded<S: Scalar>(game: &BimatrixGame<S>) -> Vec<MixedProfile<S>> {
    let (m, n) = game.shape();
    let a = game.payoff_a();
    let bt = game.payoff_b().transpose();
    let tol = S::lit(S::VERIFY_TOL);
    let dedup = S::lit(S::DEDUP_TOL);
    let mut found: Vec<MixedProfile<S>> = Vec::new();

    for k in 1..=m.min(n) {
        let row_sets = combinations(m, k);
        let col_sets = combinations(n, k);
        for rows in &row_sets {
            for cols in &col_sets {
                // Bob's mix on `cols` must make Alice indifferent over `rows`.
                let Some(y) = indifferent_mix(a, rows, cols, tol) else { continue };
                // Alice's mix on `rows` must make Bob indifferent over `cols`.
                let Some(x) = indifferent_mix(&bt, cols, rows, tol) else { continue };
                let Ok(profile) = MixedProfile::normalized(spread(m, rows, &x), spread(n, cols, &y)) else {
                    continue;
                };
                match verify_equilibrium(game, &profile, tol) {
                    Ok(r) if r.is_equilibrium => {}
                    _ => continue,
                }
                if !found.iter().any(|p| p.distance(&profile) < dedup) {
                    found.push(profile);
                }
            }
        }
    }
    found
}

/// Solves `Σ_j payoff[i][j]·w_j = v (i ∈ rows)`, `Σ w_j = 1` over `cols` and
/// checks `w ≥ 0` plus that no row outside the support beats `v`.
fn indifferent_mix<S: Scalar>(payoff: &Matrix<S>, rows: &[usize], cols: &[usize], tol: S) -> Option<Vec<S>> {
    let k = cols.len();
    let mut system = Matrix::zeros(k + 1, k + 1);
    let mut rhs = vec![S::zero(); k + 1];
    for (r, &i) in rows.iter().enumerate() {
        for (c, &j) in cols.iter().enumerate() {
            system[(r, c)] = payoff[(i, j)];
        }
        system[(r, k)] = -S::one();
    }
    for c in 0..k {
        system[(k, c)] = S::one();
    }
    rhs[k] = S::one();
    let sol = solve_linear(&system, &rhs)?;
    let (w, value) = (&sol[..k], sol[k]);
    if w.iter().any(|&p| p < -tol) {
        return None;
    }
    for i in 0..payoff.rows() {
        let payoff_i: S = cols.iter().zip(w).map(|(&j, &p)| payoff[(i, j)] * p).sum();
        if payoff_i > value + tol {
            return None;
        }
    }
    Some(w.to_vec())
}

fn spread<S: Scalar>(len: usize, support: &[usize], values: &[S]) -> Vec<S> {
    let mut out = vec![S::zero(); len];
    for (&i, &v) in support.iter().zip(values) {
        out[i] = v;
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            if n - i < k - current.len() {
                break;
            }
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}
