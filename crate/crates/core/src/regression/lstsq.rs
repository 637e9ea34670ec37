//! Least squares by Householder QR with column pivoting.

use crate::scalar::Scalar;

/// Relative tolerance for declaring a pivoted column dependent.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares<S> {
    pub coefficients: Vec<S>,
    pub residual_sum_squares: S,
}

/// Minimizes `‖X β − y‖₂` where `columns[j]` is column `j` of `X`.
///
/// Returns `Err(cols)` with the indices of columns that are (numerically)
/// linear combinations of earlier-pivoted ones.
pub fn least_squares<S: Scalar>(mut columns: Vec<Vec<S>>, mut y: Vec<S>) -> Result<LeastSquares<S>, Vec<usize>> {
    let p = columns.len();
    let n = y.len();
    debug_assert!(columns.iter().all(|c| c.len() == n));
    let mut perm: Vec<usize> = (0..p).collect();
    let norm_from = |c: &[S], k: usize| c[k..].iter().map(|&v| v * v).sum::<S>().sqrt();
    let largest = columns.iter().map(|c| norm_from(c, 0)).fold(S::zero(), S::max);
    let tol = S::lit(RANK_TOL) * largest.max(S::min_positive_value());
    let mut diag = vec![S::zero(); p];

    for k in 0..p.min(n) {
        let (best, best_norm) = (k..p)
            .map(|j| (j, norm_from(&columns[j], k)))
            .fold((k, S::neg_infinity()), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if best_norm <= tol {
            return Err(perm[k..].to_vec());
        }
        columns.swap(k, best);
        perm.swap(k, best);

        let head = columns[k][k];
        let alpha = if head >= S::zero() { -best_norm } else { best_norm };
        let mut v: Vec<S> = columns[k][k..].to_vec();
        v[0] = v[0] - alpha;
        let vnorm2: S = v.iter().map(|&x| x * x).sum();
        diag[k] = alpha;
        if vnorm2 > S::zero() {
            let reflect = |target: &mut [S]| {
                let dot: S = v.iter().zip(target.iter()).map(|(&a, &b)| a * b).sum();
                let scale = (dot + dot) / vnorm2;
                for (t, &vi) in target.iter_mut().zip(&v) {
                    *t = *t - scale * vi;
                }
            };
            for col in columns.iter_mut().skip(k + 1) {
                reflect(&mut col[k..]);
            }
            reflect(&mut y[k..]);
        }
        columns[k][k] = alpha;
        for value in columns[k][k + 1..].iter_mut() {
            *value = S::zero();
        }
    }
    if p > n {
        return Err(perm[n..].to_vec());
    }

    let mut beta_perm = vec![S::zero(); p];
    for k in (0..p).rev() {
        let tail: S = (k + 1..p).map(|j| columns[j][k] * beta_perm[j]).sum();
        beta_perm[k] = (y[k] - tail) / diag[k];
    }
    let mut coefficients = vec![S::zero(); p];
    for (k, &orig) in perm.iter().enumerate() {
        coefficients[orig] = beta_perm[k];
    }
    let residual_sum_squares = y[p..].iter().map(|&r| r * r).sum();
    Ok(LeastSquares { coefficients, residual_sum_squares })
}
