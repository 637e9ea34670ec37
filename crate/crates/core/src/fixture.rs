//! A bargaining coefficient bundle that replays the poisoned-apple example:
//! with technologies A–D the fairness-maximizing market is 4, releasing E
//! moves the regulator to market 8 and E is never played there.

use crate::econ::{enumerate_markets, Family};
use crate::matrix::Matrix;
use crate::regression::{bundle_from_tables, CoefficientBundle, PayoffTables};

pub const FIXTURE_TECHS: [&str; 5] = ["A", "B", "C", "D", "E"];
const E: usize = 4;

/// Per market: equilibrium before E, fairness before, equilibrium and
/// fairness once E is available, and the pre-release payoffs.
struct MarketPlan {
    pre: (usize, usize),
    post: (usize, usize),
    fairness: (f64, f64),
    payoffs: (f64, f64),
    /// Payoffs at the post-release cell when it differs from `pre`.
    post_payoffs: (f64, f64),
}

fn plan(market_id: u32) -> MarketPlan {
    let m = f64::from(market_id);
    let default = (0.40 + 0.01 * m, 0.50 - 0.01 * m);
    let p = |pre, post, fairness, payoffs, post_payoffs| MarketPlan { pre, post, fairness, payoffs, post_payoffs };
    match market_id {
        1 => p((1, 2), (1, 2), (0.975, 0.975), default, default),
        2 => p((2, 3), (2, 3), (0.965, 0.965), default, default),
        3 => p((0, 2), (E, 2), (0.989, 0.988), default, (default.0 + 0.02, default.1 - 0.03)),
        4 => p((3, 0), (E, 0), (1.000, 0.976), (0.49, 0.50), (0.51, 0.40)),
        5 => p((1, 0), (1, E), (0.977, 0.967), default, (default.0 - 0.03, default.1 + 0.02)),
        6 => p((3, 3), (3, 3), (0.962, 0.962), default, default),
        7 => p((2, 1), (E, 1), (0.974, 0.959), default, (default.0 + 0.02, default.1 - 0.03)),
        8 => p((0, 1), (0, 1), (0.990, 0.990), (0.52, 0.46), (0.52, 0.46)),
        _ => unreachable!("bargaining has eight markets"),
    }
}

/// The four tables of one market over A–E.
///
/// Payoffs are separable, `U_A[i][j] = r_a(i) + c_a(j)` and
/// `U_B[i][j] = r_b(j) + c_b(i)`, so each player has a strictly dominant
/// technology and every sub-game has a unique pure equilibrium.
pub fn fixture_tables(market_id: u32) -> PayoffTables {
    let plan = plan(market_id);
    let n = FIXTURE_TECHS.len();
    let (ra_star, cb_star) = plan.pre;
    let (pa, pb) = plan.payoffs;

    let mut ra: Vec<f64> = (0..n).map(|i| pa - 0.05 - 0.01 * i as f64).collect();
    let mut ca: Vec<f64> = (0..n).map(|j| 0.002 * j as f64).collect();
    let mut rb: Vec<f64> = (0..n).map(|j| pb - 0.05 - 0.01 * j as f64).collect();
    let mut cb: Vec<f64> = (0..n).map(|i| 0.002 * i as f64).collect();
    ra[ra_star] = pa;
    rb[cb_star] = pb;
    ca[cb_star] = 0.0;
    cb[ra_star] = 0.0;
    ra[E] = pa - 0.2;
    rb[E] = pb - 0.2;
    if plan.post.0 == E {
        ra[E] = plan.post_payoffs.0;
        cb[E] = plan.post_payoffs.1 - pb;
    }
    if plan.post.1 == E {
        rb[E] = plan.post_payoffs.1;
        ca[E] = plan.post_payoffs.0 - pa;
    }

    let u_a = Matrix::from_fn(n, n, |i, j| ra[i] + ca[j]);
    let u_b = Matrix::from_fn(n, n, |i, j| rb[j] + cb[i]);
    let d_f = Matrix::from_fn(n, n, |i, j| {
        if (i, j) == plan.pre {
            plan.fairness.0
        } else if (i, j) == plan.post {
            plan.fairness.1
        } else {
            0.90 + 0.005 * ((i + 2 * j) % 5) as f64
        }
    });
    let d_e = Matrix::from_fn(n, n, |i, j| 0.60 + 0.03 * ((market_id as usize * 7 + 3 * i + 5 * j) % 11) as f64);
    PayoffTables {
        market: Family::Bargaining.market(market_id).expect("bargaining market"),
        techs: FIXTURE_TECHS.iter().map(|s| s.to_string()).collect(),
        u_a,
        u_b,
        d_f,
        d_e,
    }
}

pub fn poisoned_apple_bundle() -> CoefficientBundle {
    let tables: Vec<PayoffTables> =
        enumerate_markets(Family::Bargaining).iter().map(|m| fixture_tables(m.market_id)).collect();
    bundle_from_tables(&tables).expect("fixture tables are consistent")
}

pub fn fixture_techs(with_e: bool) -> Vec<String> {
    let n = if with_e { 5 } else { 4 };
    FIXTURE_TECHS[..n].iter().map(|s| s.to_string()).collect()
}
