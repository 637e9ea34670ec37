use std::fmt;

use serde::{Deserialize, Serialize};

use crate::econ::Family;
use crate::engine::{Flags, Objective};

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959964;

/// Wilson score interval for `k` successes in `n` trials at 95%.
/// With no trials the interval is the whole of `[0, 1]`.
pub fn wilson_interval(k: u64, n: u64) -> (f64, f64) {
    assert!(k <= n, "successes {k} exceed trials {n}");
    if n == 0 {
        return (0.0, 1.0);
    }
    let (k, n) = (k as f64, n as f64);
    let p = k / n;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z_95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Tallies for one group of experiments. Conditional counts keep their own
/// denominators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Counts {
    pub experiments: u64,
    pub opposite_change: u64,
    pub poisoned_apple: u64,
    pub objective_improved: u64,
    pub adopted_given_improved: u64,
    pub objective_decreased: u64,
    pub unadopted_given_decreased: u64,
    pub inertia_harm: u64,
    /// Experiments where the expanded choice is worse than staying put.
    pub optimality_violations: u64,
}

impl Counts {
    pub fn record(&mut self, flags: &Flags, optimality_violated: bool) {
        let b = |x: bool| u64::from(x);
        self.experiments += 1;
        self.opposite_change += b(flags.opposite_change);
        self.poisoned_apple += b(flags.poisoned_apple);
        self.objective_improved += b(flags.objective_improved);
        self.adopted_given_improved += b(flags.objective_improved && flags.new_tech_adopted);
        self.objective_decreased += b(flags.objective_decreased);
        self.unadopted_given_decreased += b(flags.objective_decreased && !flags.new_tech_adopted);
        self.inertia_harm += b(flags.inertia_harm);
        self.optimality_violations += b(optimality_violated);
    }

    pub fn merge(&mut self, other: &Counts) {
        self.experiments += other.experiments;
        self.opposite_change += other.opposite_change;
        self.poisoned_apple += other.poisoned_apple;
        self.objective_improved += other.objective_improved;
        self.adopted_given_improved += other.adopted_given_improved;
        self.objective_decreased += other.objective_decreased;
        self.unadopted_given_decreased += other.unadopted_given_decreased;
        self.inertia_harm += other.inertia_harm;
        self.optimality_violations += other.optimality_violations;
    }

    /// `(successes, trials)` behind a panel.
    pub fn panel(&self, panel: Panel) -> (u64, u64) {
        match panel {
            Panel::A => (self.opposite_change, self.experiments),
            Panel::B => (self.poisoned_apple, self.opposite_change),
            Panel::C => (self.objective_improved, self.experiments),
            Panel::D => (self.adopted_given_improved, self.objective_improved),
            Panel::E => (self.unadopted_given_decreased, self.objective_decreased),
            Panel::F => (self.inertia_harm, self.experiments),
        }
    }
}

/// The six reported frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Panel {
    /// Opposite payoff changes.
    A,
    /// Poisoned apples among opposite changes.
    B,
    /// Objective improved.
    C,
    /// New technology adopted given improvement.
    D,
    /// New technology unused given a decrease.
    E,
    /// Harm from keeping the old market.
    F,
}

impl Panel {
    pub const ALL: [Panel; 6] = [Panel::A, Panel::B, Panel::C, Panel::D, Panel::E, Panel::F];
}

impl fmt::Display for Panel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellStats {
    pub family: Family,
    pub objective: Objective,
    pub subset_size: usize,
    pub counts: Counts,
}

/// One bar of a frequency plot. `frequency` is `None` when the denominator
/// is zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanelRow {
    pub panel: Panel,
    pub family: Family,
    pub objective: Objective,
    pub successes: u64,
    pub n: u64,
    pub frequency: Option<f64>,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

impl PanelRow {
    pub fn new(panel: Panel, family: Family, objective: Objective, counts: &Counts) -> Self {
        let (successes, n) = counts.panel(panel);
        let (ci_lo, ci_hi) = wilson_interval(successes, n);
        let frequency = (n > 0).then(|| successes as f64 / n as f64);
        Self { panel, family, objective, successes, n, frequency, ci_lo, ci_hi }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SweepStats {
    /// Per (family, objective, subset size), sorted.
    pub cells: Vec<CellStats>,
    /// Per (family, objective) and panel, pooled over subset sizes.
    pub panels: Vec<PanelRow>,
    pub totals: Counts,
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Closed form evaluated independently: centre ± half-width.
    fn oracle(k: f64, n: f64) -> (f64, f64) {
        let z = 1.959964_f64;
        let p = k / n;
        let a = 2.0 * n * p + z * z;
        let b = z * (z * z + 4.0 * n * p * (1.0 - p)).sqrt();
        let c = 2.0 * (n + z * z);
        ((a - b) / c, (a + b) / c)
    }

    #[test]
    fn known_values() {
        assert_eq!(wilson_interval(0, 0), (0.0, 1.0));
        let (lo, hi) = wilson_interval(50, 100);
        let (olo, ohi) = oracle(50.0, 100.0);
        assert!((lo - olo).abs() < 1e-12 && (hi - ohi).abs() < 1e-12);
        assert!((lo - 0.404).abs() < 1e-3 && (hi - 0.596).abs() < 1e-3);
        let (lo, hi) = wilson_interval(100, 100);
        assert!(lo > 0.96 && hi == 1.0);
    }

    #[test]
    fn undefined_panel_row() {
        let row = PanelRow::new(Panel::D, Family::Persuasion, Objective::Efficiency, &Counts::default());
        assert_eq!(row.frequency, None);
        assert_eq!((row.ci_lo, row.ci_hi), (0.0, 1.0));
    }

    #[test]
    fn width_shrinks_like_inverse_root() {
        let widths: Vec<f64> = [10u64, 1000, 100_000]
            .iter()
            .map(|&n| {
                let (lo, hi) = wilson_interval(n * 3 / 10, n);
                hi - lo
            })
            .collect();
        for w in widths.windows(2) {
            let ratio = w[0] / w[1];
            assert!(ratio > 7.0 && ratio < 13.0, "{ratio}");
        }
    }
}
