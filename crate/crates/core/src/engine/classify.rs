use serde::{Deserialize, Serialize};

pub const EPS_PAY: f64 = 1e-6;
pub const EPS_ADOPT: f64 = 1e-6;

/// How the added technology's adoption is read off several equilibria.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AdoptionMode {
    /// Mass averaged over equilibria.
    #[default]
    Averaged,
    /// Largest mass in any single equilibrium.
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    pub eps_pay: f64,
    pub eps_adopt: f64,
    pub adoption_mode: AdoptionMode,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self { eps_pay: EPS_PAY, eps_adopt: EPS_ADOPT, adoption_mode: AdoptionMode::Averaged }
    }
}

/// The numbers the flags depend on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifyInput {
    pub delta_a: f64,
    pub delta_b: f64,
    /// Adoption mass of the added technology at the expanded market.
    pub adoption: f64,
    pub baseline_objective: f64,
    pub expanded_objective: f64,
    pub inertia_objective: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Flags {
    pub opposite_change: bool,
    pub new_tech_adopted: bool,
    pub poisoned_apple: bool,
    pub objective_improved: bool,
    pub objective_decreased: bool,
    pub inertia_harm: bool,
}

pub fn classify(input: &ClassifyInput, opts: &ClassifyOptions) -> Flags {
    let eps = opts.eps_pay;
    let opposite_change = input.delta_a * input.delta_b < 0.0
        && input.delta_a.abs() > eps
        && input.delta_b.abs() > eps;
    let new_tech_adopted = input.adoption > opts.eps_adopt;
    Flags {
        opposite_change,
        new_tech_adopted,
        poisoned_apple: opposite_change && !new_tech_adopted,
        objective_improved: input.expanded_objective > input.baseline_objective + eps,
        objective_decreased: input.expanded_objective < input.baseline_objective - eps,
        inertia_harm: input.inertia_objective < input.baseline_objective - eps,
    }
}
