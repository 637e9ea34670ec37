//! TOML config file: an optional top-level `seed` and one table per
//! subcommand. Command-line flags override every key.

use std::path::Path;

use metagame_core::econ::Family;
use metagame_core::engine::Objective;
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    #[serde(default)]
    pub simulate: SimulateSection,
    #[serde(default)]
    pub fit: FitSection,
    #[serde(default)]
    pub metagame: EngineSection,
    #[serde(default)]
    pub expand: EngineSection,
    #[serde(default)]
    pub sweep: SweepSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateSection {
    pub families: Option<Vec<Family>>,
    pub roster_size: Option<usize>,
    pub games_per_cell: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitSection {
    pub family: Option<Family>,
    pub interactions: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EngineSection {
    pub coefficients: Option<String>,
    pub techs: Option<Vec<String>>,
    pub objective: Option<Objective>,
    pub strict: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub families: Option<Vec<Family>>,
    pub objectives: Option<Vec<Objective>>,
    pub roster_size: Option<usize>,
    pub subset_sizes: Option<Vec<usize>>,
    pub experiments_per_cell: Option<usize>,
    pub source: Option<String>,
    pub games_per_cell: Option<usize>,
    pub coefficients: Option<Vec<String>>,
    pub strict: Option<bool>,
}

pub fn load(path: &Path) -> anyhow::Result<ConfigFile> {
    let text = std::fs::read_to_string(path)?;
    Ok(toml::from_str(&text)?)
}
