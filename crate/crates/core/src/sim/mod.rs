//! Synthetic game play between parameterized technology policies, and the
//! game-records CSV format.

mod corpus;
mod csv_io;
mod policy;
mod protocol;
mod record;

pub use corpus::{cell_rng, draw_situation, generate_corpus, play_seeded};
pub use csv_io::{ingest_corpus, read_corpus, write_corpus, CsvRow, METRIC_TOLERANCE};
pub use policy::{generate_roster, tech_name, BargainingStyle, NegotiationStyle, PersuasionStyle, TechPolicy};
pub use protocol::{play_game, CONTINUATION_PROB, INFINITE_ROUND_CAP};
pub use record::GameRecord;

use thiserror::Error;

use crate::econ::EconError;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("roster must contain at least two technologies, got {0}")]
    RosterTooSmall(usize),
    #[error("duplicate technology id `{0}` in roster")]
    DuplicateTech(String),
    #[error("policy `{tech}` parameter {field} = {value} out of range")]
    PolicyRange { tech: String, field: &'static str, value: f64 },
    #[error(transparent)]
    Econ(#[from] EconError),
}

#[derive(Debug, Error)]
pub enum RecordError {
    #[error("row {row}: schema violation: {message}")]
    Schema { row: usize, message: String },
    #[error("row {row}: invariant violation: {source}")]
    Invariant { row: usize, source: EconError },
    #[error("row {row}: {metric} = {stored} but recomputes to {computed}")]
    MetricMismatch { row: usize, metric: &'static str, stored: f64, computed: f64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl RecordError {
    pub fn row(&self) -> Option<usize> {
        match self {
            RecordError::Schema { row, .. }
            | RecordError::Invariant { row, .. }
            | RecordError::MetricMismatch { row, .. } => Some(*row),
            _ => None,
        }
    }
}
