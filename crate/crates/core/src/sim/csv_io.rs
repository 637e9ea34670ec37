use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::record::metrics;
use super::{GameRecord, RecordError};
use crate::econ::{
    BargainingOutcome, Family, Horizon, NegotiationOutcome, Outcome, PersuasionOutcome, SituationParams,
};

/// Largest accepted gap between a stored metric and its recomputation.
pub const METRIC_TOLERANCE: f64 = 1e-9;

/// One line of the game-records file. Cells that do not apply to the row's
/// family are empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub family: Family,
    pub market_id: u32,
    pub ci: bool,
    pub ma: bool,
    pub horizon: Option<Horizon>,
    pub myopic: Option<bool>,
    pub delta_a: Option<f64>,
    pub delta_b: Option<f64>,
    pub m_scale: f64,
    pub f_a: Option<f64>,
    pub f_b: Option<f64>,
    pub prior_p: Option<f64>,
    pub v_value: Option<f64>,
    pub rounds_t: Option<u32>,
    pub tech_a: String,
    pub tech_b: String,
    pub t_ev: Option<u32>,
    pub p_ev: Option<f64>,
    pub traded: Option<bool>,
    pub n_ev: Option<u32>,
    pub k_ev: Option<u32>,
    pub r_ev: Option<u32>,
    pub payoff_a: f64,
    pub payoff_b: f64,
    pub fairness: f64,
    pub efficiency: f64,
    pub seed: u64,
}

impl From<&GameRecord> for CsvRow {
    fn from(r: &GameRecord) -> Self {
        let s = &r.situation;
        let mut row = CsvRow {
            family: r.market.family,
            market_id: r.market.market_id,
            ci: r.market.complete_info,
            ma: r.market.messages_allowed,
            horizon: r.market.horizon,
            myopic: r.market.myopic_buyer,
            delta_a: s.delta_a,
            delta_b: s.delta_b,
            m_scale: s.m_scale,
            f_a: s.f_a,
            f_b: s.f_b,
            prior_p: s.prior_p,
            v_value: s.v_value,
            rounds_t: s.rounds,
            tech_a: r.tech_a.clone(),
            tech_b: r.tech_b.clone(),
            t_ev: None,
            p_ev: None,
            traded: None,
            n_ev: None,
            k_ev: None,
            r_ev: None,
            payoff_a: r.payoff_a,
            payoff_b: r.payoff_b,
            fairness: r.fairness,
            efficiency: r.efficiency,
            seed: r.seed,
        };
        match r.outcome {
            Outcome::Bargaining(BargainingOutcome::Agreement { round, share }) => {
                row.t_ev = Some(round);
                row.p_ev = Some(share);
            }
            Outcome::Bargaining(BargainingOutcome::NoAgreement) => {}
            Outcome::Negotiation(NegotiationOutcome::Trade { price }) => {
                row.traded = Some(true);
                row.p_ev = Some(price);
            }
            Outcome::Negotiation(NegotiationOutcome::NoTrade) => row.traded = Some(false),
            Outcome::Persuasion(p) => {
                row.n_ev = Some(p.high);
                row.k_ev = Some(p.bought_high);
                row.r_ev = Some(p.rejected_low);
            }
        }
        row
    }
}

impl CsvRow {
    /// Validates the row and rebuilds the record. `row` is the file line
    /// number used in errors.
    pub fn into_record(self, row: usize) -> Result<GameRecord, RecordError> {
        let schema = |message: String| RecordError::Schema { row, message };
        let market = self.family.market(self.market_id).ok_or_else(|| {
            schema(format!("no {} market with id {}", self.family, self.market_id))
        })?;
        if (market.complete_info, market.messages_allowed, market.horizon, market.myopic_buyer)
            != (self.ci, self.ma, self.horizon, self.myopic)
        {
            return Err(schema(format!(
                "ci/ma/horizon/myopic do not match {} market {} ({})",
                self.family,
                self.market_id,
                market.describe()
            )));
        }
        let outcome = match self.family {
            Family::Bargaining => {
                if self.traded.is_some() || self.n_ev.is_some() || self.k_ev.is_some() || self.r_ev.is_some() {
                    return Err(schema("negotiation/persuasion cells set on a bargaining row".into()));
                }
                match (self.t_ev, self.p_ev) {
                    (Some(round), Some(share)) => Outcome::Bargaining(BargainingOutcome::Agreement { round, share }),
                    (None, None) => Outcome::Bargaining(BargainingOutcome::NoAgreement),
                    _ => return Err(schema("t_ev and p_ev must be both set or both empty".into())),
                }
            }
            Family::Negotiation => {
                if self.t_ev.is_some() || self.n_ev.is_some() || self.k_ev.is_some() || self.r_ev.is_some() {
                    return Err(schema("bargaining/persuasion cells set on a negotiation row".into()));
                }
                match (self.traded, self.p_ev) {
                    (Some(true), Some(price)) => Outcome::Negotiation(NegotiationOutcome::Trade { price }),
                    (Some(false), None) => Outcome::Negotiation(NegotiationOutcome::NoTrade),
                    _ => return Err(schema("traded=true needs p_ev, traded=false needs it empty".into())),
                }
            }
            Family::Persuasion => {
                if self.t_ev.is_some() || self.p_ev.is_some() || self.traded.is_some() {
                    return Err(schema("bargaining/negotiation cells set on a persuasion row".into()));
                }
                match (self.rounds_t, self.n_ev, self.k_ev, self.r_ev) {
                    (Some(rounds), Some(high), Some(bought_high), Some(rejected_low)) => {
                        Outcome::Persuasion(PersuasionOutcome { rounds, high, bought_high, rejected_low })
                    }
                    _ => return Err(schema("persuasion rows need rounds_t, n_ev, k_ev and r_ev".into())),
                }
            }
        };
        let situation = SituationParams {
            delta_a: self.delta_a,
            delta_b: self.delta_b,
            m_scale: self.m_scale,
            f_a: self.f_a,
            f_b: self.f_b,
            prior_p: self.prior_p,
            v_value: self.v_value,
            rounds: self.rounds_t,
        };
        let (payoff_a, payoff_b, fairness, efficiency) =
            metrics(&market, &situation, &outcome).map_err(|source| RecordError::Invariant { row, source })?;
        for (metric, stored, computed) in [
            ("payoff_a", self.payoff_a, payoff_a),
            ("payoff_b", self.payoff_b, payoff_b),
            ("fairness", self.fairness, fairness),
            ("efficiency", self.efficiency, efficiency),
        ] {
            if !((stored - computed).abs() <= METRIC_TOLERANCE) {
                return Err(RecordError::MetricMismatch { row, metric, stored, computed });
            }
        }
        Ok(GameRecord {
            market,
            situation,
            tech_a: self.tech_a,
            tech_b: self.tech_b,
            outcome,
            payoff_a,
            payoff_b,
            fairness,
            efficiency,
            seed: self.seed,
        })
    }
}

pub fn write_corpus<W: Write>(writer: W, records: &[GameRecord]) -> Result<(), RecordError> {
    let mut w = csv::Writer::from_writer(writer);
    for r in records {
        w.serialize(CsvRow::from(r))?;
    }
    w.flush()?;
    Ok(())
}

/// Parses and validates every row; the first bad row aborts with its line
/// number (the header is line 1).
pub fn read_corpus<R: Read>(reader: R) -> Result<Vec<GameRecord>, RecordError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let expected = expected_headers();
    if headers.iter().ne(expected.iter().map(String::as_str)) {
        return Err(RecordError::Schema {
            row: 1,
            message: format!("expected header `{}`", expected.join(",")),
        });
    }
    let mut out = Vec::new();
    for (i, result) in rdr.deserialize::<CsvRow>().enumerate() {
        let row = i + 2;
        let parsed = result.map_err(|e| RecordError::Schema { row, message: e.to_string() })?;
        out.push(parsed.into_record(row)?);
    }
    Ok(out)
}

pub fn ingest_corpus(path: impl AsRef<Path>) -> Result<Vec<GameRecord>, RecordError> {
    read_corpus(File::open(path)?)
}

fn expected_headers() -> Vec<String> {
    [
        "family", "market_id", "ci", "ma", "horizon", "myopic", "delta_a", "delta_b", "m_scale", "f_a",
        "f_b", "prior_p", "v_value", "rounds_t", "tech_a", "tech_b", "t_ev", "p_ev", "traded", "n_ev",
        "k_ev", "r_ev", "payoff_a", "payoff_b", "fairness", "efficiency", "seed",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}
