use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use super::{ExperimentRecord, SweepStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(format!("unknown report format `{other}`")),
        }
    }
}

pub fn write_stats_json<W: Write>(mut w: W, stats: &SweepStats) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut w, stats)?;
    writeln!(w)
}

#[derive(Serialize)]
struct PlotRow<'a> {
    panel: String,
    family: &'a str,
    objective: &'a str,
    frequency: f64,
    ci_lo: f64,
    ci_hi: f64,
    n: u64,
}

/// Plot data: one row per panel, family and objective. Undefined
/// frequencies are written as `NaN`.
pub fn write_panels_csv<W: Write>(w: W, stats: &SweepStats) -> Result<(), csv::Error> {
    let mut out = csv::Writer::from_writer(w);
    for p in &stats.panels {
        out.serialize(PlotRow {
            panel: p.panel.to_string(),
            family: p.family.as_str(),
            objective: p.objective.as_str(),
            frequency: p.frequency.unwrap_or(f64::NAN),
            ci_lo: p.ci_lo,
            ci_hi: p.ci_hi,
            n: p.n,
        })?;
    }
    out.flush()?;
    Ok(())
}

/// One JSON object per line.
pub fn write_experiments_jsonl<W: Write>(mut w: W, experiments: &[ExperimentRecord]) -> std::io::Result<()> {
    for e in experiments {
        serde_json::to_writer(&mut w, e)?;
        writeln!(w)?;
    }
    Ok(())
}
