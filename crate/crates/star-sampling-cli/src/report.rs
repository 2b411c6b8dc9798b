//! Output rows and CSV/JSON emission.
//!
//! Every experiment-style command emits the same long-form schema, one row
//! per (variant, cost model): see the README for the column list. Rows carry
//! the seed, a hash of the originating configuration, and the configuration
//! itself as an equivalent command line, so any row can be reproduced
//! exactly by re-running its `config` field.

use std::io::Write;

use serde::Serialize;

use star_sampling::montecarlo::{CostSummary, TrialSummary};
use star_sampling::Estimate;

/// One output row of an experiment or estimate command.
#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub graph: String,
    pub variant: String,
    pub cost_model: String,
    pub trials: u64,
    pub seed: u64,
    pub mean: Option<f64>,
    pub ci_lo: Option<f64>,
    pub ci_hi: Option<f64>,
    pub estimate_lo: Option<f64>,
    pub estimate_hi: Option<f64>,
    pub rel_err_pct: Option<f64>,
    pub estimate_outside_ci: Option<bool>,
    pub config_hash: String,
    pub config: String,
}

/// Row of the `stats` command (Table-I style).
#[derive(Clone, Debug, Serialize)]
pub struct StatsRow {
    pub graph: String,
    pub n: usize,
    pub m: usize,
    pub s: f64,
    pub assortativity: Option<f64>,
    pub d_max: usize,
}

/// FNV-1a over the canonical config string, as 16 hex digits.
pub fn config_hash(config: &str) -> String {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in config.bytes() {
        hash ^= u64::from(byte);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{hash:016x}")
}

/// Builds the pair of (unit, linear) rows for one experiment summary.
pub fn summary_rows(
    graph: String,
    variant: &str,
    seed: u64,
    summary: &TrialSummary,
    outside: (Option<bool>, Option<bool>),
    config: &str,
) -> Vec<Row> {
    let hash = config_hash(config);
    let build = |cost_model: &str, c: &CostSummary, outside_ci: Option<bool>| Row {
        graph: graph.clone(),
        variant: variant.to_owned(),
        cost_model: cost_model.to_owned(),
        trials: summary.trials as u64,
        seed,
        mean: Some(c.mean),
        ci_lo: Some(c.ci.0),
        ci_hi: Some(c.ci.1),
        estimate_lo: c.estimate.as_ref().map(Estimate::lo),
        estimate_hi: c.estimate.as_ref().map(Estimate::hi),
        rel_err_pct: c.rel_err_pct,
        estimate_outside_ci: outside_ci,
        config_hash: hash.clone(),
        config: config.to_owned(),
    };
    vec![
        build("unit", &summary.unit, outside.0),
        build("linear", &summary.linear, outside.1),
    ]
}

/// Builds an estimate-only row (no simulation columns).
#[allow(clippy::too_many_arguments)]
pub fn estimate_row(
    graph: String,
    variant: &str,
    cost_model: &str,
    seed: u64,
    estimate: &Estimate,
    config: &str,
) -> Row {
    Row {
        graph,
        variant: variant.to_owned(),
        cost_model: cost_model.to_owned(),
        trials: 0,
        seed,
        mean: None,
        ci_lo: None,
        ci_hi: None,
        estimate_lo: Some(estimate.lo()),
        estimate_hi: Some(estimate.hi()),
        rel_err_pct: None,
        estimate_outside_ci: None,
        config_hash: config_hash(config),
        config: config.to_owned(),
    }
}

/// Output encodings supported by every command.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// RFC-4180 CSV with a header row.
    Csv,
    /// JSON, one object per row (JSON Lines).
    Json,
}

/// Serializes rows in the requested format.
pub fn write_rows<W: Write, T: Serialize>(
    out: W,
    format: Format,
    rows: &[T],
) -> anyhow::Result<()> {
    match format {
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(out);
            for row in rows {
                writer.serialize(row)?;
            }
            writer.flush()?;
        }
        Format::Json => {
            let mut out = out;
            for row in rows {
                serde_json::to_writer(&mut out, row)?;
                out.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}
