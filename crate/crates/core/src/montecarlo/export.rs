//! JSON and CSV writers for campaign statistics.
//!
//! Floats are written with the shortest decimal that round-trips, so equal
//! stats produce identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use super::CampaignStats;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::invalid(format!("unknown format {other:?} (json or csv)"))),
        }
    }
}

impl Format {
    pub fn render(&self, stats: &CampaignStats) -> Result<Vec<u8>> {
        match self {
            Format::Json => {
                let mut out = serde_json::to_vec_pretty(stats).map_err(|e| Error::invalid(e.to_string()))?;
                out.push(b'\n');
                Ok(out)
            }
            Format::Csv => render_csv(stats),
        }
    }
}

fn render_csv(stats: &CampaignStats) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::invalid(e.to_string());
    w.write_record(["bin_lo", "bin_hi", "count"]).map_err(csv_err)?;
    let h = &stats.histogram;
    for (i, c) in h.counts.iter().enumerate() {
        w.write_record([h.edges[i].to_string(), h.edges[i + 1].to_string(), c.to_string()])
            .map_err(csv_err)?;
    }
    let mut out = w.into_inner().map_err(|e| Error::invalid(e.to_string()))?;
    let mut tail = String::new();
    let _ = writeln!(tail, "# family={}", stats.family);
    let _ = writeln!(tail, "# measure_name={}", stats.measure_name);
    for (k, v) in [
        ("seed", stats.seed.to_string()),
        ("samples", stats.samples.to_string()),
        ("fraction_monogamous", stats.fraction_monogamous.to_string()),
        ("mean_deficit", stats.mean_deficit.to_string()),
        ("min_deficit", stats.min_deficit.to_string()),
        ("max_deficit", stats.max_deficit.to_string()),
        ("min_pair_sum", stats.min_pair_sum.to_string()),
        ("max_pair_sum", stats.max_pair_sum.to_string()),
        ("numerical_flags", stats.numerical_flags.to_string()),
    ] {
        let _ = writeln!(tail, "# {k}={v}");
    }
    out.extend_from_slice(tail.as_bytes());
    Ok(out)
}

pub fn export_stats(stats: &CampaignStats, format: Format, path: &Path) -> Result<()> {
    let bytes = format.render(stats)?;
    fs::write(path, bytes).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

pub fn import_stats_json(path: &Path) -> Result<CampaignStats> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|e| Error::Format { path: path.to_path_buf(), message: e.to_string() })
}
