//! Seeded sampling campaigns: monogamy fractions, deficit statistics,
//! bound verification and the percentage claims.
//!
//! Sample `i` of a campaign is a pure function of `(seed, i)`. Indices are
//! cut into fixed chunks of [`CHUNK`] samples; chunks run on a dedicated
//! thread pool and their partial statistics are merged in chunk order, so
//! the result is bit-identical for any number of workers.

mod bounds;
mod export;
mod reproduce;
mod suites;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monogamy::monogamy_report;
use crate::states::{sample, SamplerSpec};

pub use bounds::{verify_bounds, BoundFamily, BoundReport};
pub use export::{export_stats, import_stats_json, Format};
pub use reproduce::{reproduce, Claim, ClaimReport};
pub use suites::{run_suite, Suite, SuiteReport};

pub const CHUNK: u64 = 1024;
pub const DEFAULT_BINS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CampaignConfig {
    pub sampler: SamplerSpec,
    pub samples: u64,
    pub pivot: usize,
    pub histogram_bins: usize,
    pub workers: usize,
}

impl CampaignConfig {
    pub fn new(sampler: SamplerSpec, samples: u64) -> Self {
        Self { sampler, samples, pivot: 0, histogram_bins: DEFAULT_BINS, workers: 1 }
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::invalid("a campaign needs at least one sample"));
        }
        if self.histogram_bins == 0 {
            return Err(Error::invalid("histogram_bins must be positive"));
        }
        if self.workers == 0 {
            return Err(Error::invalid("workers must be positive"));
        }
        let n = self.sampler.family.num_qubits();
        if self.pivot >= n {
            return Err(Error::cut(format!("pivot {} out of range for {n} qubits", self.pivot)));
        }
        Ok(())
    }
}

/// Histogram of pair sums over fixed edges.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    /// `bins` equal bins on `[0, hi]`.
    pub fn new(bins: usize, hi: f64) -> Self {
        let edges = (0..=bins).map(|i| hi * i as f64 / bins as f64).collect();
        Self { edges, counts: vec![0; bins] }
    }

    /// Out-of-range values land in the end bins.
    pub fn bin_of(&self, v: f64) -> usize {
        let bins = self.counts.len();
        let hi = self.edges[bins];
        let pos = (v / hi * bins as f64).floor();
        if pos <= 0.0 {
            0
        } else {
            (pos as usize).min(bins - 1)
        }
    }
}

/// Field order is the JSON schema order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignStats {
    pub family: String,
    pub measure_name: String,
    pub seed: u64,
    pub samples: u64,
    pub fraction_monogamous: f64,
    pub mean_deficit: f64,
    pub min_deficit: f64,
    pub max_deficit: f64,
    pub min_pair_sum: f64,
    pub max_pair_sum: f64,
    pub histogram: Histogram,
    pub numerical_flags: u64,
}

impl CampaignStats {
    pub fn monogamous_count(&self) -> u64 {
        (self.fraction_monogamous * self.samples as f64).round() as u64
    }

    /// Wilson 95% interval for the monogamous fraction.
    pub fn wilson(&self) -> (f64, f64) {
        wilson_interval(self.monogamous_count(), self.samples)
    }
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(successes: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    const Z: f64 = 1.959_963_984_540_054;
    let n = n as f64;
    let p = successes as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Clone, Debug)]
struct Partial {
    ok: u64,
    monogamous: u64,
    deficit_sum: f64,
    min_deficit: f64,
    max_deficit: f64,
    min_pair_sum: f64,
    max_pair_sum: f64,
    counts: Vec<u64>,
    flags: u64,
}

impl Partial {
    fn new(bins: usize) -> Self {
        Self {
            ok: 0,
            monogamous: 0,
            deficit_sum: 0.0,
            min_deficit: f64::INFINITY,
            max_deficit: f64::NEG_INFINITY,
            min_pair_sum: f64::INFINITY,
            max_pair_sum: f64::NEG_INFINITY,
            counts: vec![0; bins],
            flags: 0,
        }
    }

    fn merge(&mut self, o: &Partial) {
        self.ok += o.ok;
        self.monogamous += o.monogamous;
        self.deficit_sum += o.deficit_sum;
        self.min_deficit = self.min_deficit.min(o.min_deficit);
        self.max_deficit = self.max_deficit.max(o.max_deficit);
        self.min_pair_sum = self.min_pair_sum.min(o.min_pair_sum);
        self.max_pair_sum = self.max_pair_sum.max(o.max_pair_sum);
        self.counts.iter_mut().zip(&o.counts).for_each(|(a, b)| *a += b);
        self.flags += o.flags;
    }
}

fn run_chunk(cfg: &CampaignConfig, hist: &Histogram, start: u64, end: u64) -> Partial {
    let mut acc = Partial::new(cfg.histogram_bins);
    for i in start..end {
        let rep = match monogamy_report(&sample(&cfg.sampler, i), cfg.pivot) {
            Ok(r) if r.deficit.is_finite() && r.pair_sum.is_finite() => r,
            _ => {
                acc.flags += 1;
                continue;
            }
        };
        acc.ok += 1;
        acc.monogamous += rep.monogamous as u64;
        acc.deficit_sum += rep.deficit;
        acc.min_deficit = acc.min_deficit.min(rep.deficit);
        acc.max_deficit = acc.max_deficit.max(rep.deficit);
        acc.min_pair_sum = acc.min_pair_sum.min(rep.pair_sum);
        acc.max_pair_sum = acc.max_pair_sum.max(rep.pair_sum);
        acc.counts[hist.bin_of(rep.pair_sum)] += 1;
    }
    acc
}

pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignStats> {
    cfg.validate()?;
    let n = cfg.sampler.family.num_qubits();
    let mut hist = Histogram::new(cfg.histogram_bins, (n - 1) as f64 / 2.0);
    let chunks = cfg.samples.div_ceil(CHUNK);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
    let partials: Vec<Partial> = pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| run_chunk(cfg, &hist, c * CHUNK, ((c + 1) * CHUNK).min(cfg.samples)))
            .collect()
    });
    let mut total = Partial::new(cfg.histogram_bins);
    for p in &partials {
        total.merge(p);
    }
    hist.counts = total.counts;
    let mean = if total.ok > 0 { total.deficit_sum / total.ok as f64 } else { f64::NAN };
    Ok(CampaignStats {
        family: cfg.sampler.family.to_string(),
        measure_name: cfg.sampler.family.measure_name().to_string(),
        seed: cfg.sampler.seed,
        samples: cfg.samples,
        fraction_monogamous: total.monogamous as f64 / cfg.samples as f64,
        mean_deficit: mean,
        min_deficit: total.min_deficit,
        max_deficit: total.max_deficit,
        min_pair_sum: total.min_pair_sum,
        max_pair_sum: total.max_pair_sum,
        histogram: hist,
        numerical_flags: total.flags,
    })
}
