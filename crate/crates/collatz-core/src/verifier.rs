//! Batch verification campaigns: exhaustive ranges and random big
//! integers, with parallel chunk processing, deterministic merge, and
//! resumable checkpoints.
//!
//! Work is split into fixed-size chunks processed by a worker pool; chunk
//! results are merged in ascending chunk index regardless of completion
//! order, so reports are identical across runs and across worker counts.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::checkpoint::{self, biguint_string, CheckpointHeader, ChunkRecord, FORMAT_VERSION};
use crate::error::{Error, Result};
use crate::formula::{check_formula_cached, residue_cached, residue_below_cached, FormulaVerdict, Pow3Cache};
use crate::histogram::{HistogramConfig, ResidueHistogram};
use crate::sampling::sample_natural;
use crate::trajectory::{default_max_iterations, trajectory_stats_only};

/// What a campaign iterates over. Range bounds are unbounded integers and
/// serialize as decimal strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Campaign {
    Range {
        #[serde(with = "biguint_string")]
        start: BigUint,
        #[serde(with = "biguint_string")]
        end: BigUint,
    },
    Random {
        samples: u64,
        max_bits: u64,
        seed: u64,
    },
}

impl Campaign {
    /// Number of values the campaign checks.
    pub fn size(&self) -> u64 {
        match self {
            Campaign::Range { start, end } => {
                let span = end - start + 1u32;
                span.try_into().expect("range span exceeds u64 chunk addressing")
            }
            Campaign::Random { samples, .. } => *samples,
        }
    }

    fn value_at(&self, unit: u64) -> BigUint {
        match self {
            Campaign::Range { start, .. } => start + unit,
            Campaign::Random { seed, max_bits, .. } => sample_natural(*seed, unit, *max_bits),
        }
    }
}

/// A per-`n` finding worth reporting. Non-termination is a violation-class
/// finding with its own tag, never silently skipped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Finding {
    FormulaViolation {
        #[serde(with = "biguint_string")]
        n: BigUint,
        true_s: u64,
        predicted_s: u64,
        alpha: u64,
    },
    NonTermination {
        #[serde(with = "biguint_string")]
        n: BigUint,
        iterations: u64,
    },
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub campaign: Campaign,
    pub chunk: u64,
    pub checked: u64,
    pub findings: Vec<Finding>,
    pub histogram: ResidueHistogram,
    pub wall_time: f64,
}

impl VerificationReport {
    pub fn violations(&self) -> impl Iterator<Item = &Finding> {
        self.findings
            .iter()
            .filter(|f| matches!(f, Finding::FormulaViolation { .. }))
    }

    /// Equality on everything except wall time.
    pub fn same_outcome(&self, other: &VerificationReport) -> bool {
        self.campaign == other.campaign
            && self.checked == other.checked
            && self.findings == other.findings
            && self.histogram == other.histogram
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Worker threads; 0 means the pool default.
    pub workers: usize,
    /// Units per chunk.
    pub chunk: u64,
    pub histogram: HistogramConfig,
    /// Divergence guard override; `None` uses the per-`n` default.
    pub max_iterations: Option<u64>,
    /// Stop after the first batch that produced a finding.
    pub fail_fast: bool,
    /// Line-delimited checkpoint file to append to / resume from.
    pub checkpoint: Option<PathBuf>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            workers: 0,
            chunk: 65_536,
            histogram: HistogramConfig::default(),
            max_iterations: None,
            fail_fast: false,
            checkpoint: None,
        }
    }
}

/// Verify every `n` in `[start, end]`.
pub fn verify_range(start: &BigUint, end: &BigUint, opts: &VerifyOptions) -> Result<VerificationReport> {
    assert!(start >= &BigUint::one() && start <= end, "need 1 <= start <= end");
    run_campaign(
        Campaign::Range {
            start: start.clone(),
            end: end.clone(),
        },
        opts,
    )
}

/// Verify `samples` random integers drawn by the documented sampling law.
pub fn verify_random(samples: u64, max_bits: u64, seed: u64, opts: &VerifyOptions) -> Result<VerificationReport> {
    assert!(max_bits >= 1);
    run_campaign(
        Campaign::Random {
            samples,
            max_bits,
            seed,
        },
        opts,
    )
}

struct ChunkOutcome {
    checked: u64,
    findings: Vec<Finding>,
    histogram: ResidueHistogram,
}

fn process_chunk(campaign: &Campaign, chunk_index: u64, opts: &VerifyOptions) -> ChunkOutcome {
    let total = campaign.size();
    let lo = chunk_index * opts.chunk;
    let hi = ((chunk_index + 1) * opts.chunk).min(total);
    let mut histogram = ResidueHistogram::new(opts.histogram);
    let mut findings = Vec::new();
    let mut cache = Pow3Cache::new();
    // Residues this close to the bound are re-adjudicated with 256-bit
    // precision before binning.
    let near = 1e-6;
    let (bound_num, bound_den) = bound_rational(opts.histogram.hi);

    for unit in lo..hi {
        let n = campaign.value_at(unit);
        let cap = opts.max_iterations.unwrap_or_else(|| default_max_iterations(&n));
        match trajectory_stats_only(&n, cap) {
            Ok(stats) => {
                if let FormulaVerdict::Violated { true_s, predicted_s } =
                    check_formula_cached(&stats, &mut cache).expect("n >= 1")
                {
                    findings.push(Finding::FormulaViolation {
                        n: n.clone(),
                        true_s,
                        predicted_s,
                        alpha: stats.alpha,
                    });
                }
                let eps = residue_cached(&stats, &mut cache);
                if (eps - opts.histogram.hi).abs() < near {
                    let below = residue_below_cached(&stats, bound_num, bound_den, &mut cache);
                    histogram.record_decided(eps, &n, below);
                } else {
                    histogram.record(eps, &n);
                }
            }
            Err(Error::NonTermination { iterations, .. }) => {
                findings.push(Finding::NonTermination { n, iterations });
            }
            Err(e) => panic!("unexpected trajectory error: {e}"),
        }
    }

    ChunkOutcome {
        checked: hi - lo,
        findings,
        histogram,
    }
}

/// The histogram upper bound as a rational for exact comparisons. Bounds
/// are CLI-supplied decimals; nine digits reconstruct them exactly.
fn bound_rational(hi: f64) -> (u64, u64) {
    ((hi * 1e9).round() as u64, 1_000_000_000)
}

fn run_campaign(campaign: Campaign, opts: &VerifyOptions) -> Result<VerificationReport> {
    let start_time = Instant::now();
    let total_units = campaign.size();
    let total_chunks = if total_units == 0 {
        0
    } else {
        total_units.div_ceil(opts.chunk)
    };

    let mut histogram = ResidueHistogram::new(opts.histogram);
    let mut findings: Vec<Finding> = Vec::new();
    let mut checked = 0u64;
    let mut next_chunk = 0u64;

    // Resume or start the checkpoint stream.
    let mut sink: Option<BufWriter<File>> = match &opts.checkpoint {
        Some(path) if path.exists() => {
            let (header, records) = checkpoint::load(path)?;
            let expected = CheckpointHeader {
                format_version: FORMAT_VERSION,
                campaign: campaign.clone(),
                chunk: opts.chunk,
                histogram_config: opts.histogram,
            };
            if header != expected {
                return Err(Error::CheckpointMismatch(format!(
                    "found {header:?}, expected {expected:?}"
                )));
            }
            for rec in &records {
                checked += rec.checked;
                findings.extend(rec.findings.iter().cloned());
                rec.apply_to(&mut histogram);
            }
            next_chunk = records.len() as u64;
            let file = std::fs::OpenOptions::new().append(true).open(path)?;
            Some(BufWriter::new(file))
        }
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            checkpoint::write_header(
                &mut w,
                &CheckpointHeader {
                    format_version: FORMAT_VERSION,
                    campaign: campaign.clone(),
                    chunk: opts.chunk,
                    histogram_config: opts.histogram,
                },
            )?;
            Some(w)
        }
        None => None,
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers)
        .build()
        .expect("failed to build worker pool");
    let batch = (pool.current_num_threads() as u64 * 4).max(1);

    while next_chunk < total_chunks {
        let end = (next_chunk + batch).min(total_chunks);
        let indices: Vec<u64> = (next_chunk..end).collect();
        let outcomes: Vec<ChunkOutcome> = pool.install(|| {
            use rayon::prelude::*;
            indices
                .par_iter()
                .map(|&i| process_chunk(&campaign, i, opts))
                .collect()
        });
        for (i, outcome) in indices.iter().zip(outcomes) {
            if let Some(w) = sink.as_mut() {
                let rec = ChunkRecord::from_outcome(*i, outcome.checked, &outcome.findings, &outcome.histogram);
                checkpoint::append_chunk(w, &rec)?;
            }
            checked += outcome.checked;
            findings.extend(outcome.findings);
            histogram.merge(&outcome.histogram);
        }
        if let Some(w) = sink.as_mut() {
            w.flush()?;
        }
        next_chunk = end;
        if opts.fail_fast && !findings.is_empty() {
            break;
        }
    }

    Ok(VerificationReport {
        campaign,
        chunk: opts.chunk,
        checked,
        findings,
        histogram,
        wall_time: start_time.elapsed().as_secs_f64(),
    })
}
