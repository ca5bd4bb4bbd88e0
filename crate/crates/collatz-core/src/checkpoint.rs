//! Resumable campaign checkpoints.
//!
//! Line-delimited UTF-8: the first line is a header object carrying the
//! format version, the campaign descriptor, the chunk size, and the
//! histogram geometry; every following line is one completed chunk with a
//! sparse histogram delta, extreme updates, and findings. Chunks appear in
//! ascending contiguous order starting at 0, which makes the resume point
//! simply the number of chunk lines. Unbounded integers serialize as
//! decimal strings.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::histogram::{Extreme, HistogramConfig, ResidueHistogram};
use crate::verifier::{Campaign, Finding};

pub const FORMAT_VERSION: u32 = 1;

/// Serde adapter: `BigUint` as a decimal string.
pub mod biguint_string {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointHeader {
    pub format_version: u32,
    pub campaign: Campaign,
    pub chunk: u64,
    pub histogram_config: HistogramConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremeRecord {
    pub eps: f64,
    #[serde(with = "biguint_string")]
    pub n: BigUint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChunkRecord {
    pub chunk_index: u64,
    pub checked: u64,
    /// Sparse (bin index, count) pairs; the last bin index is overflow.
    pub counts_delta: Vec<(u32, u64)>,
    pub min: Option<ExtremeRecord>,
    pub max: Option<ExtremeRecord>,
    pub findings: Vec<Finding>,
}

impl ChunkRecord {
    pub fn from_outcome(
        chunk_index: u64,
        checked: u64,
        findings: &[Finding],
        histogram: &ResidueHistogram,
    ) -> Self {
        let counts_delta = histogram
            .counts
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| (i as u32, *c))
            .collect();
        let to_rec = |e: &Extreme| ExtremeRecord {
            eps: e.eps,
            n: e.n.clone(),
        };
        Self {
            chunk_index,
            checked,
            counts_delta,
            min: histogram.min.as_ref().map(to_rec),
            max: histogram.max.as_ref().map(to_rec),
            findings: findings.to_vec(),
        }
    }

    /// Fold this delta into a full histogram with the same geometry.
    pub fn apply_to(&self, histogram: &mut ResidueHistogram) {
        let mut delta = ResidueHistogram::new(histogram.config);
        for (idx, count) in &self.counts_delta {
            delta.counts[*idx as usize] += count;
            delta.total += count;
        }
        delta.min = self.min.as_ref().map(|e| Extreme {
            eps: e.eps,
            n: e.n.clone(),
        });
        delta.max = self.max.as_ref().map(|e| Extreme {
            eps: e.eps,
            n: e.n.clone(),
        });
        histogram.merge(&delta);
    }
}

pub fn write_header<W: Write>(w: &mut W, header: &CheckpointHeader) -> Result<()> {
    serde_json::to_writer(&mut *w, header)?;
    w.write_all(b"\n")?;
    Ok(())
}

pub fn append_chunk<W: Write>(w: &mut W, record: &ChunkRecord) -> Result<()> {
    serde_json::to_writer(&mut *w, record)?;
    w.write_all(b"\n")?;
    Ok(())
}

pub fn load(path: &Path) -> Result<(CheckpointHeader, Vec<ChunkRecord>)> {
    let file = std::fs::File::open(path)?;
    parse(BufReader::new(file))
}

/// Parse and validate a checkpoint stream. Rejects unknown versions,
/// out-of-order or non-contiguous chunk lines, and histogram deltas that
/// reference bins outside the declared geometry.
pub fn parse<R: BufRead>(reader: R) -> Result<(CheckpointHeader, Vec<ChunkRecord>)> {
    let mut lines = reader.lines();
    let header_line = lines
        .next()
        .ok_or_else(|| Error::CheckpointFormat("empty checkpoint".into()))??;
    let header: CheckpointHeader = serde_json::from_str(&header_line)
        .map_err(|e| Error::CheckpointFormat(format!("bad header: {e}")))?;
    if header.format_version != FORMAT_VERSION {
        return Err(Error::CheckpointVersion {
            expected: FORMAT_VERSION,
            found: header.format_version,
        });
    }
    if header.chunk == 0 || header.histogram_config.bins == 0 {
        return Err(Error::CheckpointFormat("degenerate header geometry".into()));
    }

    let bin_limit = header.histogram_config.bins; // overflow bin index == bins
    let mut records = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let rec: ChunkRecord = serde_json::from_str(&line)
            .map_err(|e| Error::CheckpointFormat(format!("line {}: {e}", lineno + 2)))?;
        if rec.chunk_index != records.len() as u64 {
            return Err(Error::CheckpointFormat(format!(
                "line {}: chunk index {} out of order (expected {})",
                lineno + 2,
                rec.chunk_index,
                records.len()
            )));
        }
        if rec.counts_delta.iter().any(|(idx, _)| *idx > bin_limit) {
            return Err(Error::CheckpointFormat(format!(
                "line {}: bin index outside geometry",
                lineno + 2
            )));
        }
        records.push(rec);
    }
    Ok((header, records))
}
