//! Plot-ready data emitters. Every figure dataset leaves the toolkit as a
//! UTF-8 text file with a header row; nothing here renders images.
//!
//! Schemas:
//! - histogram: `bin_lo,bin_hi,count` (one trailing overflow row with
//!   `bin_hi = inf`)
//! - scatter:    `n,s`
//! - curve:      `n,s_pred,alpha`
//! - trajectory: `step,term,s,alpha`
//! - sieve:      `n,window_lo,window_hi,allowed,prohibited` with the sets
//!   semicolon-joined
//!
//! Unbounded integers are always written as decimal strings.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::histogram::ResidueHistogram;
use crate::trajectory::trajectory_terms;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitFormat {
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Copy)]
pub struct EmitterConfig {
    pub format: EmitFormat,
    /// Decimal places for residues and bin bounds.
    pub precision: usize,
}

impl Default for EmitterConfig {
    fn default() -> Self {
        Self {
            format: EmitFormat::Csv,
            precision: 12,
        }
    }
}

pub fn write_histogram_csv<W: Write>(
    histogram: &ResidueHistogram,
    precision: usize,
    w: &mut W,
) -> Result<()> {
    writeln!(w, "bin_lo,bin_hi,count")?;
    let cfg = &histogram.config;
    let width = (cfg.hi - cfg.lo) / cfg.bins as f64;
    for (i, count) in histogram.counts[..cfg.bins as usize].iter().enumerate() {
        let lo = cfg.lo + i as f64 * width;
        let hi = cfg.lo + (i + 1) as f64 * width;
        writeln!(w, "{lo:.precision$},{hi:.precision$},{count}")?;
    }
    writeln!(w, "{:.precision$},inf,{}", cfg.hi, histogram.overflow_count())?;
    Ok(())
}

/// Re-parse an emitted histogram CSV into `(bin_lo, bin_hi, count)` rows;
/// the overflow row carries `bin_hi = inf`.
pub fn parse_histogram_csv<R: BufRead>(r: R) -> Result<Vec<(f64, f64, u64)>> {
    let bad = |line: &str| Error::CheckpointFormat(format!("bad histogram row: {line:?}"));
    let mut rows = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if i == 0 {
            if line != "bin_lo,bin_hi,count" {
                return Err(bad(&line));
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let (lo, hi, count) = match (parts.next(), parts.next(), parts.next(), parts.next()) {
            (Some(lo), Some(hi), Some(count), None) => (lo, hi, count),
            _ => return Err(bad(&line)),
        };
        let lo: f64 = lo.parse().map_err(|_| bad(&line))?;
        let hi: f64 = if hi == "inf" {
            f64::INFINITY
        } else {
            hi.parse().map_err(|_| bad(&line))?
        };
        let count: u64 = count.parse().map_err(|_| bad(&line))?;
        if !lo.is_finite() {
            return Err(bad(&line));
        }
        rows.push((lo, hi, count));
    }
    Ok(rows)
}

pub fn write_scatter_csv<W: Write>(points: &[(u64, u64)], w: &mut W) -> Result<()> {
    writeln!(w, "n,s")?;
    for (n, s) in points {
        writeln!(w, "{n},{s}")?;
    }
    Ok(())
}

pub fn write_curve_csv<W: Write>(alpha: u64, points: &[(u64, u64)], w: &mut W) -> Result<()> {
    writeln!(w, "n,s_pred,alpha")?;
    for (n, s) in points {
        writeln!(w, "{n},{s},{alpha}")?;
    }
    Ok(())
}

/// One row of the trajectory-path dataset: the `step`-th term of the
/// trajectory together with its own stopping time and odd-term count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathPoint {
    pub step: u64,
    pub term: BigUint,
    pub s: u64,
    pub alpha: u64,
}

/// The trajectory of `n` annotated with per-term `S` and `alpha`, computed
/// in one backward scan: `S` counts down to 0, `alpha` drops by one exactly
/// at the odd terms.
pub fn trajectory_path(n: &BigUint, max_iterations: u64) -> Result<Vec<PathPoint>> {
    let terms = trajectory_terms(n, max_iterations)?;
    let len = terms.len();
    let mut alphas = vec![0u64; len];
    for i in (0..len.saturating_sub(1)).rev() {
        alphas[i] = alphas[i + 1] + u64::from(terms[i].bit(0));
    }
    Ok(terms
        .into_iter()
        .enumerate()
        .map(|(i, term)| PathPoint {
            step: i as u64,
            term,
            s: (len - 1 - i) as u64,
            alpha: alphas[i],
        })
        .collect())
}

pub fn write_trajectory_csv<W: Write>(path: &[PathPoint], w: &mut W) -> Result<()> {
    writeln!(w, "step,term,s,alpha")?;
    for p in path {
        writeln!(w, "{},{},{},{}", p.step, p.term, p.s, p.alpha)?;
    }
    Ok(())
}

fn join_set(set: &BTreeSet<u64>) -> String {
    set.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

pub fn write_sieve_csv_header<W: Write>(w: &mut W) -> Result<()> {
    writeln!(w, "n,window_lo,window_hi,allowed,prohibited")?;
    Ok(())
}

pub fn write_sieve_csv_row<W: Write>(
    n: &BigUint,
    window_lo: u64,
    window_hi: u64,
    allowed: &BTreeSet<u64>,
    prohibited: &BTreeSet<u64>,
    w: &mut W,
) -> Result<()> {
    writeln!(
        w,
        "{n},{window_lo},{window_hi},{},{}",
        join_set(allowed),
        join_set(prohibited)
    )?;
    Ok(())
}

pub fn write_sieve_jsonl_row<W: Write>(
    n: &BigUint,
    window_lo: u64,
    window_hi: u64,
    allowed: &BTreeSet<u64>,
    prohibited: &BTreeSet<u64>,
    w: &mut W,
) -> Result<()> {
    let record = serde_json::json!({
        "n": n.to_string(),
        "window": [window_lo, window_hi],
        "allowed": allowed,
        "prohibited": prohibited,
    });
    serde_json::to_writer(&mut *w, &record)?;
    w.write_all(b"\n")?;
    Ok(())
}

pub fn write_alpha_table_text<W: Write>(
    classes: &[crate::alpha::AlphaClass],
    w: &mut W,
) -> Result<()> {
    for class in classes {
        let members = class
            .members
            .iter()
            .map(|m| m.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        writeln!(w, "alpha = {}: {}", class.alpha, members)?;
    }
    Ok(())
}

pub fn write_alpha_table_csv<W: Write>(
    classes: &[crate::alpha::AlphaClass],
    w: &mut W,
) -> Result<()> {
    writeln!(w, "alpha,members")?;
    for class in classes {
        let members = class
            .members
            .iter()
            .map(|m| m.to_string())
            .collect::<Vec<_>>()
            .join(";");
        writeln!(w, "{},{}", class.alpha, members)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::histogram::HistogramConfig;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn trajectory_path_8() {
        let path = trajectory_path(&big(8), 100).unwrap();
        let s: Vec<u64> = path.iter().map(|p| p.s).collect();
        let alpha: Vec<u64> = path.iter().map(|p| p.alpha).collect();
        assert_eq!(s, vec![3, 2, 1, 0]);
        assert_eq!(alpha, vec![0, 0, 0, 0]);
    }

    #[test]
    fn trajectory_path_5() {
        let path = trajectory_path(&big(5), 100).unwrap();
        let alpha: Vec<u64> = path.iter().map(|p| p.alpha).collect();
        assert_eq!(alpha, vec![1, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn trajectory_path_65() {
        let path = trajectory_path(&big(65), 1000).unwrap();
        assert_eq!(path.len(), 28);
        assert_eq!(path[0].s, 27);
        assert_eq!(path[0].alpha, 8);
        assert_eq!(path.last().unwrap().s, 0);
        assert_eq!(path.last().unwrap().alpha, 0);
    }

    #[test]
    fn path_transitions_match_the_map() {
        for n in 1u64..=2_000 {
            let path = trajectory_path(&big(n), 1_000_000).unwrap();
            for pair in path.windows(2) {
                assert_eq!(pair[0].s, pair[1].s + 1, "n={n}");
                if pair[0].term.bit(0) {
                    assert_eq!(pair[0].alpha, pair[1].alpha + 1, "n={n} odd step");
                } else {
                    assert_eq!(pair[0].alpha, pair[1].alpha, "n={n} halving");
                }
            }
        }
    }

    #[test]
    fn histogram_csv_roundtrip() {
        let mut h = ResidueHistogram::new(HistogramConfig::default());
        for i in 0..500u64 {
            h.record(i as f64 / 2000.0, &big(i + 1));
        }
        h.record(0.9, &big(999)); // overflow
        let mut buf = Vec::new();
        write_histogram_csv(&h, 12, &mut buf).unwrap();
        let rows = parse_histogram_csv(&buf[..]).unwrap();
        assert_eq!(rows.len(), 653);
        assert_eq!(rows.iter().map(|r| r.2).sum::<u64>(), h.total);
        assert_eq!(rows.last().unwrap().2, 1);
        assert!(rows.last().unwrap().1.is_infinite());
        let width = 0.326 / 652.0;
        for (i, (lo, hi, _)) in rows[..652].iter().enumerate() {
            assert!((lo - i as f64 * width).abs() < 1e-12);
            assert!((hi - (i as f64 + 1.0) * width).abs() < 1e-12);
        }
    }

    #[test]
    fn parse_histogram_rejects_garbage() {
        assert!(parse_histogram_csv(&b"nope\n"[..]).is_err());
        assert!(parse_histogram_csv(&b"bin_lo,bin_hi,count\n1,2\n"[..]).is_err());
        assert!(parse_histogram_csv(&b"bin_lo,bin_hi,count\nx,y,z\n"[..]).is_err());
    }

    #[test]
    fn sieve_row_format() {
        let allowed: BTreeSet<u64> = [7, 9, 12].into_iter().collect();
        let prohibited: BTreeSet<u64> = [8, 10, 11].into_iter().collect();
        let mut buf = Vec::new();
        write_sieve_csv_header(&mut buf).unwrap();
        write_sieve_csv_row(&big(65), 7, 12, &allowed, &prohibited, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "n,window_lo,window_hi,allowed,prohibited\n65,7,12,7;9;12,8;10;11\n"
        );
    }
}
