//! Mergeable binned distribution of the residue with exact extremal
//! tracking.
//!
//! The default geometry is 652 bins of width 0.0005 over `[0, 0.326]` plus
//! one overflow bin for `eps >= 0.326`; the overflow bin operationalizes the
//! empirical-bound check (it must stay empty).

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramConfig {
    pub bins: u32,
    pub lo: f64,
    pub hi: f64,
}

impl Default for HistogramConfig {
    fn default() -> Self {
        Self {
            bins: 652,
            lo: 0.0,
            hi: 0.326,
        }
    }
}

impl HistogramConfig {
    /// Index of the bin holding `eps`; `self.bins` is the overflow bin.
    pub fn bin_index(&self, eps: f64) -> usize {
        if eps >= self.hi {
            return self.bins as usize;
        }
        let width = (self.hi - self.lo) / self.bins as f64;
        let idx = ((eps - self.lo) / width).floor();
        (idx.max(0.0) as usize).min(self.bins as usize - 1)
    }
}

/// One residue extreme: the value and the `n` that attained it.
#[derive(Debug, Clone, PartialEq)]
pub struct Extreme {
    pub eps: f64,
    pub n: BigUint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidueHistogram {
    pub config: HistogramConfig,
    /// `config.bins` regular counters plus one trailing overflow counter.
    pub counts: Vec<u64>,
    pub total: u64,
    pub min: Option<Extreme>,
    pub max: Option<Extreme>,
}

impl ResidueHistogram {
    pub fn new(config: HistogramConfig) -> Self {
        Self {
            config,
            counts: vec![0; config.bins as usize + 1],
            total: 0,
            min: None,
            max: None,
        }
    }

    pub fn record(&mut self, eps: f64, n: &BigUint) {
        let idx = self.config.bin_index(eps);
        self.record_at(idx, eps, n);
    }

    /// Record with the overflow decision already adjudicated (used when
    /// `eps` sits within float noise of the bound and a high-precision
    /// comparison made the call).
    pub fn record_decided(&mut self, eps: f64, n: &BigUint, below_bound: bool) {
        let idx = if below_bound {
            self.config.bin_index(eps).min(self.config.bins as usize - 1)
        } else {
            self.config.bins as usize
        };
        self.record_at(idx, eps, n);
    }

    fn record_at(&mut self, idx: usize, eps: f64, n: &BigUint) {
        self.counts[idx] += 1;
        self.total += 1;
        take_min(&mut self.min, eps, n);
        take_max(&mut self.max, eps, n);
    }

    pub fn overflow_count(&self) -> u64 {
        *self.counts.last().unwrap()
    }

    /// Merge another histogram with identical geometry. Commutative and
    /// associative; extremes merge by comparison with ties broken toward
    /// the smaller `n` so merge order never matters.
    pub fn merge(&mut self, other: &ResidueHistogram) {
        assert_eq!(self.config, other.config, "histogram geometry mismatch");
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.total += other.total;
        if let Some(m) = &other.min {
            take_min(&mut self.min, m.eps, &m.n);
        }
        if let Some(m) = &other.max {
            take_max(&mut self.max, m.eps, &m.n);
        }
    }
}

fn take_min(slot: &mut Option<Extreme>, eps: f64, n: &BigUint) {
    let better = match slot {
        None => true,
        Some(cur) => eps < cur.eps || (eps == cur.eps && *n < cur.n),
    };
    if better {
        *slot = Some(Extreme {
            eps,
            n: n.clone(),
        });
    }
}

fn take_max(slot: &mut Option<Extreme>, eps: f64, n: &BigUint) {
    let better = match slot {
        None => true,
        Some(cur) => eps > cur.eps || (eps == cur.eps && *n < cur.n),
    };
    if better {
        *slot = Some(Extreme {
            eps,
            n: n.clone(),
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bin_index_boundaries() {
        let cfg = HistogramConfig::default();
        assert_eq!(cfg.bin_index(0.0), 0);
        assert_eq!(cfg.bin_index(0.0004999), 0);
        assert_eq!(cfg.bin_index(0.0005001), 1);
        assert_eq!(cfg.bin_index(0.3259), 651);
        assert_eq!(cfg.bin_index(0.326), 652);
        assert_eq!(cfg.bin_index(0.9), 652);
    }

    #[test]
    fn counts_sum_to_total() {
        let mut h = ResidueHistogram::new(HistogramConfig::default());
        for i in 0..1000u64 {
            h.record(i as f64 / 2500.0, &BigUint::from(i + 1));
        }
        assert_eq!(h.counts.iter().sum::<u64>(), h.total);
        assert_eq!(h.total, 1000);
    }

    proptest! {
        #[test]
        fn merge_is_order_independent(
            values in prop::collection::vec((0.0f64..0.5, 1u64..1_000_000), 1..200),
            order in prop::collection::vec(0usize..8, 8),
        ) {
            let cfg = HistogramConfig::default();
            // Split values into 8 parts, merge in two different orders.
            let mut parts: Vec<ResidueHistogram> =
                (0..8).map(|_| ResidueHistogram::new(cfg)).collect();
            for (i, (eps, n)) in values.iter().enumerate() {
                parts[i % 8].record(*eps, &BigUint::from(*n));
            }

            let mut sequential = ResidueHistogram::new(cfg);
            for p in &parts {
                sequential.merge(p);
            }

            let mut shuffled = ResidueHistogram::new(cfg);
            let mut indices: Vec<usize> = (0..8).collect();
            for (i, o) in order.iter().enumerate() {
                indices.swap(i, *o % 8);
            }
            for i in indices {
                shuffled.merge(&parts[i]);
            }

            prop_assert_eq!(sequential, shuffled);
        }
    }
}
