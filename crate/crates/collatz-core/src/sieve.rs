//! Allowed and prohibited stopping-time sets, and their recursive
//! propagation through the four exact step relations:
//!
//! ```text
//! S(N/2)      = S(N) - 1   if N even
//! S(3N+1)     = S(N) - 1   if N odd
//! S(2N)       = S(N) + 1   for all N
//! S((N-1)/3)  = S(N) + 1   if (N-1)/3 is an odd natural
//! ```
//!
//! The relations are exact for every `N` whose stopping time is defined;
//! the sieve treats them as such. Prohibited sets are infinite, so every
//! interface carries an explicit finite window `[ceil_log2(n), bound]`.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::formula::{ceil_log2, predicted_stopping_time_cached, Pow3Cache};

/// Allowed and prohibited stopping times for one `n` within a window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoppingTimeSets {
    pub n: BigUint,
    /// `ceil_log2(n)`, the alpha = 0 value and the least allowed time.
    pub window_lo: u64,
    pub bound: u64,
    pub allowed: BTreeSet<u64>,
    pub prohibited: BTreeSet<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepRule {
    Halve,
    TriplePlusOne,
    Double,
    InverseOdd,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropagationEdge {
    pub from: BigUint,
    pub to: BigUint,
    /// How the stopping time shifts along the edge: -1 or +1.
    pub s_shift: i64,
    pub rule: StepRule,
}

/// Enumerate `alpha = 0, 1, 2, ...` while the predicted stopping time stays
/// within `bound`; everything else in the window is prohibited.
pub fn allowed_stopping_times(n: &BigUint, bound: u64) -> Result<StoppingTimeSets> {
    let window_lo = ceil_log2(n)?;
    assert!(bound >= window_lo, "bound below ceil_log2(n)");
    let mut cache = Pow3Cache::new();
    let mut allowed = BTreeSet::new();
    let mut alpha = 0u64;
    loop {
        let s = predicted_stopping_time_cached(n, alpha, &mut cache)?;
        if s > bound {
            break;
        }
        allowed.insert(s);
        alpha += 1;
    }
    let prohibited = (window_lo..=bound).filter(|s| !allowed.contains(s)).collect();
    Ok(StoppingTimeSets {
        n: n.clone(),
        window_lo,
        bound,
        allowed,
        prohibited,
    })
}

/// The applicable propagation edges for `n`: exactly one of halve /
/// triple-plus-one by parity (neither for the terminal 1), always double,
/// and the inverse odd edge when `(n-1)/3` is an odd natural, so at most 3
/// distinct other numbers.
pub fn neighbors(n: &BigUint) -> Vec<PropagationEdge> {
    assert!(!n.is_zero());
    let mut edges = Vec::with_capacity(3);
    if !n.is_one() {
        if n.bit(0) {
            edges.push(PropagationEdge {
                from: n.clone(),
                to: n * 3u32 + 1u32,
                s_shift: -1,
                rule: StepRule::TriplePlusOne,
            });
        } else {
            edges.push(PropagationEdge {
                from: n.clone(),
                to: n >> 1,
                s_shift: -1,
                rule: StepRule::Halve,
            });
        }
    }
    edges.push(PropagationEdge {
        from: n.clone(),
        to: n << 1,
        s_shift: 1,
        rule: StepRule::Double,
    });
    // (n-1)/3 must be an odd natural, and not the terminal 1: the map is
    // never applied to 1, so S(1) = 0 does not obey the +1 relation.
    if (n - 1u32) % 3u32 == BigUint::zero() {
        let target = (n - 1u32) / 3u32;
        if !target.is_zero() && !target.is_one() && target.bit(0) {
            edges.push(PropagationEdge {
                from: n.clone(),
                to: target,
                s_shift: 1,
                rule: StepRule::InverseOdd,
            });
        }
    }
    edges
}

/// One number's accumulated sieve knowledge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveEntry {
    pub n: BigUint,
    pub window_lo: u64,
    pub bound: u64,
    pub prohibited: BTreeSet<u64>,
}

/// Breadth-first propagation of prohibited values from the seeds, up to
/// `depth` edge hops. A prohibited `p` at `n` implies `p + s_shift` is
/// prohibited at the edge target; inherited values are intersected with the
/// target's own window and unioned with the target's directly computed
/// prohibitions. Repeated arrivals at the same `(n, bound)` union their
/// sets rather than re-expand.
pub fn propagate_prohibited(
    seeds: &[(BigUint, u64)],
    depth: u64,
) -> Result<BTreeMap<BigUint, SieveEntry>> {
    let mut result: BTreeMap<BigUint, SieveEntry> = BTreeMap::new();
    let mut visited: HashSet<(BigUint, u64)> = HashSet::new();
    let mut frontier: Vec<(BigUint, u64, BTreeSet<u64>)> = Vec::new();

    let absorb = |result: &mut BTreeMap<BigUint, SieveEntry>,
                      n: &BigUint,
                      window_lo: u64,
                      bound: u64,
                      prohibited: &BTreeSet<u64>| {
        result
            .entry(n.clone())
            .and_modify(|e| {
                e.bound = e.bound.max(bound);
                e.prohibited.extend(prohibited.iter().copied());
            })
            .or_insert_with(|| SieveEntry {
                n: n.clone(),
                window_lo,
                bound,
                prohibited: prohibited.clone(),
            });
    };

    for (n, bound) in seeds {
        let sets = allowed_stopping_times(n, *bound)?;
        absorb(&mut result, n, sets.window_lo, *bound, &sets.prohibited);
        if visited.insert((n.clone(), *bound)) {
            frontier.push((n.clone(), *bound, sets.prohibited));
        }
    }

    for _ in 0..depth {
        let mut next = Vec::new();
        for (n, bound, prohibited) in &frontier {
            for edge in neighbors(n) {
                let child_bound = *bound as i64 + edge.s_shift;
                if child_bound < 0 {
                    continue;
                }
                let child_bound = child_bound as u64;
                let child_lo = ceil_log2(&edge.to)?;
                if child_bound < child_lo {
                    continue;
                }
                let inherited: BTreeSet<u64> = prohibited
                    .iter()
                    .filter_map(|p| {
                        let shifted = *p as i64 + edge.s_shift;
                        (shifted >= child_lo as i64 && shifted <= child_bound as i64)
                            .then_some(shifted as u64)
                    })
                    .collect();
                let direct = allowed_stopping_times(&edge.to, child_bound)?;
                let mut merged = direct.prohibited.clone();
                merged.extend(inherited);
                absorb(&mut result, &edge.to, child_lo, child_bound, &merged);
                if visited.insert((edge.to.clone(), child_bound)) {
                    next.push((edge.to, child_bound, merged));
                }
            }
        }
        frontier = next;
    }

    Ok(result)
}
