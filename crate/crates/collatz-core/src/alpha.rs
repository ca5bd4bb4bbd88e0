//! Enumeration of the constant-alpha classes: for each `alpha`, the sorted
//! naturals up to a limit whose trajectories contain exactly `alpha` odd
//! terms. The `alpha = 0` class is exactly the powers of two.

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::Result;
use crate::formula::{predicted_stopping_time_cached, Pow3Cache};
use crate::trajectory::{default_max_iterations, trajectory_stats_only};
use crate::verifier::Finding;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaClass {
    pub alpha: u64,
    pub members: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub limit: u64,
    pub alpha_max: u64,
    /// One class per `alpha` in `[0, alpha_max]`, in order.
    pub classes: Vec<AlphaClass>,
    /// How many `n <= limit` fall beyond `alpha_max` (counted, not listed).
    pub tail_count: u64,
    /// Non-terminating trajectories, tagged per `n`.
    pub findings: Vec<Finding>,
}

/// Compute `alpha` for every `n` in `[1, limit]` and group by class.
/// Classification parallelizes over `n`; the merge is by ascending `n`, so
/// the result is deterministic.
pub fn classify_range(
    limit: u64,
    alpha_max: u64,
    max_iterations: Option<u64>,
) -> Result<Classification> {
    assert!(limit >= 1);
    let per_n: Vec<std::result::Result<u64, u64>> = (1..=limit)
        .into_par_iter()
        .map(|n| {
            let big = BigUint::from(n);
            let cap = max_iterations.unwrap_or_else(|| default_max_iterations(&big));
            match trajectory_stats_only(&big, cap) {
                Ok(stats) => Ok(stats.alpha),
                Err(_) => Err(cap),
            }
        })
        .collect();

    let mut classes: Vec<AlphaClass> = (0..=alpha_max)
        .map(|alpha| AlphaClass {
            alpha,
            members: Vec::new(),
        })
        .collect();
    let mut tail_count = 0u64;
    let mut findings = Vec::new();
    for (n, outcome) in (1..=limit).zip(per_n) {
        match outcome {
            Ok(alpha) if alpha <= alpha_max => classes[alpha as usize].members.push(n),
            Ok(_) => tail_count += 1,
            Err(iterations) => findings.push(Finding::NonTermination {
                n: BigUint::from(n),
                iterations,
            }),
        }
    }

    Ok(Classification {
        limit,
        alpha_max,
        classes,
        tail_count,
        findings,
    })
}

/// The constant-alpha curve: `(n, predicted stopping time)` for
/// `n = 1..=n_max`.
pub fn alpha_curve(alpha: u64, n_max: u64) -> Result<Vec<(u64, u64)>> {
    let mut cache = Pow3Cache::new();
    (1..=n_max)
        .map(|n| {
            predicted_stopping_time_cached(&BigUint::from(n), alpha, &mut cache).map(|s| (n, s))
        })
        .collect()
}
