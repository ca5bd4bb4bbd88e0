//! The Collatz map and per-start-value trajectory statistics.
//!
//! The stopping time `S` used throughout is the *total* number of map
//! applications until the value 1 is first reached, and `alpha` counts the
//! odd terms of the trajectory excluding the terminal 1 (the start value is
//! counted when it is odd and != 1). Runs of halvings are stripped in one
//! batch via the trailing-zero count; the observable counts are identical to
//! step-by-step iteration.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Statistics of one trajectory: stopping time `s`, odd-term count `alpha`,
/// halving count `even_steps`, and optionally the odd terms themselves in
/// trajectory order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrajectoryStats {
    pub n: BigUint,
    /// Total number of map applications until 1 is reached.
    pub s: u64,
    /// Number of odd terms, excluding the terminal 1.
    pub alpha: u64,
    /// Number of halving steps. Always `s - alpha`.
    pub even_steps: u64,
    /// The odd terms in trajectory order, or `None` in statistics-only mode
    /// (retaining terms for very large inputs is memory-hostile).
    pub odd_terms: Option<Vec<BigUint>>,
}

/// Default iteration cap: `10 * bitlen(n)^2 + 10^6`. Empirical stopping
/// times grow roughly linearly in bit length, so this is generous yet
/// finite.
pub fn default_max_iterations(n: &BigUint) -> u64 {
    let bits = n.bits();
    10u64
        .saturating_mul(bits.saturating_mul(bits))
        .saturating_add(1_000_000)
}

/// One application of the Collatz map: `n/2` for even `n`, `3n+1` for odd.
/// Rejects `n < 2` (1 is terminal, 0 is outside the domain).
pub fn collatz_step(n: &BigUint) -> Result<BigUint> {
    if n.bits() < 2 {
        return Err(Error::StepDomain(n.clone()));
    }
    if n.bit(0) {
        Ok(n * 3u32 + 1u32)
    } else {
        Ok(n >> 1)
    }
}

/// Trajectory statistics with the odd terms retained.
pub fn trajectory_stats(n: &BigUint, max_iterations: u64) -> Result<TrajectoryStats> {
    stats_impl(n, max_iterations, true)
}

/// Trajectory statistics without retaining odd terms. Takes a fast machine
/// word path when the start value fits in 64 bits.
pub fn trajectory_stats_only(n: &BigUint, max_iterations: u64) -> Result<TrajectoryStats> {
    stats_impl(n, max_iterations, false)
}

fn stats_impl(n: &BigUint, max_iterations: u64, keep_terms: bool) -> Result<TrajectoryStats> {
    if n.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let mut counters = Counters::default();
    let mut odd_terms = keep_terms.then(Vec::new);

    if !keep_terms && n.bits() <= 64 {
        match run_u128(n.to_u128().unwrap(), max_iterations, &mut counters) {
            SmallOutcome::Done => {
                return Ok(counters.into_stats(n.clone(), None));
            }
            SmallOutcome::Overflow(v) => {
                // Continue in arbitrary precision from where the word path
                // left off.
                run_big(BigUint::from(v), max_iterations, &mut counters, &mut odd_terms)?;
                return Ok(counters.into_stats(n.clone(), None));
            }
            SmallOutcome::Exhausted(v) => {
                return Err(Error::NonTermination {
                    last: BigUint::from(v),
                    iterations: counters.s,
                });
            }
        }
    }

    run_big(n.clone(), max_iterations, &mut counters, &mut odd_terms)?;
    Ok(counters.into_stats(n.clone(), odd_terms))
}

/// The full trajectory `n, step(n), ..., 1` inclusive.
pub fn trajectory_terms(n: &BigUint, max_iterations: u64) -> Result<Vec<BigUint>> {
    if n.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let mut terms = vec![n.clone()];
    let mut v = n.clone();
    let mut iterations = 0u64;
    while !v.is_one() {
        if iterations >= max_iterations {
            return Err(Error::NonTermination {
                last: v,
                iterations,
            });
        }
        v = collatz_step(&v)?;
        iterations += 1;
        terms.push(v.clone());
    }
    Ok(terms)
}

#[derive(Default)]
struct Counters {
    s: u64,
    alpha: u64,
    even_steps: u64,
}

impl Counters {
    fn into_stats(self, n: BigUint, odd_terms: Option<Vec<BigUint>>) -> TrajectoryStats {
        TrajectoryStats {
            n,
            s: self.s,
            alpha: self.alpha,
            even_steps: self.even_steps,
            odd_terms,
        }
    }
}

enum SmallOutcome {
    Done,
    /// `3v+1` would overflow u128; carries the current (odd) value.
    Overflow(u128),
    /// Iteration cap hit; carries the current value.
    Exhausted(u128),
}

fn run_u128(mut v: u128, max_iterations: u64, c: &mut Counters) -> SmallOutcome {
    const ODD_MAX: u128 = (u128::MAX - 1) / 3;
    while v != 1 {
        if v & 1 == 0 {
            let tz = v.trailing_zeros() as u64;
            v >>= tz;
            c.even_steps += tz;
            c.s += tz;
        } else {
            if v > ODD_MAX {
                return SmallOutcome::Overflow(v);
            }
            c.alpha += 1;
            v = 3 * v + 1;
            c.s += 1;
        }
        if c.s > max_iterations {
            return SmallOutcome::Exhausted(v);
        }
    }
    SmallOutcome::Done
}

fn run_big(
    mut v: BigUint,
    max_iterations: u64,
    c: &mut Counters,
    odd_terms: &mut Option<Vec<BigUint>>,
) -> Result<()> {
    while !v.is_one() {
        if v.bit(0) {
            if let Some(terms) = odd_terms.as_mut() {
                terms.push(v.clone());
            }
            c.alpha += 1;
            v = &v * 3u32 + 1u32;
            c.s += 1;
        } else {
            let tz = v.trailing_zeros().unwrap_or(0);
            v >>= tz;
            c.even_steps += tz;
            c.s += tz;
        }
        if c.s > max_iterations {
            return Err(Error::NonTermination {
                last: v,
                iterations: c.s,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn stats(n: u64) -> TrajectoryStats {
        trajectory_stats(&big(n), default_max_iterations(&big(n))).unwrap()
    }

    #[test]
    fn step_examples() {
        assert_eq!(collatz_step(&big(2)).unwrap(), big(1));
        assert_eq!(collatz_step(&big(65)).unwrap(), big(196));
        assert_eq!(collatz_step(&big(196)).unwrap(), big(98));
    }

    #[test]
    fn step_rejects_terminal_and_zero() {
        assert!(matches!(collatz_step(&big(1)), Err(Error::StepDomain(_))));
        assert!(matches!(collatz_step(&big(0)), Err(Error::StepDomain(_))));
    }

    #[test]
    fn step_branch_identities() {
        // step(2k) = k and step(2k+1) = 6k+4
        for k in 1u64..=10_000 {
            assert_eq!(collatz_step(&big(2 * k)).unwrap(), big(k));
            assert_eq!(collatz_step(&big(2 * k + 1)).unwrap(), big(6 * k + 4));
        }
    }

    #[test]
    fn stats_terminal() {
        let st = stats(1);
        assert_eq!((st.s, st.alpha, st.even_steps), (0, 0, 0));
        assert!(st.odd_terms.unwrap().is_empty());
    }

    #[test]
    fn stats_65() {
        let st = stats(65);
        assert_eq!(st.s, 27);
        assert_eq!(st.alpha, 8);
        let odd: Vec<u64> = vec![65, 49, 37, 7, 11, 17, 13, 5];
        assert_eq!(
            st.odd_terms.unwrap(),
            odd.into_iter().map(big).collect::<Vec<_>>()
        );
    }

    #[test]
    fn stats_small_examples() {
        let st = stats(5);
        assert_eq!((st.s, st.alpha), (5, 1));
        let st = stats(1024);
        assert_eq!((st.s, st.alpha), (10, 0));
    }

    #[test]
    fn terms_examples() {
        let t = |n: u64| {
            trajectory_terms(&big(n), 1_000)
                .unwrap()
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        assert_eq!(t(8), "8,4,2,1");
        assert_eq!(t(5), "5,16,8,4,2,1");
        assert_eq!(t(3), "3,10,5,16,8,4,2,1");
    }

    #[test]
    fn non_termination_carries_state() {
        match trajectory_stats(&big(27), 10) {
            Err(Error::NonTermination { iterations, .. }) => assert!(iterations > 10),
            other => panic!("expected NonTermination, got {other:?}"),
        }
    }

    #[test]
    fn split_is_exhaustive_and_doubling_shifts() {
        // s = alpha + even_steps, and doubling prepends one even step.
        for n in 1u64..=100_000 {
            let st = trajectory_stats_only(&big(n), 10_000_000).unwrap();
            assert_eq!(st.s, st.alpha + st.even_steps, "n={n}");
            let st2 = trajectory_stats_only(&big(2 * n), 10_000_000).unwrap();
            assert_eq!(st2.s, st.s + 1, "n={n}");
            assert_eq!(st2.alpha, st.alpha, "n={n}");
        }
    }

    #[test]
    fn odd_terms_are_odd_and_ordered() {
        for n in 1u64..=2_000 {
            let st = stats(n);
            let terms = st.odd_terms.unwrap();
            assert_eq!(terms.len() as u64, st.alpha);
            for t in &terms {
                assert!(t.bit(0), "n={n} term {t} not odd");
            }
        }
    }

    #[test]
    fn fast_and_big_paths_agree() {
        for n in 1u64..=20_000 {
            let a = trajectory_stats_only(&big(n), 10_000_000).unwrap();
            let b = trajectory_stats(&big(n), 10_000_000).unwrap();
            assert_eq!((a.s, a.alpha, a.even_steps), (b.s, b.alpha, b.even_steps));
        }
    }

    #[test]
    fn power_of_two_alpha_zero() {
        for k in 0..200u64 {
            let n = BigUint::from(1u8) << k;
            let st = trajectory_stats_only(&n, 10_000_000).unwrap();
            assert_eq!((st.s, st.alpha), (k, 0));
        }
    }
}
