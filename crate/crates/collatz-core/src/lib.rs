//! Collatz trajectory statistics and stopping-time analysis with
//! arbitrary-precision integers.
//!
//! The toolkit is organized around the identity between the total stopping
//! time `S` of a Collatz trajectory (number of map applications until 1 is
//! reached) and the count `alpha` of odd terms in the trajectory:
//!
//! ```text
//! S = ceil(log2(6^alpha * N))
//! ```
//!
//! Everything that decides whether this identity holds is computed in exact
//! integer arithmetic; floating point only feeds the residue histogram.
//!
//! Modules:
//! - [`trajectory`]: the map itself and per-`N` statistics (`S`, `alpha`,
//!   even-step count, odd-term list).
//! - [`formula`]: exact evaluation of the stopping-time formula and the
//!   residue `eps(N) = S - log2(6^alpha N)`.
//! - [`verifier`]: batch campaigns (exhaustive ranges, random big integers)
//!   with mergeable residue histograms and resumable checkpoints.
//! - [`sieve`]: allowed/prohibited stopping-time sets and their recursive
//!   propagation through the four step relations.
//! - [`alpha`]: enumeration of the constant-`alpha` classes and curve data.
//! - [`emit`]: CSV / JSONL emitters for every figure and table dataset.

pub mod alpha;
pub mod checkpoint;
pub mod emit;
pub mod error;
pub mod formula;
pub mod histogram;
pub mod sampling;
pub mod sieve;
pub mod trajectory;
pub mod verifier;

pub use error::{Error, Result};
pub use trajectory::{
    collatz_step, default_max_iterations, trajectory_stats, trajectory_stats_only,
    trajectory_terms, TrajectoryStats,
};

/// Arbitrary-precision nonnegative integer, the sole numeric currency of the
/// math core.
pub type Natural = num_bigint::BigUint;

/// Parse a `Natural` from a decimal string. Rejects empty strings, signs and
/// any non-digit character.
pub fn parse_natural(s: &str) -> Result<Natural> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::InvalidNatural(s.to_owned()));
    }
    s.parse::<Natural>()
        .map_err(|_| Error::InvalidNatural(s.to_owned()))
}
