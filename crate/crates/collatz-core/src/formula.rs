//! Exact integer evaluation of the stopping-time formula
//! `S = ceil(log2(6^alpha * N))` and high-precision computation of the
//! residue `eps(N) = S - log2(6^alpha * N)`.
//!
//! The formula verdict is decided purely in big-integer arithmetic (bit
//! length of `3^alpha * n - 1`); at hundred-thousand-bit scale any float
//! log is meaningless. Floating point only appears in `residue`, which
//! feeds histograms and the empirical bound check.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::trajectory::TrajectoryStats;

/// `ceil(log2(m))` computed exactly: 0 for `m = 1`, else `bitlen(m - 1)`.
pub fn ceil_log2(m: &BigUint) -> Result<u64> {
    if m.is_zero() {
        return Err(Error::ZeroArgument);
    }
    if m.is_one() {
        Ok(0)
    } else {
        Ok((m - 1u32).bits())
    }
}

/// Incrementally grown table of powers of 3. Batch sweeps touch consecutive
/// `alpha` values constantly, and binary exponentiation per call is the
/// dominant cost at large `alpha`. Confine one cache per worker; it is not
/// shared.
#[derive(Default)]
pub struct Pow3Cache {
    powers: Vec<BigUint>,
}

impl Pow3Cache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, alpha: u64) -> &BigUint {
        let alpha = alpha as usize;
        if self.powers.is_empty() {
            self.powers.push(BigUint::one());
        }
        while self.powers.len() <= alpha {
            let next = self.powers.last().unwrap() * 3u32;
            self.powers.push(next);
        }
        &self.powers[alpha]
    }
}

/// `alpha + ceil(log2(3^alpha * n))`, which equals
/// `ceil(log2(6^alpha * n))` without materializing the `2^alpha` factor.
pub fn predicted_stopping_time(n: &BigUint, alpha: u64) -> Result<u64> {
    let mut cache = Pow3Cache::new();
    predicted_stopping_time_cached(n, alpha, &mut cache)
}

pub fn predicted_stopping_time_cached(
    n: &BigUint,
    alpha: u64,
    cache: &mut Pow3Cache,
) -> Result<u64> {
    if n.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let m = cache.get(alpha) * n;
    Ok(alpha + ceil_log2(&m)?)
}

/// Outcome of comparing the true stopping time against the formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaVerdict {
    Holds { s: u64 },
    Violated { true_s: u64, predicted_s: u64 },
}

impl FormulaVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, FormulaVerdict::Holds { .. })
    }
}

/// Compare `stats.s` against the formula prediction, integer arithmetic
/// only.
pub fn check_formula(stats: &TrajectoryStats) -> Result<FormulaVerdict> {
    let mut cache = Pow3Cache::new();
    check_formula_cached(stats, &mut cache)
}

pub fn check_formula_cached(stats: &TrajectoryStats, cache: &mut Pow3Cache) -> Result<FormulaVerdict> {
    let predicted = predicted_stopping_time_cached(&stats.n, stats.alpha, cache)?;
    if predicted == stats.s {
        Ok(FormulaVerdict::Holds { s: stats.s })
    } else {
        Ok(FormulaVerdict::Violated {
            true_s: stats.s,
            predicted_s: predicted,
        })
    }
}

/// `eps(N) = S - log2(6^alpha * N)` as a float with absolute error well
/// below 1e-12.
///
/// Written as `(S - alpha - (bitlen(m) - 1)) - log2frac(m)` with
/// `m = 3^alpha * n`: the integer part is exact, and `log2frac` is the
/// fractional part of `log2(m)` computed from the top 96 bits of `m`, so
/// no cancellation occurs regardless of magnitude.
pub fn residue(stats: &TrajectoryStats) -> f64 {
    let mut cache = Pow3Cache::new();
    residue_cached(stats, &mut cache)
}

pub fn residue_cached(stats: &TrajectoryStats, cache: &mut Pow3Cache) -> f64 {
    let m = cache.get(stats.alpha) * &stats.n;
    let int_part = stats.s as i64 - stats.alpha as i64 - (m.bits() as i64 - 1);
    int_part as f64 - log2_frac(&m)
}

/// Fractional part of `log2(m)` in `[0, 1)`, from the top 96 bits of `m`.
pub fn log2_frac(m: &BigUint) -> f64 {
    debug_assert!(!m.is_zero());
    let b = m.bits();
    let k = b.min(96);
    let top = (m >> (b - k)).to_u128().unwrap();
    let mantissa = top as f64 / 2f64.powi(k as i32 - 1); // in [1, 2)
    mantissa.log2()
}

/// `log2(m)` as a float: exact integer part plus `log2_frac`.
pub fn log2_approx(m: &BigUint) -> f64 {
    (m.bits() as f64 - 1.0) + log2_frac(m)
}

/// Fractional bits of `log2(m)` as a fixed-point integer scaled by
/// `2^frac_bits`, via the squaring algorithm on big-integer fixed point.
pub fn log2_frac_fixed(m: &BigUint, frac_bits: u32) -> BigUint {
    let b = m.bits();
    // x = floor(mantissa * 2^F) with mantissa = m / 2^(b-1) in [1, 2)
    let mut x = (m << frac_bits) >> (b - 1);
    let two_f = BigUint::one() << frac_bits;
    let limit = &two_f << 1u32;
    let mut out = BigUint::zero();
    for _ in 0..frac_bits {
        x = (&x * &x) >> frac_bits;
        out <<= 1u32;
        if x >= limit {
            x >>= 1u32;
            out += 1u32;
        }
    }
    out
}

const HP_FRAC_BITS: u32 = 256;

/// Decide `eps(N) < num/den` with 256 fractional bits of precision.
/// Used to adjudicate residues that sit within float noise of the
/// empirical bound.
pub fn residue_below_cached(
    stats: &TrajectoryStats,
    num: u64,
    den: u64,
    cache: &mut Pow3Cache,
) -> bool {
    let m = cache.get(stats.alpha) * &stats.n;
    let int_part = stats.s as i64 - stats.alpha as i64 - (m.bits() as i64 - 1);
    let frac = log2_frac_fixed(&m, HP_FRAC_BITS);
    // eps * 2^F = int_part * 2^F - frac ; compare den * that against num * 2^F
    let scaled_int = BigInt::from(int_part) << HP_FRAC_BITS;
    let eps_fixed = scaled_int - BigInt::from_biguint(Sign::Plus, frac);
    let lhs = eps_fixed * BigInt::from(den);
    let rhs = BigInt::from(num) << HP_FRAC_BITS;
    lhs < rhs
}
