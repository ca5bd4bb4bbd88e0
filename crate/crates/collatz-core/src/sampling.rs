//! Seeded, reproducible sampling of random big integers.
//!
//! Sampling law: bit length `L` uniform in `[1, max_bits]`, then a uniform
//! `L`-bit integer with the top bit forced to 1. Uniform over the whole
//! interval `[1, 2^max_bits]` would almost surely pick max-length integers
//! only; this law actually exercises every magnitude.
//!
//! Generator: ChaCha8, seeded from the campaign seed with the sample index
//! as the stream number. Each sample is therefore a pure function of
//! `(seed, index, max_bits)`, independent of worker count or evaluation
//! order.

use num_bigint::BigUint;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn sample_natural(seed: u64, index: u64, max_bits: u64) -> BigUint {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let bits = rng.gen_range(1..=max_bits);
    let nbytes = bits.div_ceil(8) as usize;
    let mut bytes = vec![0u8; nbytes];
    rng.fill_bytes(&mut bytes);
    // Mask down to exactly `bits` bits, then force the top bit.
    let top_bit = ((bits - 1) % 8) as u32;
    bytes[0] &= ((1u16 << (top_bit + 1)) - 1) as u8;
    bytes[0] |= 1 << top_bit;
    BigUint::from_bytes_be(&bytes)
}
