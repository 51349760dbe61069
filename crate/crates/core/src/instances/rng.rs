//! Reproducible random streams.
//!
//! Every stochastic component draws from xoshiro256++ seeded through
//! SplitMix64 (`seed_from_u64`). Uniform reals take the top 53 bits of one
//! output; normal variates use the Box–Muller cosine branch and consume two
//! uniforms per draw, with no cached second variate.

use rand::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

/// The generator used throughout the crate.
pub type CsgRng = Xoshiro256PlusPlus;

pub fn rng_from_seed(seed: u64) -> CsgRng {
    CsgRng::seed_from_u64(seed)
}

/// Uniform draw in `[0, 1)`.
#[inline]
pub fn uniform01<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Standard normal draw (Box–Muller).
pub fn standard_normal<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    // 1 - u lies in (0, 1], so the log is finite
    let u1 = 1.0 - uniform01(rng);
    let u2 = uniform01(rng);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// SplitMix64 finalizer, used to derive independent child seeds.
pub fn mix_seed(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for stream `index` under `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    mix_seed(master ^ mix_seed(index))
}
