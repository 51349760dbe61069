//! Random instance generation under the five benchmark value distributions,
//! and the text instance format.

mod io;
mod rng;

use std::fmt;
use std::str::FromStr;

use rand::RngCore;

pub use io::{read_instance, write_instance, FormatError, FormatErrorKind};
pub use rng::{derive_seed, mix_seed, rng_from_seed, standard_normal, uniform01, CsgRng};

use crate::coalition::check_agent_count;
use crate::error::{CsgError, Result};
use crate::instance::{Instance, InstanceMeta};

/// Characteristic-function value distributions.
///
/// | tag | draw for coalition `C` |
/// |-----|------------------------|
/// | U   | `U(0, 1)` |
/// | US  | `|C| * U(0, 1)` |
/// | N   | `N(1, 0.1^2)` |
/// | NS  | `|C| * N(1, 0.1^2)` |
/// | ND  | `N(|C|, |C|)` (standard deviation `sqrt|C|`) |
///
/// Negative normal draws are clamped to 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Distribution {
    Uniform,
    UniformScaled,
    Normal,
    NormalScaled,
    NormallyDistributed,
}

impl Distribution {
    pub const ALL: [Distribution; 5] = [
        Distribution::Uniform,
        Distribution::UniformScaled,
        Distribution::Normal,
        Distribution::NormalScaled,
        Distribution::NormallyDistributed,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Distribution::Uniform => "U",
            Distribution::UniformScaled => "US",
            Distribution::Normal => "N",
            Distribution::NormalScaled => "NS",
            Distribution::NormallyDistributed => "ND",
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Distribution {
    type Err = CsgError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "U" => Ok(Distribution::Uniform),
            "US" => Ok(Distribution::UniformScaled),
            "N" => Ok(Distribution::Normal),
            "NS" => Ok(Distribution::NormalScaled),
            "ND" => Ok(Distribution::NormallyDistributed),
            other => Err(CsgError::InvalidParameter(format!(
                "unknown distribution {other:?} (expected U, US, N, NS or ND)"
            ))),
        }
    }
}

const NORMAL_MEAN: f64 = 1.0;
const NORMAL_STDDEV: f64 = 0.1;

/// One coalition value for a coalition of `size` agents.
pub fn sample_value<R: RngCore + ?Sized>(kind: Distribution, size: usize, rng: &mut R) -> f64 {
    debug_assert!(size >= 1);
    let s = size as f64;
    let draw = match kind {
        Distribution::Uniform => uniform01(rng),
        Distribution::UniformScaled => s * uniform01(rng),
        Distribution::Normal => NORMAL_MEAN + NORMAL_STDDEV * standard_normal(rng),
        Distribution::NormalScaled => s * (NORMAL_MEAN + NORMAL_STDDEV * standard_normal(rng)),
        Distribution::NormallyDistributed => s + s.sqrt() * standard_normal(rng),
    };
    draw.max(0.0)
}

/// Fills all `2^n - 1` values in ascending index order from one stream seeded by `seed`.
pub fn generate_instance(n: usize, kind: Distribution, seed: u64) -> Result<Instance> {
    check_agent_count(n)?;
    let mut rng = rng_from_seed(seed);
    Instance::from_fn(
        n,
        InstanceMeta {
            dist: Some(kind),
            seed: Some(seed),
        },
        |mask| sample_value(kind, mask.count_ones() as usize, &mut rng),
    )
}
