//! Bitmask encoding of coalitions.
//!
//! A coalition over `n` agents is read as the bit string `b1 b2 ... bn` with
//! `b1` the most significant bit, so agent `a_i` maps to bit `n - i`. With four
//! agents, `{a2, a3}` is `0110 = 6` and `{a4}` is `0001 = 1`.

use std::fmt;

use crate::error::{CsgError, Result};

/// Largest agent count supported by the dense value table.
pub const MAX_AGENTS: usize = 26;

/// Bit of agent `agent` (1-based) in an `n`-agent mask.
#[inline]
pub fn agent_bit(agent: usize, n: usize) -> u32 {
    debug_assert!(agent >= 1 && agent <= n);
    1u32 << (n - agent)
}

/// Agent id (1-based) carried by a single-bit mask.
#[inline]
pub fn bit_agent(bit: u32, n: usize) -> usize {
    debug_assert!(bit.is_power_of_two());
    n - bit.trailing_zeros() as usize
}

/// Highest set bit of a non-zero mask, i.e. the member with the smallest agent id.
#[inline]
pub fn top_bit(mask: u32) -> u32 {
    debug_assert!(mask != 0);
    1u32 << (31 - mask.leading_zeros())
}

/// A non-empty coalition, stored as its index into the value table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoalitionIndex(u32);

impl CoalitionIndex {
    /// Wraps a raw mask after checking `1 <= index < 2^n`.
    pub fn new(index: u64, n: usize) -> Result<Self> {
        check_agent_count(n)?;
        if index == 0 || index >= 1u64 << n {
            return Err(CsgError::IndexOutOfRange { index, n });
        }
        Ok(Self(index as u32))
    }

    pub(crate) fn from_mask_unchecked(mask: u32) -> Self {
        debug_assert!(mask != 0);
        Self(mask)
    }

    #[inline]
    pub fn mask(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn size(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Member agent ids in ascending order.
    pub fn members(self, n: usize) -> Vec<usize> {
        decode_coalition(self, n)
    }
}

impl fmt::Display for CoalitionIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub(crate) fn check_agent_count(n: usize) -> Result<()> {
    if n == 0 || n > MAX_AGENTS {
        return Err(CsgError::AgentCountOutOfRange {
            n,
            min: 1,
            max: MAX_AGENTS,
        });
    }
    Ok(())
}

/// Encodes a set of 1-based agent ids as a coalition index.
pub fn encode_coalition<I>(members: I, n: usize) -> Result<CoalitionIndex>
where
    I: IntoIterator<Item = usize>,
{
    check_agent_count(n)?;
    let mut mask = 0u32;
    for agent in members {
        if agent == 0 || agent > n {
            return Err(CsgError::AgentOutOfRange { agent, n });
        }
        mask |= agent_bit(agent, n);
    }
    if mask == 0 {
        return Err(CsgError::EmptyCoalition);
    }
    Ok(CoalitionIndex(mask))
}

/// Inverse of [`encode_coalition`]: member ids in ascending order.
pub fn decode_coalition(index: CoalitionIndex, n: usize) -> Vec<usize> {
    (1..=n)
        .filter(|&agent| index.0 & agent_bit(agent, n) != 0)
        .collect()
}

/// Iterates the single-bit masks of `mask` from the highest bit (smallest agent id) down.
pub(crate) fn bits_desc(mut mask: u32) -> impl Iterator<Item = u32> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = top_bit(mask);
            mask ^= b;
            Some(b)
        }
    })
}

/// Scatters the low bits of `value` onto the set bits of `mask` (lowest first).
pub(crate) fn deposit_bits(mut value: u64, mut mask: u32) -> u32 {
    let mut out = 0u32;
    while mask != 0 && value != 0 {
        let low = mask & mask.wrapping_neg();
        if value & 1 == 1 {
            out |= low;
        }
        value >>= 1;
        mask ^= low;
    }
    out
}
