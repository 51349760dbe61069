//! Coalition structures in canonical form.
//!
//! A structure is kept as the list of its block masks ordered by smallest
//! member. Because agent `a1` owns the most significant bit, that ordering is
//! simply descending mask order, and the restricted growth string (RGS) is
//! recovered by labelling blocks `1..=k` in that order.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::ops::RangeInclusive;
use std::str::FromStr;

use crate::coalition::{agent_bit, check_agent_count, CoalitionIndex};
use crate::error::{CsgError, Result};

/// A partition of the agents `1..=n`, canonical by construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoalitionStructure {
    n: usize,
    blocks: Vec<u32>,
}

impl CoalitionStructure {
    /// Builds a structure from arbitrary block labels, relabelling by first appearance.
    pub fn from_labels<T: Eq + Hash + Copy>(labels: &[T]) -> Result<Self> {
        let n = labels.len();
        check_agent_count(n)?;
        let mut ids: HashMap<T, usize> = HashMap::new();
        let mut blocks: Vec<u32> = Vec::new();
        for (pos, label) in labels.iter().enumerate() {
            let next = ids.len();
            let id = *ids.entry(*label).or_insert(next);
            if id == blocks.len() {
                blocks.push(0);
            }
            blocks[id] |= agent_bit(pos + 1, n);
        }
        Ok(Self { n, blocks })
    }

    /// Builds a structure from block masks, validating that they partition `1..=n`.
    pub fn from_blocks(n: usize, blocks: impl IntoIterator<Item = u32>) -> Result<Self> {
        check_agent_count(n)?;
        let full = full_mask(n);
        let mut seen = 0u32;
        let mut list = Vec::new();
        for b in blocks {
            if b == 0 {
                return Err(CsgError::InvalidStructure("empty block".into()));
            }
            if b & !full != 0 {
                return Err(CsgError::InvalidStructure(format!(
                    "block {b} has agents outside 1..={n}"
                )));
            }
            if b & seen != 0 {
                return Err(CsgError::InvalidStructure("blocks overlap".into()));
            }
            seen |= b;
            list.push(b);
        }
        if seen != full {
            return Err(CsgError::InvalidStructure(
                "blocks do not cover every agent".into(),
            ));
        }
        Ok(Self::from_blocks_unchecked(n, list))
    }

    pub(crate) fn from_blocks_unchecked(n: usize, mut blocks: Vec<u32>) -> Self {
        blocks.sort_unstable_by(|a, b| b.cmp(a));
        debug_assert!(blocks.iter().fold(0u32, |acc, b| acc | b) == full_mask(n));
        Self { n, blocks }
    }

    /// The single-block structure `{N}`.
    pub fn grand(n: usize) -> Result<Self> {
        check_agent_count(n)?;
        Ok(Self {
            n,
            blocks: vec![full_mask(n)],
        })
    }

    /// The all-singletons structure.
    pub fn singletons(n: usize) -> Result<Self> {
        check_agent_count(n)?;
        Ok(Self {
            n,
            blocks: (1..=n).map(|a| agent_bit(a, n)).collect(),
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Block masks in canonical order.
    #[inline]
    pub fn blocks(&self) -> &[u32] {
        &self.blocks
    }

    pub fn coalitions(&self) -> impl Iterator<Item = CoalitionIndex> + '_ {
        self.blocks
            .iter()
            .map(|&b| CoalitionIndex::from_mask_unchecked(b))
    }

    /// Canonical block index (0-based) of `agent`.
    pub fn block_of(&self, agent: usize) -> usize {
        let bit = agent_bit(agent, self.n);
        self.blocks
            .iter()
            .position(|&b| b & bit != 0)
            .expect("every agent belongs to a block")
    }

    /// Restricted growth string `d1..dn`, labels starting at 1.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.n];
        for (id, &b) in self.blocks.iter().enumerate() {
            for (agent, label) in labels.iter_mut().enumerate() {
                if b & agent_bit(agent + 1, self.n) != 0 {
                    *label = id + 1;
                }
            }
        }
        labels
    }

    /// Members of each block, e.g. `[[1, 2], [3], [4]]`.
    pub fn block_members(&self) -> Vec<Vec<usize>> {
        self.coalitions().map(|c| c.members(self.n)).collect()
    }

    /// Set notation, e.g. `{{1,2},{3},{4}}`.
    pub fn to_block_string(&self) -> String {
        let inner: Vec<String> = self
            .block_members()
            .iter()
            .map(|m| {
                let ids: Vec<String> = m.iter().map(|a| a.to_string()).collect();
                format!("{{{}}}", ids.join(","))
            })
            .collect();
        format!("{{{}}}", inner.join(","))
    }
}

/// Relabels blocks in order of first appearance.
pub fn canonicalize<T: Eq + Hash + Copy>(labels: &[T]) -> Result<CoalitionStructure> {
    CoalitionStructure::from_labels(labels)
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

const LABEL_DIGITS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";

/// RGS with one character per agent: `1`..`9`, then `a`, `b`, ... for labels 10 and up.
impl fmt::Display for CoalitionStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for label in self.labels() {
            write!(f, "{}", LABEL_DIGITS[label] as char)?;
        }
        Ok(())
    }
}

impl FromStr for CoalitionStructure {
    type Err = CsgError;

    fn from_str(s: &str) -> Result<Self> {
        let labels = s
            .trim()
            .chars()
            .map(|c| {
                c.to_digit(36)
                    .filter(|&d| d > 0)
                    .ok_or_else(|| CsgError::InvalidStructure(format!("bad label {c:?}")))
            })
            .collect::<Result<Vec<u32>>>()?;
        Self::from_labels(&labels)
    }
}

/// Depth-first enumeration of all partitions of `1..=n` whose block count lies in
/// `blocks`, in lexicographic RGS order. The visitor receives canonical block
/// masks and returns `false` to stop early; the function returns `false` if it
/// was stopped.
pub(crate) fn for_each_partition<F: FnMut(&[u32]) -> bool>(
    n: usize,
    blocks: RangeInclusive<usize>,
    mut visit: F,
) -> bool {
    fn rec<F: FnMut(&[u32]) -> bool>(
        agent: usize,
        n: usize,
        kmin: usize,
        kmax: usize,
        current: &mut Vec<u32>,
        visit: &mut F,
    ) -> bool {
        if agent > n {
            return current.len() < kmin || visit(current);
        }
        let remaining = n - agent + 1;
        let bit = agent_bit(agent, n);
        // joining an existing block only works if enough agents remain to open the missing ones
        if current.len() + remaining > kmin {
            for j in 0..current.len() {
                current[j] |= bit;
                let go_on = rec(agent + 1, n, kmin, kmax, current, visit);
                current[j] ^= bit;
                if !go_on {
                    return false;
                }
            }
        }
        if current.len() < kmax {
            current.push(bit);
            let go_on = rec(agent + 1, n, kmin, kmax, current, visit);
            current.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
    let (kmin, kmax) = (*blocks.start(), (*blocks.end()).min(n));
    if kmin > kmax {
        return true;
    }
    let mut current = Vec::with_capacity(n);
    rec(1, n, kmin, kmax, &mut current, &mut visit)
}

/// Every coalition structure over `n` agents, in lexicographic RGS order.
pub fn all_structures(n: usize) -> Result<Vec<CoalitionStructure>> {
    check_agent_count(n)?;
    let mut out = Vec::new();
    for_each_partition(n, 1..=n, |b| {
        out.push(CoalitionStructure {
            n,
            blocks: b.to_vec(),
        });
        true
    });
    Ok(out)
}
