//! Dynamic programming over all coalitions (DP) and its pruned variant (IDP).

use crate::coalition::top_bit;
use crate::error::{CsgError, Result};
use crate::instance::Instance;
use crate::structure::{full_mask, CoalitionStructure};

use super::splits::idp_keeps;
use super::ExactSolution;

/// Best split and best value per coalition.
#[derive(Debug, Clone)]
pub struct DpTables {
    n: usize,
    // 0 means the coalition is best kept whole
    split: Vec<u32>,
    value: Vec<f64>,
}

impl DpTables {
    /// Best known split of `mask` as `(part, rest)`, or `None` to keep it whole.
    pub fn best_split(&self, mask: u32) -> Option<(u32, u32)> {
        let part = self.split[mask as usize];
        (part != 0).then_some((part, mask ^ part))
    }

    /// Best value found for `mask`.
    pub fn best_value(&self, mask: u32) -> f64 {
        self.value[mask as usize]
    }

    /// Follows the recorded splits down from the grand coalition.
    pub fn reconstruct(&self) -> CoalitionStructure {
        let mut blocks = Vec::new();
        let mut stack = vec![full_mask(self.n)];
        while let Some(c) = stack.pop() {
            match self.best_split(c) {
                Some((a, b)) => {
                    stack.push(a);
                    stack.push(b);
                }
                None => blocks.push(c),
            }
        }
        CoalitionStructure::from_blocks_unchecked(self.n, blocks)
    }
}

/// Coalitions of exactly `size` agents among `n`, ascending.
fn masks_of_size(n: usize, size: usize) -> impl Iterator<Item = u32> {
    let limit = 1u64 << n;
    let mut next = if size == 0 { limit } else { (1u64 << size) - 1 };
    std::iter::from_fn(move || {
        if next >= limit {
            return None;
        }
        let c = next;
        // Gosper's hack
        let low = c & c.wrapping_neg();
        let ripple = c + low;
        next = (((ripple ^ c) >> 2) / low) | ripple;
        Some(c as u32)
    })
}

fn check_size(inst: &Instance) -> Result<()> {
    // the agent-count guard of `Instance` already caps n at 26
    if inst.n() > crate::coalition::MAX_AGENTS {
        return Err(CsgError::AgentCountOutOfRange {
            n: inst.n(),
            min: 1,
            max: crate::coalition::MAX_AGENTS,
        });
    }
    Ok(())
}

/// Fills both tables in ascending cardinality. With `pruned`, only splits IDP
/// evaluates are considered. Returns the tables and the number of splits evaluated.
pub fn fill_tables(inst: &Instance, pruned: bool) -> (DpTables, u64) {
    let n = inst.n();
    let size = 1usize << n;
    let mut split = vec![0u32; size];
    let mut value = vec![0.0f64; size];
    let mut evaluations = 0u64;
    for s in 1..=n {
        for c in masks_of_size(n, s) {
            let mut best = inst.mask_value(c);
            let mut best_part = 0u32;
            let rest = c ^ top_bit(c);
            // ascending non-empty submasks of `rest`; the part holding the top bit is `c ^ part`
            let mut part = 0u32;
            loop {
                part = part.wrapping_sub(rest) & rest;
                if part == 0 {
                    break;
                }
                if pruned {
                    let small = part.count_ones() as usize;
                    if !idp_keeps(n, s, small.max(s - small)) {
                        continue;
                    }
                }
                evaluations += 1;
                let v = value[part as usize] + value[(c ^ part) as usize];
                if v > best {
                    best = v;
                    best_part = part;
                }
            }
            split[c as usize] = best_part;
            value[c as usize] = best;
        }
    }
    (DpTables { n, split, value }, evaluations)
}

fn solve(inst: &Instance, pruned: bool) -> Result<ExactSolution> {
    check_size(inst)?;
    let (tables, evaluations) = fill_tables(inst, pruned);
    let structure = tables.reconstruct();
    let value = inst.blocks_value(structure.blocks());
    Ok(ExactSolution {
        structure,
        value,
        evaluations,
    })
}

/// Optimal structure by DP; `evaluations` counts split evaluations.
pub fn dp_optimal(inst: &Instance) -> Result<ExactSolution> {
    solve(inst, false)
}

/// Optimal structure by IDP; `evaluations` counts split evaluations.
pub fn idp_optimal(inst: &Instance) -> Result<ExactSolution> {
    solve(inst, true)
}
