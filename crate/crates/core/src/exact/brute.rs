//! Exhaustive search over every coalition structure.

use crate::error::{CsgError, Result};
use crate::instance::Instance;
use crate::structure::{for_each_partition, CoalitionStructure};

use super::ExactSolution;

/// Largest agent count accepted by exhaustive search (Bell(13) = 27 644 437 structures).
pub const BRUTE_FORCE_MAX_AGENTS: usize = 13;

/// Enumerates every structure; `evaluations` is the number of structures visited.
/// Ties go to the lexicographically smallest RGS.
pub fn brute_force_search(inst: &Instance) -> Result<ExactSolution> {
    let n = inst.n();
    if n > BRUTE_FORCE_MAX_AGENTS {
        return Err(CsgError::AgentCountOutOfRange {
            n,
            min: 1,
            max: BRUTE_FORCE_MAX_AGENTS,
        });
    }
    let mut best: Vec<u32> = Vec::new();
    let mut best_value = f64::NEG_INFINITY;
    let mut visited = 0u64;
    for_each_partition(n, 1..=n, |blocks| {
        visited += 1;
        let v = inst.blocks_value(blocks);
        if v > best_value {
            best_value = v;
            best.clear();
            best.extend_from_slice(blocks);
        }
        true
    });
    Ok(ExactSolution {
        structure: CoalitionStructure::from_blocks_unchecked(n, best),
        value: best_value,
        evaluations: visited,
    })
}

/// Optimal structure and its value by exhaustive enumeration.
pub fn brute_force_optimal(inst: &Instance) -> Result<(CoalitionStructure, f64)> {
    brute_force_search(inst).map(|s| (s.structure, s.value))
}
