//! Exact solvers: exhaustive search, DP, IDP, split counts and the anytime search.

mod brute;
mod dp;
mod sandholm;
mod splits;

pub use brute::{brute_force_optimal, brute_force_search, BRUTE_FORCE_MAX_AGENTS};
pub use dp::{dp_optimal, fill_tables, idp_optimal, DpTables};
pub use sandholm::{sandholm_anytime, AnytimePhase, AnytimeResult};
pub use splits::{split_count, splitting_counts, SplitCounts};

use crate::structure::CoalitionStructure;

/// An optimal structure with its value and the work spent finding it.
#[derive(Debug, Clone)]
pub struct ExactSolution {
    pub structure: CoalitionStructure,
    pub value: f64,
    /// Split evaluations for DP and IDP; structures visited for brute force.
    pub evaluations: u64,
}
