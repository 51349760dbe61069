//! Coalition structure generation.
//!
//! Agents `1..=n` are partitioned into coalitions whose values come from a
//! characteristic function table; the goal is the partition of maximum total
//! value. The crate provides stochastic local search (GRASP, GRASP with
//! path-relinking, randomised iterative improvement), exact solvers (brute
//! force, DP, IDP and an anytime search with a worst-case bound), random
//! instance generators and a run-length benchmarking harness.

pub mod bench;
pub mod cli;
pub mod coalition;
pub mod counting;
pub mod error;
pub mod exact;
pub mod grasp;
pub mod instance;
pub mod instances;
pub mod neighborhoods;
pub mod pathrelink;
pub mod structure;

pub use coalition::{decode_coalition, encode_coalition, CoalitionIndex, MAX_AGENTS};
pub use error::{CsgError, Result};
pub use instance::{cs_value, Instance, InstanceMeta};
pub use structure::{all_structures, canonicalize, CoalitionStructure};
