//! Operation accounting, run records, run-length distributions and statistics.

mod counter;
mod csv_io;
mod experiment;
mod rld;
mod stats;

pub use counter::OperationCounter;
pub use csv_io::{read_records, write_records, write_rld, write_stats, CsvError};
pub use experiment::{is_success, quality, run_experiment, Algorithm, ExperimentConfig};
pub use rld::{empirical_rld, rld_at, RldPoint};
pub use stats::{describe, nearest_rank, variation_coefficient, Stats};

/// Outcome of one seeded solver run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub run_id: u64,
    pub seed: u64,
    pub ops: OperationCounter,
    pub iterations: u64,
    pub best_value: f64,
    /// `optimum / best_value`, at least 1.
    pub quality: f64,
    pub success: bool,
    /// Seconds; informational only and never written to CSV.
    pub wall_time: f64,
}
