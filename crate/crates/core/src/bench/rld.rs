//! Empirical run-length distributions.

use serde::{Deserialize, Serialize};

use super::RunRecord;

/// One step of an empirical run-length distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RldPoint {
    pub ops: u64,
    pub cumulative_probability: f64,
}

/// `P(T <= t)` at every distinct run length of a successful run, where `k`
/// counts all records. Runs are successful if flagged so and within `cutoff`.
/// The last point carries the successful fraction; an empty curve means no run succeeded.
pub fn empirical_rld(records: &[RunRecord], cutoff: u64) -> Vec<RldPoint> {
    let k = records.len() as f64;
    let mut lengths: Vec<u64> = records
        .iter()
        .filter(|r| r.success && r.ops.total() <= cutoff)
        .map(|r| r.ops.total())
        .collect();
    lengths.sort_unstable();
    let mut curve: Vec<RldPoint> = Vec::new();
    for (i, &t) in lengths.iter().enumerate() {
        let p = (i + 1) as f64 / k;
        match curve.last_mut() {
            Some(last) if last.ops == t => last.cumulative_probability = p,
            _ => curve.push(RldPoint {
                ops: t,
                cumulative_probability: p,
            }),
        }
    }
    curve
}

/// Evaluates the step function at `t`.
pub fn rld_at(curve: &[RldPoint], t: u64) -> f64 {
    curve
        .iter()
        .take_while(|p| p.ops <= t)
        .last()
        .map_or(0.0, |p| p.cumulative_probability)
}
