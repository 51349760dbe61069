//! Descriptive statistics over run lengths.

use serde::{Deserialize, Serialize};

use super::RunRecord;
use crate::error::{CsgError, Result};

/// Summary of the total operation counts of a set of runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub runs: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// Population standard deviation.
    pub stddev: f64,
    /// Variation coefficient `stddev / mean`.
    pub vc: f64,
    /// Ratio of the 0.75 and 0.25 quantiles.
    pub quantile_ratio: f64,
    pub opt_count: usize,
}

/// `stddev / mean`, or 0 when the mean is 0.
pub fn variation_coefficient(mean: f64, stddev: f64) -> f64 {
    if mean == 0.0 {
        0.0
    } else {
        stddev / mean
    }
}

/// Nearest-rank quantile of an ascending, non-empty slice.
pub fn nearest_rank(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    let rank = (p * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

/// Statistics of `ops_total` over every record. Unsuccessful runs enter with
/// the operations they spent before hitting the cutoff.
pub fn describe(records: &[RunRecord]) -> Result<Stats> {
    if records.is_empty() {
        return Err(CsgError::EmptyRecords);
    }
    let mut ops: Vec<f64> = records.iter().map(|r| r.ops.total() as f64).collect();
    ops.sort_by(f64::total_cmp);
    let k = ops.len() as f64;
    // sum of a sorted sample keeps the result independent of record order
    let mean = ops.iter().sum::<f64>() / k;
    let var = ops.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / k;
    let stddev = var.sqrt();
    let q25 = nearest_rank(&ops, 0.25);
    let q75 = nearest_rank(&ops, 0.75);
    let quantile_ratio = if q25 == 0.0 {
        if q75 == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        q75 / q25
    };
    Ok(Stats {
        runs: records.len(),
        mean,
        min: ops[0],
        max: ops[ops.len() - 1],
        stddev,
        vc: variation_coefficient(mean, stddev),
        quantile_ratio,
        opt_count: records.iter().filter(|r| r.success).count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::OperationCounter;
    use proptest::prelude::*;

    fn record(run_id: u64, ops: u64, success: bool) -> RunRecord {
        RunRecord {
            run_id,
            seed: run_id,
            ops: OperationCounter {
                construction: ops / 3,
                local_search: ops - ops / 3,
                relink: 0,
            },
            iterations: 1,
            best_value: 1.0,
            quality: if success { 1.0 } else { 1.5 },
            success,
            wall_time: 0.0,
        }
    }

    #[test]
    fn empty_is_an_error() {
        assert!(describe(&[]).is_err());
    }

    #[test]
    fn constant_sample() {
        let recs: Vec<_> = (0..7).map(|i| record(i, 100, i % 2 == 0)).collect();
        let s = describe(&recs).unwrap();
        assert_eq!(s.mean, 100.0);
        assert_eq!(s.stddev, 0.0);
        assert_eq!(s.vc, 0.0);
        assert_eq!(s.quantile_ratio, 1.0);
        assert_eq!(s.opt_count, 4);
    }

    #[test]
    fn nearest_rank_examples() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(nearest_rank(&x, 0.25), 1.0);
        assert_eq!(nearest_rank(&x, 0.75), 3.0);
        assert_eq!(nearest_rank(&x, 0.5), 2.0);
        assert_eq!(nearest_rank(&x, 1.0), 4.0);
        assert_eq!(nearest_rank(&x, 0.0), 1.0);
        let y = [10.0, 20.0, 30.0, 40.0, 50.0];
        assert_eq!(nearest_rank(&y, 0.25), 20.0);
        assert_eq!(nearest_rank(&y, 0.75), 40.0);
    }

    #[test]
    fn small_sample_by_hand() {
        // ops 2, 4, 4, 4, 5, 5, 7, 9: mean 5, population stddev 2
        let recs: Vec<_> = [2, 4, 4, 4, 5, 5, 7, 9]
            .iter()
            .enumerate()
            .map(|(i, &o)| record(i as u64, o, true))
            .collect();
        let s = describe(&recs).unwrap();
        assert_eq!(s.mean, 5.0);
        assert_eq!(s.stddev, 2.0);
        assert_eq!(s.vc, 0.4);
        assert_eq!(s.min, 2.0);
        assert_eq!(s.max, 9.0);
        assert_eq!(s.quantile_ratio, 5.0 / 4.0);
    }

    #[test]
    fn published_moments_give_published_vc() {
        let vc = variation_coefficient(48909.2, 89177.1);
        assert_eq!(format!("{vc:.2}"), "1.82");
    }

    proptest! {
        #[test]
        fn invariants_and_permutation(ops in proptest::collection::vec(0u64..1_000_000, 1..40), rot in 0usize..40) {
            let recs: Vec<_> = ops.iter().enumerate().map(|(i, &o)| record(i as u64, o, o % 3 == 0)).collect();
            let s = describe(&recs).unwrap();
            prop_assert!(s.min <= s.mean * (1.0 + 1e-12) && s.mean <= s.max * (1.0 + 1e-12));
            if s.mean > 0.0 {
                prop_assert!((s.vc * s.mean - s.stddev).abs() <= 1e-9 * s.stddev.max(1.0));
            }
            let mut rotated = recs.clone();
            rotated.rotate_left(rot % recs.len());
            prop_assert_eq!(describe(&rotated).unwrap(), s);
        }
    }
}
