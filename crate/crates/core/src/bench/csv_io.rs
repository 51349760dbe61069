//! CSV export and import of records, statistics and run-length curves.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{RldPoint, RunRecord, Stats};
use crate::bench::OperationCounter;

#[derive(Debug, Serialize, Deserialize)]
struct RecordRow {
    run_id: u64,
    seed: u64,
    ops_total: u64,
    ops_construction: u64,
    ops_local: u64,
    ops_relink: u64,
    iters: u64,
    best_value: f64,
    quality: f64,
    success: bool,
}

impl From<&RunRecord> for RecordRow {
    fn from(r: &RunRecord) -> Self {
        Self {
            run_id: r.run_id,
            seed: r.seed,
            ops_total: r.ops.total(),
            ops_construction: r.ops.construction,
            ops_local: r.ops.local_search,
            ops_relink: r.ops.relink,
            iters: r.iterations,
            best_value: r.best_value,
            quality: r.quality,
            success: r.success,
        }
    }
}

/// Error raised while reading or writing benchmark CSV files.
#[derive(Debug, thiserror::Error)]
pub enum CsvError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("row {row}: ops_total {total} differs from the phase sum {sum}")]
    PhaseSum { row: usize, total: u64, sum: u64 },
}

fn write_rows<W: Write, T: Serialize>(
    sink: W,
    rows: impl IntoIterator<Item = T>,
) -> std::result::Result<(), CsvError> {
    let mut w = csv::Writer::from_writer(sink);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Writes one header line and one row per record. Wall time is left out so
/// that repeated runs produce identical files.
pub fn write_records<W: Write>(
    records: &[RunRecord],
    sink: W,
) -> std::result::Result<(), CsvError> {
    write_rows(sink, records.iter().map(RecordRow::from))
}

/// Reads records written by [`write_records`]; wall time reads back as 0.
pub fn read_records<R: Read>(source: R) -> std::result::Result<Vec<RunRecord>, CsvError> {
    let mut r = csv::Reader::from_reader(source);
    let mut out = Vec::new();
    for (i, row) in r.deserialize::<RecordRow>().enumerate() {
        let row = row?;
        let ops = OperationCounter {
            construction: row.ops_construction,
            local_search: row.ops_local,
            relink: row.ops_relink,
        };
        if ops.total() != row.ops_total {
            return Err(CsvError::PhaseSum {
                row: i + 1,
                total: row.ops_total,
                sum: ops.total(),
            });
        }
        out.push(RunRecord {
            run_id: row.run_id,
            seed: row.seed,
            ops,
            iterations: row.iters,
            best_value: row.best_value,
            quality: row.quality,
            success: row.success,
            wall_time: 0.0,
        });
    }
    Ok(out)
}

/// A labelled statistics row, e.g. one per distribution.
#[derive(Debug, Serialize)]
struct StatsRow<'a> {
    label: &'a str,
    runs: usize,
    mean: f64,
    min: f64,
    max: f64,
    stddev: f64,
    vc: f64,
    quantile_ratio: f64,
    opt_count: usize,
}

pub fn write_stats<'a, W: Write>(
    rows: impl IntoIterator<Item = (&'a str, &'a Stats)>,
    sink: W,
) -> std::result::Result<(), CsvError> {
    write_rows(
        sink,
        rows.into_iter().map(|(label, s)| StatsRow {
            label,
            runs: s.runs,
            mean: s.mean,
            min: s.min,
            max: s.max,
            stddev: s.stddev,
            vc: s.vc,
            quantile_ratio: s.quantile_ratio,
            opt_count: s.opt_count,
        }),
    )
}

/// Columns `ops, cumulative_probability`.
pub fn write_rld<W: Write>(curve: &[RldPoint], sink: W) -> std::result::Result<(), CsvError> {
    write_rows(sink, curve)
}
