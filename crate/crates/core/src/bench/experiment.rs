//! Repeated seeded runs over a set of instances.

use std::time::Instant;

use rayon::prelude::*;

use super::RunRecord;
use crate::error::{CsgError, Result};
use crate::exact::dp_optimal;
use crate::grasp::{grasp_solve, rii_solve, SolveResult, VALUE_REL_TOL};
use crate::instance::Instance;
use crate::instances::derive_seed;
use crate::pathrelink::{grasp_pr_solve, GraspPrParams};

/// Stochastic solvers that can be benchmarked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Grasp,
    GraspPr,
    Rii,
}

impl Algorithm {
    pub fn run(self, inst: &Instance, params: &GraspPrParams, seed: u64) -> Result<SolveResult> {
        match self {
            Algorithm::Grasp => grasp_solve(inst, &params.grasp, seed),
            Algorithm::GraspPr => grasp_pr_solve(inst, params, seed),
            Algorithm::Rii => rii_solve(inst, &params.grasp, seed),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    /// Solver parameters; the target value is replaced by each instance's optimum.
    pub params: GraspPrParams,
    pub runs_per_instance: usize,
    pub master_seed: u64,
    /// Worker threads; results do not depend on it.
    pub jobs: usize,
}

/// `optimum / best`, with 1 for a zero optimum and infinity for a zero best.
pub fn quality(optimum: f64, best: f64) -> f64 {
    if optimum <= 0.0 {
        1.0
    } else if best <= 0.0 {
        f64::INFINITY
    } else {
        (optimum / best).max(1.0)
    }
}

/// Whether a run found the optimum within tolerance and within the cutoff.
pub fn is_success(optimum: f64, best: f64, ops_total: u64, cutoff: u64) -> bool {
    best >= optimum * (1.0 - VALUE_REL_TOL) && ops_total <= cutoff
}

/// Runs every instance `runs_per_instance` times. Run `j` of instance `i` has
/// id `i * runs_per_instance + j` and seed `derive_seed(master_seed, id)`.
/// Each run stops as soon as it reaches the instance optimum found by DP.
/// Records come back sorted by run id.
pub fn run_experiment(instances: &[Instance], config: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    config.params.grasp.validate()?;
    if config.jobs == 0 {
        return Err(CsgError::InvalidParameter("jobs must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| CsgError::InvalidParameter(e.to_string()))?;
    pool.install(|| {
        let optima: Vec<f64> = instances
            .par_iter()
            .map(|inst| dp_optimal(inst).map(|s| s.value))
            .collect::<Result<_>>()?;
        let runs = config.runs_per_instance;
        let total = instances.len() * runs;
        (0..total)
            .into_par_iter()
            .map(|id| {
                let i = id / runs;
                let run_id = id as u64;
                let seed = derive_seed(config.master_seed, run_id);
                let mut params = config.params.clone();
                params.grasp.target_value = Some(optima[i]);
                let started = Instant::now();
                let res = config.algorithm.run(&instances[i], &params, seed)?;
                let wall_time = started.elapsed().as_secs_f64();
                Ok(RunRecord {
                    run_id,
                    seed,
                    ops: res.ops,
                    iterations: res.iterations,
                    best_value: res.best_value,
                    quality: quality(optima[i], res.best_value),
                    success: is_success(
                        optima[i],
                        res.best_value,
                        res.ops.total(),
                        params.grasp.cutoff_ops,
                    ),
                    wall_time,
                })
            })
            .collect()
    })
}
