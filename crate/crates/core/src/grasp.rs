//! GRASP: greedy randomized construction followed by randomised iterative
//! improvement (RII), repeated while budget remains.

use rand::Rng;

use crate::bench::OperationCounter;
use crate::coalition::bits_desc;
use crate::error::{CsgError, Result};
use crate::instance::Instance;
use crate::instances::{rng_from_seed, uniform01};
use crate::neighborhoods::{
    for_each_neighbor, for_each_shift, neighborhood_size, nth_split_merge, Change, NeighborhoodOp,
};
use crate::structure::{full_mask, CoalitionStructure};

/// Relative tolerance for value comparisons against a known optimum.
pub const VALUE_REL_TOL: f64 = 1e-9;

pub const DEFAULT_WALK_PROBABILITY: f64 = 0.7;
pub const DEFAULT_RII_STEPS: u64 = 20;
pub const DEFAULT_CUTOFF_OPS: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct GraspParams {
    /// `None` runs until another stopping rule fires.
    pub max_iter: Option<u64>,
    pub neigh_op: NeighborhoodOp,
    /// Consecutive non-improving RII steps before local search gives up.
    pub rii_steps: u64,
    /// RII walk parameter: a step is a random walk step when `u >= wp`.
    pub wp: f64,
    pub cutoff_ops: u64,
    /// Stop as soon as the incumbent reaches this value (within [`VALUE_REL_TOL`]).
    pub target_value: Option<f64>,
}

impl Default for GraspParams {
    fn default() -> Self {
        Self {
            max_iter: None,
            neigh_op: NeighborhoodOp::SplitMerge,
            rii_steps: DEFAULT_RII_STEPS,
            wp: DEFAULT_WALK_PROBABILITY,
            cutoff_ops: DEFAULT_CUTOFF_OPS,
            target_value: None,
        }
    }
}

impl GraspParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.wp) {
            return Err(CsgError::InvalidParameter(format!(
                "walk probability {} is outside [0, 1]",
                self.wp
            )));
        }
        if self.cutoff_ops < 1 {
            return Err(CsgError::InvalidParameter(
                "cutoff must be at least 1".into(),
            ));
        }
        if let Some(t) = self.target_value {
            if !t.is_finite() {
                return Err(CsgError::InvalidParameter(format!("target value {t}")));
            }
        }
        Ok(())
    }

    pub fn rii(&self) -> RiiParams {
        RiiParams {
            wp: self.wp,
            steps: self.rii_steps,
            neigh_op: self.neigh_op,
        }
    }

    pub(crate) fn limits(&self) -> Limits {
        Limits {
            cutoff: self.cutoff_ops,
            target: self.target_value,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiiParams {
    pub wp: f64,
    pub steps: u64,
    pub neigh_op: NeighborhoodOp,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub best: CoalitionStructure,
    pub best_value: f64,
    pub ops: OperationCounter,
    /// Iterations started, including one interrupted by a stopping rule.
    pub iterations: u64,
    pub reached_target: bool,
}

/// Budget and quality stopping rules shared by the stochastic solvers.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Limits {
    pub cutoff: u64,
    pub target: Option<f64>,
}

impl Limits {
    pub const UNBOUNDED: Limits = Limits {
        cutoff: u64::MAX,
        target: None,
    };

    #[inline]
    pub fn exhausted(&self, counter: &OperationCounter) -> bool {
        counter.total() >= self.cutoff
    }

    #[inline]
    pub fn reached(&self, value: f64) -> bool {
        self.target
            .is_some_and(|t| value >= t * (1.0 - VALUE_REL_TOL))
    }

    #[inline]
    pub fn should_stop(&self, counter: &OperationCounter, best: f64) -> bool {
        self.exhausted(counter) || self.reached(best)
    }
}

/// A structure being searched, with its value kept exact.
#[derive(Debug, Clone)]
pub(crate) struct Candidate {
    pub blocks: Vec<u32>,
    pub value: f64,
}

impl Candidate {
    pub fn new(inst: &Instance, blocks: Vec<u32>) -> Self {
        let value = inst.blocks_value(&blocks);
        Self { blocks, value }
    }

    pub fn apply(&self, inst: &Instance, change: &Change) -> Self {
        Self::new(inst, change.apply(&self.blocks))
    }

    pub fn into_structure(self, n: usize) -> CoalitionStructure {
        CoalitionStructure::from_blocks_unchecked(n, self.blocks)
    }
}

/// Builds a complete structure by `n` placements, each picked uniformly from
/// the restricted candidate list `{C' : v(C') >= min + alpha (max - min)}`.
///
/// `alpha = 1` is pure greedy, `alpha = 0` uniform random construction.
pub fn greedy_randomized_construction<R: Rng + ?Sized>(
    inst: &Instance,
    alpha: f64,
    rng: &mut R,
    counter: &mut OperationCounter,
) -> CoalitionStructure {
    let c = construct(inst, alpha, rng, counter, &Limits::UNBOUNDED)
        .expect("unbounded construction always completes");
    c.into_structure(inst.n())
}

/// Construction that gives up (returning `None`) once the budget runs out.
pub(crate) fn construct<R: Rng + ?Sized>(
    inst: &Instance,
    alpha: f64,
    rng: &mut R,
    counter: &mut OperationCounter,
    limits: &Limits,
) -> Option<Candidate> {
    let n = inst.n();
    let mut blocks: Vec<u32> = Vec::with_capacity(n);
    let mut value = 0.0;
    let mut unassigned = full_mask(n);
    // (agent bit, target block or usize::MAX for a new one, resulting value)
    let mut candidates: Vec<(u32, usize, f64)> = Vec::with_capacity(n * (n + 1));
    let mut rcl: Vec<usize> = Vec::with_capacity(n * (n + 1));
    for _ in 0..n {
        candidates.clear();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for bit in bits_desc(unassigned) {
            for (j, &b) in blocks.iter().enumerate() {
                let v = value - inst.mask_value(b) + inst.mask_value(b | bit);
                candidates.push((bit, j, v));
            }
            candidates.push((bit, usize::MAX, value + inst.mask_value(bit)));
        }
        for &(_, _, v) in &candidates {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        counter.construction += candidates.len() as u64;
        let threshold = (lo + alpha * (hi - lo)).min(hi);
        rcl.clear();
        rcl.extend((0..candidates.len()).filter(|&i| candidates[i].2 >= threshold));
        let (bit, j, _) = candidates[rcl[rng.gen_range(0..rcl.len())]];
        if j == usize::MAX {
            blocks.push(bit);
        } else {
            blocks[j] |= bit;
        }
        unassigned ^= bit;
        value = inst.blocks_value(&blocks);
        if limits.exhausted(counter) && unassigned != 0 {
            return None;
        }
    }
    blocks.sort_unstable_by(|a, b| b.cmp(a));
    // re-sum in canonical order so the value matches `structure_value` bit for bit
    Some(Candidate::new(inst, blocks))
}

/// Reusable buffers for local search.
#[derive(Default)]
pub(crate) struct Scratch {
    changes: Vec<Change>,
}

/// Randomised iterative improvement from `start` (maximisation).
///
/// Each step draws `u ~ U(0, 1)`. When `u >= wp` it moves to a uniformly
/// random neighbour; otherwise it moves to a uniformly random strictly
/// improving neighbour, or to the least worsening one when none improves.
/// A random step therefore happens with probability `1 - wp`. Stops after `steps` consecutive steps
/// without a new best and returns the best structure seen.
pub fn rii<R: Rng + ?Sized>(
    inst: &Instance,
    start: &CoalitionStructure,
    params: &RiiParams,
    rng: &mut R,
    counter: &mut OperationCounter,
) -> Result<CoalitionStructure> {
    let value = inst.structure_value(start)?;
    let start = Candidate {
        blocks: start.blocks().to_vec(),
        value,
    };
    let best = rii_bounded(
        inst,
        start,
        params,
        rng,
        counter,
        &Limits::UNBOUNDED,
        &mut Scratch::default(),
    );
    Ok(best.into_structure(inst.n()))
}

pub(crate) fn rii_bounded<R: Rng + ?Sized>(
    inst: &Instance,
    start: Candidate,
    params: &RiiParams,
    rng: &mut R,
    counter: &mut OperationCounter,
    limits: &Limits,
    scratch: &mut Scratch,
) -> Candidate {
    let mut best = start.clone();
    let mut current = start;
    let mut idle = 0u64;
    while idle < params.steps {
        if limits.should_stop(counter, best.value) {
            break;
        }
        idle += 1;
        let size = neighborhood_size(&current.blocks, params.neigh_op);
        if size == 0 {
            break;
        }
        let change = if uniform01(rng) >= params.wp {
            counter.local_search += 1;
            random_neighbor(&current.blocks, params.neigh_op, size, rng, scratch)
        } else {
            counter.local_search += size;
            improvement_step(inst, &current.blocks, params.neigh_op, rng, scratch)
        };
        current = current.apply(inst, &change);
        if current.value > best.value {
            best = current.clone();
            idle = 0;
        }
    }
    best
}

fn random_neighbor<R: Rng + ?Sized>(
    blocks: &[u32],
    op: NeighborhoodOp,
    size: u64,
    rng: &mut R,
    scratch: &mut Scratch,
) -> Change {
    let index = rng.gen_range(0..size);
    match op {
        NeighborhoodOp::SplitMerge => nth_split_merge(blocks, index),
        NeighborhoodOp::Shift => {
            scratch.changes.clear();
            for_each_shift(blocks, |c| scratch.changes.push(c));
            scratch.changes[index as usize]
        }
    }
}

fn improvement_step<R: Rng + ?Sized>(
    inst: &Instance,
    blocks: &[u32],
    op: NeighborhoodOp,
    rng: &mut R,
    scratch: &mut Scratch,
) -> Change {
    scratch.changes.clear();
    let mut least_worse: Option<(Change, f64)> = None;
    for_each_neighbor(blocks, op, |c| {
        let delta = c.delta(inst);
        if delta > 0.0 {
            scratch.changes.push(c);
        } else if least_worse.is_none_or(|(_, d)| delta > d) {
            least_worse = Some((c, delta));
        }
    });
    if scratch.changes.is_empty() {
        least_worse.expect("non-empty neighbourhood").0
    } else {
        scratch.changes[rng.gen_range(0..scratch.changes.len())]
    }
}

/// Tracks the best structure of a run.
pub(crate) struct Incumbent {
    pub best: Option<Candidate>,
}

impl Incumbent {
    pub fn new() -> Self {
        Self { best: None }
    }

    pub fn value(&self) -> f64 {
        self.best.as_ref().map_or(f64::NEG_INFINITY, |c| c.value)
    }

    pub fn offer(&mut self, c: &Candidate) -> bool {
        if c.value > self.value() {
            self.best = Some(c.clone());
            true
        } else {
            false
        }
    }
}

pub(crate) fn finish(
    inst: &Instance,
    incumbent: Incumbent,
    ops: OperationCounter,
    iterations: u64,
    limits: &Limits,
) -> SolveResult {
    let best = incumbent
        .best
        .expect("at least one construction completes before the budget check");
    let best_value = best.value;
    SolveResult {
        best: best.into_structure(inst.n()),
        best_value,
        ops,
        iterations,
        reached_target: limits.reached(best_value),
    }
}

/// One GRASP iteration: construction with `alpha ~ U(0, 1)`, then RII.
/// `None` when the budget ran out mid-construction; the first iteration of a
/// run always completes so that there is a result.
pub(crate) fn iterate<R: Rng + ?Sized>(
    inst: &Instance,
    rng: &mut R,
    counter: &mut OperationCounter,
    limits: &Limits,
    rii_params: &RiiParams,
    scratch: &mut Scratch,
    first: bool,
) -> Option<Candidate> {
    let alpha = uniform01(rng);
    let budget = if first { &Limits::UNBOUNDED } else { limits };
    let start = construct(inst, alpha, rng, counter, budget)?;
    Some(rii_bounded(
        inst, start, rii_params, rng, counter, limits, scratch,
    ))
}

/// Runs GRASP with a fresh `alpha ~ U(0, 1)` per iteration.
pub fn grasp_solve(inst: &Instance, params: &GraspParams, seed: u64) -> Result<SolveResult> {
    params.validate()?;
    let mut rng = rng_from_seed(seed);
    let limits = params.limits();
    let rii_params = params.rii();
    let mut counter = OperationCounter::default();
    let mut incumbent = Incumbent::new();
    let mut scratch = Scratch::default();
    let mut iterations = 0u64;
    loop {
        if params.max_iter.is_some_and(|m| iterations >= m)
            || (iterations > 0 && limits.should_stop(&counter, incumbent.value()))
            || (iterations > 0 && inst.n() == 1)
        {
            break;
        }
        iterations += 1;
        let first = incumbent.best.is_none();
        let Some(local) = iterate(
            inst,
            &mut rng,
            &mut counter,
            &limits,
            &rii_params,
            &mut scratch,
            first,
        ) else {
            break;
        };
        incumbent.offer(&local);
    }
    Ok(finish(inst, incumbent, counter, iterations, &limits))
}

/// A single RII run from a uniformly random construction.
pub fn rii_solve(inst: &Instance, params: &GraspParams, seed: u64) -> Result<SolveResult> {
    params.validate()?;
    let mut rng = rng_from_seed(seed);
    let limits = params.limits();
    let mut counter = OperationCounter::default();
    let start = construct(inst, 0.0, &mut rng, &mut counter, &Limits::UNBOUNDED)
        .expect("unbounded construction always completes");
    let local = rii_bounded(
        inst,
        start,
        &params.rii(),
        &mut rng,
        &mut counter,
        &limits,
        &mut Scratch::default(),
    );
    let mut incumbent = Incumbent::new();
    incumbent.offer(&local);
    Ok(finish(inst, incumbent, counter, 1, &limits))
}
