//! Path-relinking between elite structures and the GRASP+PR driver.
//!
//! The moves separating `x` from a target structure are per-agent
//! reassignments. Target blocks are first aligned with blocks of `x`: each
//! target block, taken in canonical order, claims the not yet claimed block
//! of `x` sharing the most agents with it (ties go to the block with the
//! smallest member). Agents already sitting in the claimed block stay put;
//! every other agent shifts into the block claimed for its target block, or
//! into a fresh block when its target block claimed nothing. At least the
//! agent `a1` never moves, so at most `n - 1` moves separate any two
//! structures.

use std::fmt;
use std::str::FromStr;

use crate::bench::OperationCounter;
use crate::coalition::{bit_agent, bits_desc, top_bit};
use crate::error::{CsgError, Result};
use crate::grasp::{finish, iterate, Candidate, GraspParams, Incumbent, Scratch, SolveResult};
use crate::instance::Instance;
use crate::instances::rng_from_seed;
use crate::neighborhoods::{Change, Move, ShiftTarget};
use crate::structure::CoalitionStructure;

pub const DEFAULT_MAX_ELITE: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum RelinkStrategy {
    /// From the worse of the pair towards the better.
    #[default]
    Forward,
    /// From the better of the pair towards the worse.
    Backward,
    /// Both directions; the better product wins.
    ForwardBackward,
}

impl fmt::Display for RelinkStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelinkStrategy::Forward => "f",
            RelinkStrategy::Backward => "b",
            RelinkStrategy::ForwardBackward => "fb",
        })
    }
}

impl FromStr for RelinkStrategy {
    type Err = CsgError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "f" | "forward" => Ok(RelinkStrategy::Forward),
            "b" | "backward" => Ok(RelinkStrategy::Backward),
            "fb" | "forward-backward" => Ok(RelinkStrategy::ForwardBackward),
            other => Err(CsgError::InvalidParameter(format!(
                "unknown relink strategy {other:?} (expected f, b or fb)"
            ))),
        }
    }
}

/// Target blocks plus, for each, one agent that already sits in place
/// (0 when the target block has no representative yet).
struct Alignment<'t> {
    target: &'t [u32],
    anchors: Vec<u32>,
}

impl<'t> Alignment<'t> {
    fn new(current: &[u32], target: &'t [u32]) -> Self {
        let mut claimed = vec![false; current.len()];
        let anchors = target
            .iter()
            .map(|&t| {
                let mut pick: Option<(usize, u32)> = None;
                for (i, &c) in current.iter().enumerate() {
                    let overlap = (c & t).count_ones();
                    // strict > keeps the earliest, i.e. smallest-member, block on ties
                    if !claimed[i] && overlap > 0 && pick.is_none_or(|(_, o)| overlap > o) {
                        pick = Some((i, overlap));
                    }
                }
                match pick {
                    Some((i, _)) => {
                        claimed[i] = true;
                        top_bit(current[i] & t)
                    }
                    None => 0,
                }
            })
            .collect();
        Self { target, anchors }
    }

    /// Reassignments still needed to turn `current` into the target.
    fn pending(&mut self, current: &[u32]) -> Vec<Change> {
        let block_of = |bit: u32| {
            *current
                .iter()
                .find(|&&b| b & bit != 0)
                .expect("agent is placed")
        };
        let mut moves = Vec::new();
        for (j, &t) in self.target.iter().enumerate() {
            if self.anchors[j] == 0 {
                // an agent already alone in its block needs no fresh move
                if let Some(bit) = bits_desc(t).find(|&b| block_of(b) == b) {
                    self.anchors[j] = bit;
                }
            }
            let home = if self.anchors[j] == 0 {
                0
            } else {
                block_of(self.anchors[j])
            };
            for bit in bits_desc(t & !home) {
                moves.push(Change::shift(bit, block_of(bit), home));
            }
        }
        moves
    }

    /// Records the anchor created by a move into a fresh block.
    fn note(&mut self, change: &Change) {
        if change.removed[1] == 0 {
            let bit = change.added[1];
            if let Some(j) = self.target.iter().position(|&t| t & bit != 0) {
                if self.anchors[j] == 0 {
                    self.anchors[j] = bit;
                }
            }
        }
    }
}

fn change_to_move(current: &CoalitionStructure, change: &Change) -> Move {
    let bit = change.added[1] & !change.removed[1];
    let agent = bit_agent(bit, current.n());
    let target = if change.removed[1] == 0 {
        ShiftTarget::Fresh
    } else {
        ShiftTarget::Block(
            current
                .blocks()
                .iter()
                .position(|&b| b == change.removed[1])
                .expect("target block exists"),
        )
    };
    Move::Shift { agent, target }
}

/// Reassignment moves leading from `x` to `target`; empty iff they are equal.
pub fn delta(x: &CoalitionStructure, target: &CoalitionStructure) -> Result<Vec<Move>> {
    if x.n() != target.n() {
        return Err(CsgError::DimensionMismatch {
            structure: x.n(),
            instance: target.n(),
        });
    }
    let mut alignment = Alignment::new(x.blocks(), target.blocks());
    Ok(alignment
        .pending(x.blocks())
        .iter()
        .map(|c| change_to_move(x, c))
        .collect())
}

/// Outcome of one relinking walk.
#[derive(Debug, Clone)]
pub(crate) struct RelinkWalk {
    pub best: Candidate,
}

pub(crate) fn relink_walk(
    inst: &Instance,
    start: &Candidate,
    target: &Candidate,
    counter: &mut OperationCounter,
) -> RelinkWalk {
    relink_walk_traced(inst, start, target, counter, |_| {})
}

fn relink_walk_traced(
    inst: &Instance,
    start: &Candidate,
    target: &Candidate,
    counter: &mut OperationCounter,
    mut visit: impl FnMut(&[u32]),
) -> RelinkWalk {
    let mut best = if target.value > start.value {
        target.clone()
    } else {
        start.clone()
    };
    let mut x = start.clone();
    let mut alignment = Alignment::new(&x.blocks, &target.blocks);
    loop {
        let moves = alignment.pending(&x.blocks);
        if moves.is_empty() {
            break;
        }
        counter.relink += moves.len() as u64;
        let mut chosen = moves[0];
        let mut chosen_delta = f64::NEG_INFINITY;
        for m in &moves {
            let d = m.delta(inst);
            if d > chosen_delta {
                chosen = *m;
                chosen_delta = d;
            }
        }
        alignment.note(&chosen);
        x = x.apply(inst, &chosen);
        visit(&x.blocks);
        if x.value > best.value {
            best = x.clone();
        }
    }
    debug_assert_eq!(x.blocks, target.blocks);
    RelinkWalk { best }
}

/// Greedy walk from `start` to `target`, taking the best remaining move at
/// each step; returns the best structure visited, endpoints included.
pub fn path_relink(
    inst: &Instance,
    start: &CoalitionStructure,
    target: &CoalitionStructure,
    counter: &mut OperationCounter,
) -> Result<CoalitionStructure> {
    relink_path(inst, start, target, counter).map(|p| p.best)
}

/// A relinking walk with every structure it visited.
#[derive(Debug, Clone)]
pub struct RelinkPath {
    pub best: CoalitionStructure,
    pub best_value: f64,
    /// Visited structures from `start` to `target`, both included.
    pub path: Vec<CoalitionStructure>,
}

/// Same walk as [`path_relink`], also returning the visited structures.
pub fn relink_path(
    inst: &Instance,
    start: &CoalitionStructure,
    target: &CoalitionStructure,
    counter: &mut OperationCounter,
) -> Result<RelinkPath> {
    let s = Candidate {
        blocks: start.blocks().to_vec(),
        value: inst.structure_value(start)?,
    };
    let t = Candidate {
        blocks: target.blocks().to_vec(),
        value: inst.structure_value(target)?,
    };
    let n = inst.n();
    let mut path = vec![start.clone()];
    let walk = relink_walk_traced(inst, &s, &t, counter, |b| {
        path.push(CoalitionStructure::from_blocks_unchecked(n, b.to_vec()))
    });
    Ok(RelinkPath {
        best_value: walk.best.value,
        best: walk.best.into_structure(n),
        path,
    })
}

/// Bounded pool of distinct high-value structures.
#[derive(Debug, Clone)]
pub struct ElitePool {
    capacity: usize,
    entries: Vec<(CoalitionStructure, f64)>,
}

impl ElitePool {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(CsgError::InvalidParameter(
                "elite pool capacity must be at least 1".into(),
            ));
        }
        Ok(Self {
            capacity,
            entries: Vec::with_capacity(capacity),
        })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(CoalitionStructure, f64)] {
        &self.entries
    }

    pub fn contains(&self, cs: &CoalitionStructure) -> bool {
        self.entries.iter().any(|(e, _)| e == cs)
    }

    /// Offers a candidate; returns whether the pool changed.
    ///
    /// Duplicates are rejected. A full pool evicts its worst entry only for a
    /// strictly better candidate.
    pub fn insert(&mut self, cand: CoalitionStructure, value: f64) -> bool {
        if self.contains(&cand) {
            return false;
        }
        if self.entries.len() < self.capacity {
            self.entries.push((cand, value));
            return true;
        }
        let (worst, worst_value) = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, (_, v))| (i, *v))
            .fold(
                (0, f64::INFINITY),
                |acc, (i, v)| if v < acc.1 { (i, v) } else { acc },
            );
        if value > worst_value {
            self.entries[worst] = (cand, value);
            true
        } else {
            false
        }
    }

    /// Members by descending value; ties keep insertion order.
    fn by_value_desc(&self) -> Vec<(CoalitionStructure, f64)> {
        let mut out = self.entries.clone();
        out.sort_by(|a, b| b.1.total_cmp(&a.1));
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraspPrParams {
    pub grasp: GraspParams,
    pub max_elite: usize,
    pub strategy: RelinkStrategy,
}

impl Default for GraspPrParams {
    fn default() -> Self {
        Self {
            grasp: GraspParams::default(),
            max_elite: DEFAULT_MAX_ELITE,
            strategy: RelinkStrategy::Forward,
        }
    }
}

fn relink_pair(
    inst: &Instance,
    local: &Candidate,
    elite: &Candidate,
    strategy: RelinkStrategy,
    counter: &mut OperationCounter,
) -> Candidate {
    let (worse, better) = if local.value <= elite.value {
        (local, elite)
    } else {
        (elite, local)
    };
    match strategy {
        RelinkStrategy::Forward => relink_walk(inst, worse, better, counter).best,
        RelinkStrategy::Backward => relink_walk(inst, better, worse, counter).best,
        RelinkStrategy::ForwardBackward => {
            let f = relink_walk(inst, worse, better, counter).best;
            let b = relink_walk(inst, better, worse, counter).best;
            if b.value > f.value {
                b
            } else {
                f
            }
        }
    }
}

/// GRASP with path-relinking of every local optimum against the elite pool.
pub fn grasp_pr_solve(inst: &Instance, params: &GraspPrParams, seed: u64) -> Result<SolveResult> {
    params.grasp.validate()?;
    let mut pool = ElitePool::new(params.max_elite)?;
    let mut rng = rng_from_seed(seed);
    let limits = params.grasp.limits();
    let rii_params = params.grasp.rii();
    let n = inst.n();
    let mut counter = OperationCounter::default();
    let mut incumbent = Incumbent::new();
    let mut scratch = Scratch::default();
    let mut iterations = 0u64;
    loop {
        if params.grasp.max_iter.is_some_and(|m| iterations >= m)
            || (iterations > 0 && limits.should_stop(&counter, incumbent.value()))
            || (iterations > 0 && n == 1)
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
        if iterations > 1 {
            for (elite, value) in pool.by_value_desc() {
                if limits.should_stop(&counter, incumbent.value()) {
                    break;
                }
                let elite = Candidate {
                    blocks: elite.blocks().to_vec(),
                    value,
                };
                let product = relink_pair(inst, &local, &elite, params.strategy, &mut counter);
                pool.insert(product.clone().into_structure(n), product.value);
                incumbent.offer(&product);
            }
        }
        pool.insert(local.clone().into_structure(n), local.value);
    }
    Ok(finish(inst, incumbent, counter, iterations, &limits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{generate_instance, Distribution};
    use crate::neighborhoods::apply_move;
    use crate::structure::all_structures;

    #[test]
    fn delta_examples() {
        let single = CoalitionStructure::singletons(4).unwrap();
        let grand = CoalitionStructure::grand(4).unwrap();
        assert!(delta(&grand, &grand).unwrap().is_empty());
        let moves = delta(&single, &grand).unwrap();
        assert_eq!(
            moves,
            (2..=4)
                .map(|agent| Move::Shift {
                    agent,
                    target: ShiftTarget::Block(0)
                })
                .collect::<Vec<_>>()
        );
        assert!(delta(&single, &CoalitionStructure::grand(5).unwrap()).is_err());
    }

    #[test]
    fn delta_moves_are_valid_and_bounded() {
        for n in 1..=6 {
            let all = all_structures(n).unwrap();
            for x in &all {
                for t in &all {
                    let d = delta(x, t).unwrap();
                    assert!(d.len() < n.max(1), "{x} -> {t}: {d:?}");
                    assert_eq!(d.is_empty(), x == t);
                    for m in &d {
                        assert!(apply_move(x, m).is_ok());
                    }
                }
            }
        }
    }

    #[test]
    fn walks_end_at_target_within_bound() {
        for n in 1..=6 {
            let inst = generate_instance(n, Distribution::NormallyDistributed, n as u64).unwrap();
            let all = all_structures(n).unwrap();
            for x in &all {
                for t in &all {
                    let mut c = OperationCounter::default();
                    let walk = relink_path(&inst, x, t, &mut c).unwrap();
                    let steps = walk.path.len() - 1;
                    assert_eq!(walk.path.last(), Some(t));
                    assert!(steps < n);
                    let floor = inst
                        .structure_value(x)
                        .unwrap()
                        .max(inst.structure_value(t).unwrap());
                    assert!(walk.best_value >= floor);
                    assert_eq!(walk.best_value, inst.structure_value(&walk.best).unwrap());
                    assert!(walk.path.contains(&walk.best));
                    // every step probes at least the move it takes
                    assert!(c.relink >= steps as u64);
                    assert_eq!(c.construction + c.local_search, 0);
                }
            }
        }
    }

    #[test]
    fn identical_endpoints_return_start() {
        let inst = generate_instance(5, Distribution::Uniform, 1).unwrap();
        let x: CoalitionStructure = "12132".parse().unwrap();
        let mut c = OperationCounter::default();
        assert_eq!(path_relink(&inst, &x, &x, &mut c).unwrap(), x);
        assert_eq!(c.relink, 0);
    }

    #[test]
    fn pool_rules() {
        assert!(ElitePool::new(0).is_err());
        let mut pool = ElitePool::new(2).unwrap();
        let a: CoalitionStructure = "111".parse().unwrap();
        let b: CoalitionStructure = "112".parse().unwrap();
        let c: CoalitionStructure = "123".parse().unwrap();
        assert!(pool.insert(a.clone(), 1.0));
        assert!(!pool.insert(a.clone(), 5.0));
        assert!(pool.insert(b.clone(), 2.0));
        assert!(!pool.insert(c.clone(), 1.0));
        assert_eq!(pool.len(), 2);
        assert!(pool.insert(c.clone(), 1.5));
        assert!(!pool.contains(&a));
        assert!(pool.contains(&c));
        let order: Vec<f64> = pool.by_value_desc().iter().map(|e| e.1).collect();
        assert_eq!(order, vec![2.0, 1.5]);
    }

    #[test]
    fn strategy_names() {
        for s in [
            RelinkStrategy::Forward,
            RelinkStrategy::Backward,
            RelinkStrategy::ForwardBackward,
        ] {
            assert_eq!(s.to_string().parse::<RelinkStrategy>().unwrap(), s);
        }
        assert!("x".parse::<RelinkStrategy>().is_err());
    }

    #[test]
    fn one_iteration_matches_grasp() {
        use crate::grasp::grasp_solve;
        let inst = generate_instance(9, Distribution::UniformScaled, 3).unwrap();
        let mut params = GraspPrParams::default();
        params.grasp.max_iter = Some(1);
        for seed in 0..5 {
            let pr = grasp_pr_solve(&inst, &params, seed).unwrap();
            let g = grasp_solve(&inst, &params.grasp, seed).unwrap();
            assert_eq!(pr.best, g.best);
            assert_eq!(pr.ops, g.ops);
            assert_eq!(pr.ops.relink, 0);
        }
    }

    #[test]
    fn deterministic_and_consistent() {
        let inst = generate_instance(10, Distribution::NormalScaled, 5).unwrap();
        for strategy in [
            RelinkStrategy::Forward,
            RelinkStrategy::Backward,
            RelinkStrategy::ForwardBackward,
        ] {
            let mut params = GraspPrParams {
                strategy,
                ..GraspPrParams::default()
            };
            params.grasp.cutoff_ops = 40_000;
            let a = grasp_pr_solve(&inst, &params, 2).unwrap();
            let b = grasp_pr_solve(&inst, &params, 2).unwrap();
            assert_eq!(a.best, b.best);
            assert_eq!(a.ops, b.ops);
            assert!(a.ops.relink > 0);
            assert_eq!(inst.structure_value(&a.best).unwrap(), a.best_value);
        }
    }

    #[test]
    fn pool_stays_distinct_and_bounded() {
        use proptest::prelude::*;
        proptest!(|(ops in proptest::collection::vec((0usize..15, 0u32..100), 0..60), cap in 1usize..5)| {
            let all = all_structures(4).unwrap();
            let mut pool = ElitePool::new(cap).unwrap();
            for (i, v) in ops {
                let before: Vec<f64> = pool.entries().iter().map(|e| e.1).collect();
                let full = pool.len() == cap;
                let dup = pool.contains(&all[i]);
                let changed = pool.insert(all[i].clone(), v as f64);
                prop_assert!(pool.len() <= cap);
                let mut seen = std::collections::HashSet::new();
                prop_assert!(pool.entries().iter().all(|e| seen.insert(e.0.clone())));
                if dup {
                    prop_assert!(!changed);
                } else if full {
                    let worst = before.iter().cloned().fold(f64::INFINITY, f64::min);
                    prop_assert_eq!(changed, v as f64 > worst);
                } else {
                    prop_assert!(changed);
                }
            }
        });
    }
}
