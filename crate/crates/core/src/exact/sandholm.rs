//! Anytime search over the coalition structure graph with a worst-case bound.
//!
//! The first phase searches the two bottom levels of the graph, the grand
//! coalition and every two-block structure. Each coalition appears in one of
//! those structures, so the best of them is within a factor `n` of the
//! optimum. The second phase then sweeps the remaining levels from the top
//! (the singletons, `n` blocks) downwards to the level with three blocks.

use std::fmt;

use crate::coalition::top_bit;
use crate::instance::Instance;
use crate::structure::{for_each_partition, full_mask, CoalitionStructure};

/// How far the anytime search has progressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnytimePhase {
    /// Interrupted before the two bottom levels were covered; no bound yet.
    BottomLevels,
    /// Bottom levels done; sweeping the level with this many blocks.
    TopDown { level: usize },
    /// Every structure has been visited.
    Complete,
}

impl fmt::Display for AnytimePhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnytimePhase::BottomLevels => f.write_str("bottom-levels"),
            AnytimePhase::TopDown { level } => write!(f, "top-down(level {level})"),
            AnytimePhase::Complete => f.write_str("complete"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AnytimeResult {
    pub best: CoalitionStructure,
    pub best_value: f64,
    /// Guaranteed ratio `V(optimum) / best_value`; `None` while no bound is established.
    pub bound: Option<f64>,
    pub nodes_searched: u64,
    pub phase: AnytimePhase,
}

struct Search<'a> {
    inst: &'a Instance,
    budget: Option<u64>,
    nodes: u64,
    best: Vec<u32>,
    best_value: f64,
}

impl Search<'_> {
    /// Visits one node; returns `false` once the budget is spent.
    fn visit(&mut self, blocks: &[u32]) -> bool {
        if self.budget.is_some_and(|b| self.nodes >= b) {
            return false;
        }
        self.nodes += 1;
        let v = self.inst.blocks_value(blocks);
        if v > self.best_value {
            self.best_value = v;
            self.best.clear();
            self.best.extend_from_slice(blocks);
        }
        true
    }

    fn result(self, bound: Option<f64>, phase: AnytimePhase) -> AnytimeResult {
        AnytimeResult {
            best: CoalitionStructure::from_blocks_unchecked(self.inst.n(), self.best),
            best_value: self.best_value,
            bound,
            nodes_searched: self.nodes,
            phase,
        }
    }
}

/// Runs the anytime search, visiting at most `budget` structures (`None` for no cap).
///
/// With a budget below one node the grand coalition is still returned as the
/// best structure, with zero nodes searched.
pub fn sandholm_anytime(inst: &Instance, budget: Option<u64>) -> AnytimeResult {
    let n = inst.n();
    let full = full_mask(n);
    let mut search = Search {
        inst,
        budget,
        nodes: 0,
        best: vec![full],
        best_value: inst.mask_value(full),
    };
    if !search.visit(&[full]) {
        return search.result(None, AnytimePhase::BottomLevels);
    }
    // two-block structures: the block holding agent a1 is any proper superset of its bit
    let top = top_bit(full);
    let rest = full ^ top;
    let mut sub = rest;
    while sub != 0 {
        let other = sub;
        let first = full ^ other;
        if !search.visit(&[first, other]) {
            return search.result(None, AnytimePhase::BottomLevels);
        }
        sub = (sub - 1) & rest;
    }
    let bound = Some(n as f64);
    for level in (3..=n).rev() {
        let finished = for_each_partition(n, level..=level, |b| search.visit(b));
        if !finished {
            return search.result(bound, AnytimePhase::TopDown { level });
        }
    }
    search.result(Some(1.0), AnytimePhase::Complete)
}
