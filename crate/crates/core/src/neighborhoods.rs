//! SPLIT / MERGE / SHIFT moves and the two neighbourhood relations.
//!
//! Block ids in a [`Move`] are 0-based positions in the canonical block order
//! of the structure the move was enumerated for.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::coalition::{agent_bit, bits_desc, deposit_bits, top_bit};
use crate::error::{CsgError, Result};
use crate::instance::Instance;
use crate::structure::CoalitionStructure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveKind {
    Split,
    Merge,
    Shift,
}

/// Which neighbourhood local search explores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum NeighborhoodOp {
    /// Every SPLIT and MERGE result.
    #[default]
    SplitMerge,
    /// Every SHIFT result, including moves that open a fresh singleton.
    Shift,
}

impl fmt::Display for NeighborhoodOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NeighborhoodOp::SplitMerge => "sm",
            NeighborhoodOp::Shift => "s",
        })
    }
}

impl FromStr for NeighborhoodOp {
    type Err = CsgError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sm" | "s/m" | "split-merge" => Ok(NeighborhoodOp::SplitMerge),
            "s" | "shift" => Ok(NeighborhoodOp::Shift),
            other => Err(CsgError::InvalidParameter(format!(
                "unknown neighbourhood {other:?} (expected sm or s)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShiftTarget {
    Block(usize),
    /// A new singleton block.
    Fresh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    /// Splits `block` into `part` and the remaining members.
    Split { block: usize, part: u32 },
    /// Fuses two distinct blocks.
    Merge { first: usize, second: usize },
    /// Moves one agent (1-based id) out of its block.
    Shift { agent: usize, target: ShiftTarget },
}

impl Move {
    pub fn kind(&self) -> MoveKind {
        match self {
            Move::Split { .. } => MoveKind::Split,
            Move::Merge { .. } => MoveKind::Merge,
            Move::Shift { .. } => MoveKind::Shift,
        }
    }
}

/// Block-level effect of a move: up to two blocks out, up to two blocks in.
/// Zero masks are placeholders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Change {
    pub removed: [u32; 2],
    pub added: [u32; 2],
}

impl Change {
    #[inline]
    pub fn split(block: u32, part: u32) -> Self {
        Self {
            removed: [block, 0],
            added: [part, block ^ part],
        }
    }

    #[inline]
    pub fn merge(a: u32, b: u32) -> Self {
        Self {
            removed: [a, b],
            added: [a | b, 0],
        }
    }

    /// Moves `bit` from `source` into `target` (`0` opens a fresh block).
    #[inline]
    pub fn shift(bit: u32, source: u32, target: u32) -> Self {
        Self {
            removed: [source, target],
            added: [source ^ bit, target | bit],
        }
    }

    #[inline]
    pub fn delta(&self, inst: &Instance) -> f64 {
        inst.mask_value(self.added[0]) + inst.mask_value(self.added[1])
            - inst.mask_value(self.removed[0])
            - inst.mask_value(self.removed[1])
    }

    pub fn apply(&self, blocks: &[u32]) -> Vec<u32> {
        let mut out: Vec<u32> = blocks
            .iter()
            .copied()
            .filter(|b| !self.removed.contains(b))
            .collect();
        debug_assert_eq!(
            out.len() + self.removed.iter().filter(|&&r| r != 0).count(),
            blocks.len()
        );
        out.extend(self.added.iter().copied().filter(|&a| a != 0));
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }
}

fn move_change(cs: &CoalitionStructure, m: &Move) -> Result<Change> {
    let blocks = cs.blocks();
    let k = blocks.len();
    match *m {
        Move::Split { block, part } => {
            let b = *blocks
                .get(block)
                .ok_or_else(|| CsgError::InvalidMove(format!("no block {block}")))?;
            if part == 0 || part & !b != 0 || part == b {
                return Err(CsgError::InvalidMove(format!(
                    "part {part} is not a proper non-empty subset of block {block}"
                )));
            }
            Ok(Change::split(b, part))
        }
        Move::Merge { first, second } => {
            if first == second || first >= k || second >= k {
                return Err(CsgError::InvalidMove(format!(
                    "cannot merge blocks {first} and {second} of {k}"
                )));
            }
            Ok(Change::merge(blocks[first], blocks[second]))
        }
        Move::Shift { agent, target } => {
            if agent == 0 || agent > cs.n() {
                return Err(CsgError::AgentOutOfRange { agent, n: cs.n() });
            }
            let bit = agent_bit(agent, cs.n());
            let src = cs.block_of(agent);
            let source = blocks[src];
            match target {
                ShiftTarget::Block(t) if t < k && t != src => {
                    Ok(Change::shift(bit, source, blocks[t]))
                }
                ShiftTarget::Block(t) => Err(CsgError::InvalidMove(format!(
                    "agent {agent} cannot shift from block {src} to block {t}"
                ))),
                ShiftTarget::Fresh if source != bit => Ok(Change::shift(bit, source, 0)),
                ShiftTarget::Fresh => Err(CsgError::InvalidMove(format!(
                    "agent {agent} is already a singleton"
                ))),
            }
        }
    }
}

/// All non-identity moves of one kind, without duplicates.
pub fn enumerate_moves(cs: &CoalitionStructure, kind: MoveKind) -> Vec<Move> {
    let blocks = cs.blocks();
    let k = blocks.len();
    let mut moves = Vec::new();
    match kind {
        MoveKind::Split => {
            for (i, &b) in blocks.iter().enumerate() {
                let rest = b ^ top_bit(b);
                let count = (1u64 << rest.count_ones()) - 1;
                for r in 1..=count {
                    moves.push(Move::Split {
                        block: i,
                        part: deposit_bits(r, rest),
                    });
                }
            }
        }
        MoveKind::Merge => {
            for first in 0..k {
                for second in first + 1..k {
                    moves.push(Move::Merge { first, second });
                }
            }
        }
        MoveKind::Shift => {
            for agent in 1..=cs.n() {
                let src = cs.block_of(agent);
                for t in (0..k).filter(|&t| t != src) {
                    moves.push(Move::Shift {
                        agent,
                        target: ShiftTarget::Block(t),
                    });
                }
                if blocks[src].count_ones() >= 2 {
                    moves.push(Move::Shift {
                        agent,
                        target: ShiftTarget::Fresh,
                    });
                }
            }
        }
    }
    moves
}

/// Applies a move, returning the canonical result.
pub fn apply_move(cs: &CoalitionStructure, m: &Move) -> Result<CoalitionStructure> {
    let change = move_change(cs, m)?;
    Ok(CoalitionStructure::from_blocks_unchecked(
        cs.n(),
        change.apply(cs.blocks()),
    ))
}

/// The neighbourhood of `cs` as distinct structures.
pub fn neighbors(cs: &CoalitionStructure, op: NeighborhoodOp) -> Vec<CoalitionStructure> {
    let kinds: &[MoveKind] = match op {
        NeighborhoodOp::SplitMerge => &[MoveKind::Split, MoveKind::Merge],
        NeighborhoodOp::Shift => &[MoveKind::Shift],
    };
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for &kind in kinds {
        for m in enumerate_moves(cs, kind) {
            let next = apply_move(cs, &m).expect("enumerated moves are valid");
            if seen.insert(next.clone()) {
                out.push(next);
            }
        }
    }
    out
}

/// Number of distinct neighbours, without building them.
pub(crate) fn neighborhood_size(blocks: &[u32], op: NeighborhoodOp) -> u64 {
    let k = blocks.len() as u64;
    match op {
        NeighborhoodOp::SplitMerge => {
            let splits: u64 = blocks
                .iter()
                .map(|b| (1u64 << (b.count_ones() - 1)) - 1)
                .sum();
            splits + k * (k.saturating_sub(1)) / 2
        }
        NeighborhoodOp::Shift => {
            let mut count = 0;
            for_each_shift(blocks, |_| count += 1);
            count
        }
    }
}

/// Calls `f` once per distinct SHIFT neighbour.
///
/// Two shifts collide only when (a) two singletons swap into each other, kept
/// for the lower source block, or (b) either member of a pair opens a fresh
/// block, kept for the smaller agent id.
#[inline]
pub(crate) fn for_each_shift<F: FnMut(Change)>(blocks: &[u32], mut f: F) {
    for (i, &source) in blocks.iter().enumerate() {
        let size = source.count_ones();
        for bit in bits_desc(source) {
            for (j, &target) in blocks.iter().enumerate() {
                if j == i || (size == 1 && target.count_ones() == 1 && j < i) {
                    continue;
                }
                f(Change::shift(bit, source, target));
            }
            if size >= 2 && !(size == 2 && bit != top_bit(source)) {
                f(Change::shift(bit, source, 0));
            }
        }
    }
}

/// Calls `f` once per SPLIT/MERGE neighbour (splits first, then merges).
#[inline]
pub(crate) fn for_each_split_merge<F: FnMut(Change)>(blocks: &[u32], mut f: F) {
    for &b in blocks {
        let rest = b ^ top_bit(b);
        if rest == 0 {
            continue;
        }
        // walk the non-empty submasks of `rest`
        let mut part = rest;
        while part != 0 {
            f(Change::split(b, part));
            part = (part - 1) & rest;
        }
    }
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            f(Change::merge(blocks[i], blocks[j]));
        }
    }
}

#[inline]
pub(crate) fn for_each_neighbor<F: FnMut(Change)>(blocks: &[u32], op: NeighborhoodOp, f: F) {
    match op {
        NeighborhoodOp::SplitMerge => for_each_split_merge(blocks, f),
        NeighborhoodOp::Shift => for_each_shift(blocks, f),
    }
}

/// The `index`-th SPLIT/MERGE neighbour in an order fixed by the block list.
pub(crate) fn nth_split_merge(blocks: &[u32], mut index: u64) -> Change {
    for &b in blocks {
        let rest = b ^ top_bit(b);
        let count = (1u64 << rest.count_ones()) - 1;
        if index < count {
            return Change::split(b, deposit_bits(index + 1, rest));
        }
        index -= count;
    }
    let k = blocks.len();
    for i in 0..k {
        let row = (k - i - 1) as u64;
        if index < row {
            return Change::merge(blocks[i], blocks[i + 1 + index as usize]);
        }
        index -= row;
    }
    unreachable!("neighbour index out of range")
}
