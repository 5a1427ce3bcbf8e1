//! Leaf-order search around the interval tables.
//!
//! The interval recurrence only builds trees whose subtrees cover
//! contiguous runs of the leaf list. With zero slack, ascending delay is a
//! safe order. A leaf with slack may be fed anywhere in
//! `[delay, delay + slack]`, and the right position relative to the other
//! leaves depends on where it ends up. Each choice of effective delay per
//! leaf induces one order; the best table over those orders is kept.

use std::collections::HashSet;

use crate::config::PhaseConfig;
use crate::error::TreeError;

use super::cost::CostTuple;
use super::dp::{build_tree_dp, DpTables, FanoutLeaf, TreeMode};
use super::tree::{backtrack_tree, SplitterTree};

/// Best tables found for one fanout set.
#[derive(Debug, Clone)]
pub struct TreeSolution {
    /// `order[k]` is the input index of the leaf at table position `k + 1`.
    pub order: Vec<usize>,
    pub tables: DpTables,
    /// Distinct leaf orders whose tables were filled.
    pub orders_tried: usize,
    /// Whether every effective-delay assignment was covered.
    pub exhaustive: bool,
}

impl TreeSolution {
    pub fn root(&self) -> CostTuple {
        self.tables.root()
    }

    /// The optimal tree with leaf attachments indexed by input position.
    pub fn tree(&self) -> Result<SplitterTree, TreeError> {
        let mut tree = backtrack_tree(&self.tables)?;
        for a in &mut tree.leaves {
            a.leaf = self.order[a.leaf];
        }
        tree.leaves.sort_by_key(|a| a.leaf);
        Ok(tree)
    }
}

fn order_for(leaves: &[FanoutLeaf], t: &[u32]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..leaves.len()).collect();
    idx.sort_by_key(|&i| (t[i], leaves[i].delay, leaves[i].slack, i));
    idx
}

/// Effective-delay assignments to try, the all-zero-shift one first. Over
/// budget, only no shift, full shift everywhere, and full shift of one leaf
/// at a time are tried.
fn assignments(leaves: &[FanoutLeaf], budget: usize) -> (Vec<Vec<u32>>, bool) {
    let base: Vec<u32> = leaves.iter().map(|f| f.delay).collect();
    let slacked: Vec<usize> = (0..leaves.len()).filter(|&i| leaves[i].slack > 0).collect();
    let total = slacked
        .iter()
        .try_fold(1usize, |acc, &i| acc.checked_mul(leaves[i].slack as usize + 1));
    if total.is_some_and(|n| n <= budget) {
        let mut out = Vec::new();
        let mut t = base.clone();
        'outer: loop {
            out.push(t.clone());
            for &i in &slacked {
                if t[i] < leaves[i].delay + leaves[i].slack {
                    t[i] += 1;
                    continue 'outer;
                }
                t[i] = leaves[i].delay;
            }
            return (out, true);
        }
    }
    let mut out = vec![base.clone()];
    out.push(leaves.iter().map(|f| f.delay + f.slack).collect());
    for &i in &slacked {
        let mut t = base.clone();
        t[i] += leaves[i].slack;
        out.push(t);
    }
    (out, false)
}

/// Lexicographically optimal splitter tree tables for `leaves`, given in
/// any order.
///
/// Ties between orders keep the earliest one tried, and the plain
/// ascending-delay order is always tried first.
pub fn optimal_tree(leaves: &[FanoutLeaf], cfg: &PhaseConfig, mode: TreeMode) -> TreeSolution {
    assert!(!leaves.is_empty(), "splitter tree needs at least one fanout");
    let (cands, exhaustive) = assignments(leaves, cfg.order_budget);
    let mut seen = HashSet::new();
    let mut best: Option<(Vec<usize>, DpTables)> = None;
    for t in cands {
        let order = order_for(leaves, &t);
        if !seen.insert(order.clone()) {
            continue;
        }
        let sorted: Vec<FanoutLeaf> = order.iter().map(|&i| leaves[i]).collect();
        let tables = build_tree_dp(&sorted, cfg, mode);
        if best.as_ref().is_none_or(|(_, b)| tables.root() < b.root()) {
            best = Some((order, tables));
        }
    }
    let (order, tables) = best.expect("at least one order is tried");
    TreeSolution {
        order,
        tables,
        orders_tried: seen.len(),
        exhaustive,
    }
}
