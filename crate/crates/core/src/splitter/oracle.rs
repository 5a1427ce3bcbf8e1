//! Exhaustive reference for the splitter tree tables.
//!
//! Enumerates every tree shape (arbitrary, not necessarily contiguous, leaf
//! groupings), every node depth up to the same `D_max`, every hop span up
//! to `ps`, explicit buffer chains, and every extra-delay choice for each
//! leaf. Sub-results are kept as Pareto sets, so the lexicographic minimum
//! over complete trees is exact. Intended for small instances only.

use std::collections::HashMap;

use crate::config::PhaseConfig;
use crate::error::TreeError;

use super::cost::CostTuple;
use super::dp::{ceil_log, FanoutLeaf, TreeMode};

pub const ORACLE_MAX_LEAVES: usize = 6;
pub const ORACLE_MAX_DELAY: u32 = 8;

type Triple = (u32, u32, u32);

struct Search<'a> {
    leaves: &'a [FanoutLeaf],
    mode: TreeMode,
    x: usize,
    ps: u32,
    d_max: u32,
    memo: HashMap<(u32, u32), Vec<Triple>>,
}

fn pareto(mut v: Vec<Triple>) -> Vec<Triple> {
    v.sort_unstable();
    v.dedup();
    let mut out: Vec<Triple> = Vec::new();
    for t in v {
        if !out
            .iter()
            .any(|o| o.0 <= t.0 && o.1 <= t.1 && o.2 <= t.2)
        {
            out.push(t);
        }
    }
    out
}

fn product(a: &[Triple], b: &[Triple]) -> Vec<Triple> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push((x.0.max(y.0), x.1 + y.1, x.2 + y.2));
        }
    }
    pareto(out)
}

/// Every way to split `items` into exactly `k` non-empty unordered blocks.
fn partitions(items: &[u32], k: usize) -> Vec<Vec<u32>> {
    fn rec(items: &[u32], k: usize, blocks: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let Some((&first, rest)) = items.split_first() else {
            if blocks.len() == k {
                out.push(blocks.clone());
            }
            return;
        };
        for i in 0..blocks.len() {
            blocks[i] |= 1 << first;
            rec(rest, k, blocks, out);
            blocks[i] &= !(1 << first);
        }
        if blocks.len() < k {
            blocks.push(1 << first);
            rec(rest, k, blocks, out);
            blocks.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, k, &mut Vec::new(), &mut out);
    out
}

impl Search<'_> {
    fn extra_cost(&self, leaf: FanoutLeaf, e: u32) -> Option<Triple> {
        if e <= leaf.slack {
            return Some((0, 0, 0));
        }
        match self.mode {
            TreeMode::Reconstruct => None,
            TreeMode::Initial => Some((e - leaf.slack, e - leaf.slack, 0)),
        }
    }

    /// Achievable costs for one wire at depth `d` that must reach `set`.
    fn wire(&mut self, set: u32, d: u32) -> Vec<Triple> {
        if let Some(v) = self.memo.get(&(set, d)) {
            return v.clone();
        }
        let mut opts = Vec::new();
        if set.count_ones() == 1 {
            let leaf = self.leaves[set.trailing_zeros() as usize];
            // the leaf sits at depth delay + 1 + e and must be within ps of d
            let lo = d.saturating_sub(leaf.delay);
            for e in lo..=lo + self.ps {
                let hop = (leaf.delay + 1 + e) as i64 - d as i64;
                if (1..=self.ps as i64).contains(&hop) {
                    if let Some(c) = self.extra_cost(leaf, e) {
                        opts.push(c);
                    }
                }
            }
        }
        let items: Vec<u32> = (0..self.leaves.len() as u32)
            .filter(|i| set & (1 << i) != 0)
            .collect();
        for next in d + 1..=(d + self.ps).min(self.d_max) {
            // buffer
            for c in self.wire(set, next) {
                opts.push((c.0, c.1, c.2 + 1));
            }
            // splitter with k outputs
            for k in 2..=self.x.min(items.len()) {
                for blocks in partitions(&items, k) {
                    let mut acc = vec![(0, 0, 1)];
                    for blk in blocks {
                        let sub = self.wire(blk, next);
                        acc = product(&acc, &sub);
                        if acc.is_empty() {
                            break;
                        }
                    }
                    opts.extend(acc);
                }
            }
        }
        let res = pareto(opts);
        self.memo.insert((set, d), res.clone());
        res
    }
}

/// Lexicographically minimal tree cost by exhaustive search.
pub fn brute_force_tree_oracle(
    leaves: &[FanoutLeaf],
    cfg: &PhaseConfig,
    mode: TreeMode,
) -> Result<CostTuple, TreeError> {
    if leaves.is_empty()
        || leaves.len() > ORACLE_MAX_LEAVES
        || leaves.iter().any(|f| f.delay > ORACLE_MAX_DELAY)
    {
        return Err(TreeError::SizeLimit {
            max_leaves: ORACLE_MAX_LEAVES,
            max_delay: ORACLE_MAX_DELAY,
        });
    }
    let max_delay = leaves.iter().map(|f| f.delay).max().unwrap_or(0);
    let mut s = Search {
        leaves,
        mode,
        x: cfg.max_fanout,
        ps: cfg.span(),
        d_max: max_delay + ceil_log(leaves.len(), cfg.max_fanout),
        memo: HashMap::new(),
    };
    let full = (1u32 << leaves.len()) - 1;
    Ok(s
        .wire(full, 0)
        .into_iter()
        .min()
        .map_or(CostTuple::Infeasible, |(m, t, b)| CostTuple::new(m, t, b)))
}
