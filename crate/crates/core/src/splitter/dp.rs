//! Optimal splitter tree construction for a single multi-fanout source.
//!
//! State `(l, r, b, d)` describes `b` branches leaving a node at depth `d`
//! (depth 0 is the source) that together must reach the contiguous leaves
//! `l..=r`. Each state holds the best [`CostTuple`] and a [`PivotEntry`]
//! telling how the optimum decomposes, so the tree can be rebuilt by
//! following pivots from the root state `(1, n, 1, 0)`.
//!
//! Leaf positions in the public table accessors are 1-based.

use std::fmt::{self, Write as _};

use crate::config::PhaseConfig;

use super::cost::CostTuple;

/// How extra delay beyond a leaf's slack is treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TreeMode {
    /// Extra delay beyond the slack is allowed and paid for in the first two
    /// tuple components.
    Initial,
    /// Extra delay beyond the slack is forbidden.
    Reconstruct,
}

/// One fanout of the source, described relative to the source level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FanoutLeaf {
    /// `L(fanout) - L(source) - 1`.
    pub delay: u32,
    /// Levels the fanout may be delayed at no cost.
    pub slack: u32,
}

impl FanoutLeaf {
    pub fn new(delay: u32, slack: u32) -> Self {
        FanoutLeaf { delay, slack }
    }
}

/// Argmin record for one table state.
///
/// For `b == 1` the state inserts a buffer (`branches == 1`) or a splitter
/// with `branches` outputs at `depth_next`; `split` is `None`. For `b > 1`
/// the leaves `l..=split` take `branches` of the branches and the rest go
/// right, both at `depth_next == d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PivotEntry {
    pub split: Option<usize>,
    pub branches: usize,
    pub depth_next: u32,
}

impl PivotEntry {
    /// The `(L_split, branches, depth_next)` triple with `-1` for "no split".
    pub fn as_tuple(&self) -> (i64, usize, u32) {
        (
            self.split.map_or(-1, |s| s as i64),
            self.branches,
            self.depth_next,
        )
    }
}

impl fmt::Display for PivotEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (s, b, d) = self.as_tuple();
        write!(f, "({s},{b},{d})")
    }
}

/// Buffers needed to reach a leaf `delta` levels below the feeding depth
/// when every hop may span up to `ps` levels.
pub fn leaf_connection_cost(delta: u32, ps: u32) -> u32 {
    assert!(ps >= 1, "phase span must be at least 1");
    delta / ps
}

/// Smallest `k` with `x^k >= n`.
pub(crate) fn ceil_log(n: usize, x: usize) -> u32 {
    let mut k = 0;
    let mut reach = 1usize;
    while reach < n {
        reach = reach.saturating_mul(x);
        k += 1;
    }
    k
}

/// Filled `dp`/`pt` tables for one source.
#[derive(Debug, Clone)]
pub struct DpTables {
    leaves: Vec<FanoutLeaf>,
    mode: TreeMode,
    max_fanout: usize,
    span: u32,
    d_max: u32,
    cap: Option<u32>,
    cost: Vec<CostTuple>,
    pivot: Vec<Option<PivotEntry>>,
    transitions: u64,
}

impl DpTables {
    pub fn n(&self) -> usize {
        self.leaves.len()
    }

    pub fn leaves(&self) -> &[FanoutLeaf] {
        &self.leaves
    }

    pub fn mode(&self) -> TreeMode {
        self.mode
    }

    pub fn max_fanout(&self) -> usize {
        self.max_fanout
    }

    pub fn span(&self) -> u32 {
        self.span
    }

    pub fn d_max(&self) -> u32 {
        self.d_max
    }

    /// Per-leaf extra-delay cap the tables were built under, if any.
    pub fn cap(&self) -> Option<u32> {
        self.cap
    }

    /// Number of candidate transitions evaluated while filling the tables.
    pub fn transitions(&self) -> u64 {
        self.transitions
    }

    fn index(&self, l: usize, r: usize, b: usize, d: u32) -> usize {
        // 0-based l <= r packed into a triangle
        let tri = r * (r + 1) / 2 + l;
        (tri * self.max_fanout + (b - 1)) * (self.d_max as usize + 1) + d as usize
    }

    fn check(&self, l: usize, r: usize, b: usize, d: u32) -> Option<usize> {
        let n = self.n();
        if l == 0 || l > r || r > n || b == 0 || b > self.max_fanout || d > self.d_max {
            return None;
        }
        Some(self.index(l - 1, r - 1, b, d))
    }

    /// `dp[l][r][b][d]`, 1-based leaves. Out-of-range states are infeasible.
    pub fn dp(&self, l: usize, r: usize, b: usize, d: u32) -> CostTuple {
        self.check(l, r, b, d)
            .map_or(CostTuple::Infeasible, |i| self.cost[i])
    }

    /// `pt[l][r][b][d]`, 1-based leaves; `None` for base cases and
    /// infeasible states.
    pub fn pt(&self, l: usize, r: usize, b: usize, d: u32) -> Option<PivotEntry> {
        self.check(l, r, b, d).and_then(|i| self.pivot[i])
    }

    /// Cost of the whole tree, `dp[1][n][1][0]`.
    pub fn root(&self) -> CostTuple {
        self.dp(1, self.n(), 1, 0)
    }

    /// Text dump of every `b`/`d` entry for the leaf range `l..=r`.
    pub fn dump_slice(&self, l: usize, r: usize) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# dp/pt for leaves {l}..={r} (n={}, X={}, ps={}, Dmax={})",
            self.n(),
            self.max_fanout,
            self.span,
            self.d_max
        );
        for b in 1..=self.max_fanout {
            for d in 0..=self.d_max {
                let c = self.dp(l, r, b, d);
                if !c.is_finite() {
                    continue;
                }
                let p = self
                    .pt(l, r, b, d)
                    .map_or_else(|| "leaf".to_string(), |p| p.to_string());
                let _ = writeln!(out, "dp[{l}][{r}][{b}][{d}] = {c}  pt = {p}");
            }
        }
        out
    }
}

/// Base case: leaf `leaf` fed directly from a branch at depth `d`.
fn leaf_cost(leaf: FanoutLeaf, d: u32, ps: u32, mode: TreeMode, cap: Option<u32>) -> CostTuple {
    if d <= leaf.delay {
        return CostTuple::buffers(leaf_connection_cost(leaf.delay - d, ps));
    }
    let delta = d - leaf.delay;
    if delta <= leaf.slack {
        return CostTuple::ZERO;
    }
    match mode {
        TreeMode::Reconstruct => CostTuple::Infeasible,
        TreeMode::Initial => {
            let paid = delta - leaf.slack;
            if cap.is_some_and(|c| paid > c) {
                CostTuple::Infeasible
            } else {
                CostTuple::extra(paid)
            }
        }
    }
}

/// Fills the tables with the plain recurrence, optionally forbidding any
/// leaf from paying more than `cap` levels of extra delay.
///
/// `leaves` must be sorted by ascending delay.
pub fn build_tree_dp_with_cap(
    leaves: &[FanoutLeaf],
    cfg: &PhaseConfig,
    mode: TreeMode,
    cap: Option<u32>,
) -> DpTables {
    assert!(!leaves.is_empty(), "splitter tree needs at least one fanout");
    let n = leaves.len();
    let x = cfg.max_fanout;
    let ps = cfg.span();
    let max_delay = leaves.iter().map(|f| f.delay).max().unwrap_or(0);
    let d_max = max_delay + ceil_log(n, x);

    let states = n * (n + 1) / 2 * x * (d_max as usize + 1);
    let mut t = DpTables {
        leaves: leaves.to_vec(),
        mode,
        max_fanout: x,
        span: ps,
        d_max,
        cap,
        cost: vec![CostTuple::Infeasible; states],
        pivot: vec![None; states],
        transitions: 0,
    };

    for len in 0..n {
        for l in 0..n - len {
            let r = l + len;
            let max_b = x.min(len + 1);
            for d in (0..=d_max).rev() {
                // b > 1: two disjoint groups of branches at the same depth
                for b in 2..=max_b {
                    let mut best = CostTuple::Infeasible;
                    let mut arg = None;
                    for k in 1..b {
                        for p in (l + k - 1)..=(r - (b - k)) {
                            t.transitions += 1;
                            let c = t.cost[t.index(l, p, k, d)]
                                .combine(t.cost[t.index(p + 1, r, b - k, d)]);
                            if c < best {
                                best = c;
                                arg = Some(PivotEntry {
                                    split: Some(p + 1),
                                    branches: k,
                                    depth_next: d,
                                });
                            }
                        }
                    }
                    let i = t.index(l, r, b, d);
                    t.cost[i] = best;
                    t.pivot[i] = arg;
                }

                // b == 1
                let i = t.index(l, r, 1, d);
                if len == 0 {
                    t.cost[i] = leaf_cost(leaves[l], d, ps, mode, cap);
                    continue;
                }
                let mut best = CostTuple::Infeasible;
                let mut arg = None;
                for pr in 1..=ps.min(d_max - d) {
                    for k in 1..=max_b {
                        t.transitions += 1;
                        let c = t.cost[t.index(l, r, k, d + pr)].plus_node();
                        if c < best {
                            best = c;
                            arg = Some(PivotEntry {
                                split: None,
                                branches: k,
                                depth_next: d + pr,
                            });
                        }
                    }
                }
                t.cost[i] = best;
                t.pivot[i] = arg;
            }
        }
    }
    t
}

/// Builds the tables for one source and returns them with a
/// lexicographically optimal root.
///
/// Per-state minimization is exact for the additive components but can pick
/// a sub-optimal total extra delay when a sibling already dominates the
/// maximum. When the root needs extra delay the tables are rebuilt with that
/// maximum as a hard cap, which makes the remaining objective additive.
pub fn build_tree_dp(leaves: &[FanoutLeaf], cfg: &PhaseConfig, mode: TreeMode) -> DpTables {
    let first = build_tree_dp_with_cap(leaves, cfg, mode, None);
    match first.root().max_extra() {
        Some(m) if m > 0 => build_tree_dp_with_cap(leaves, cfg, mode, Some(m)),
        _ => first,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(ps: u32, x: usize) -> PhaseConfig {
        PhaseConfig::with_skip((ps - 1) as u8).max_fanout(x)
    }

    #[test]
    fn connection_cost_examples() {
        assert_eq!(leaf_connection_cost(3, 1), 3);
        assert_eq!(leaf_connection_cost(4, 2), 2);
        assert_eq!(leaf_connection_cost(0, 3), 0);
    }

    #[test]
    fn ceil_log_values() {
        assert_eq!(ceil_log(1, 2), 0);
        assert_eq!(ceil_log(2, 2), 1);
        assert_eq!(ceil_log(5, 2), 3);
        assert_eq!(ceil_log(16, 4), 2);
        assert_eq!(ceil_log(17, 4), 3);
    }

    #[test]
    fn single_leaf_is_buffer_chain() {
        let t = build_tree_dp(&[FanoutLeaf::new(3, 0)], &cfg(1, 2), TreeMode::Initial);
        assert_eq!(t.root(), CostTuple::new(0, 0, 3));
        assert_eq!(t.d_max(), 3);
    }

    #[test]
    fn two_equal_leaves_share_one_splitter() {
        let leaves = [FanoutLeaf::new(1, 0), FanoutLeaf::new(1, 0)];
        let t = build_tree_dp(&leaves, &cfg(1, 2), TreeMode::Initial);
        assert_eq!(t.root(), CostTuple::new(0, 0, 1));
        let p = t.pt(1, 2, 1, 0).unwrap();
        assert_eq!(p.as_tuple(), (-1, 2, 1));
    }

    #[test]
    fn uneven_pair_needs_two_more_buffers() {
        let leaves = [FanoutLeaf::new(1, 0), FanoutLeaf::new(3, 0)];
        let t = build_tree_dp(&leaves, &cfg(1, 2), TreeMode::Initial);
        assert_eq!(t.root(), CostTuple::new(0, 0, 3));
    }

    #[test]
    fn zero_delay_pair_needs_extra_delay_in_initial_mode() {
        let leaves = [FanoutLeaf::new(0, 0), FanoutLeaf::new(0, 0)];
        let init = build_tree_dp(&leaves, &cfg(1, 2), TreeMode::Initial);
        assert_eq!(init.root(), CostTuple::new(1, 2, 1));
        let rec = build_tree_dp(&leaves, &cfg(1, 2), TreeMode::Reconstruct);
        assert_eq!(rec.root(), CostTuple::Infeasible);
        let slack = [FanoutLeaf::new(0, 1), FanoutLeaf::new(0, 1)];
        let rec = build_tree_dp(&slack, &cfg(1, 2), TreeMode::Reconstruct);
        assert_eq!(rec.root(), CostTuple::new(0, 0, 1));
    }

    #[test]
    fn skipping_removes_buffers() {
        let leaves = [FanoutLeaf::new(1, 0), FanoutLeaf::new(5, 0)];
        let c1 = build_tree_dp(&leaves, &cfg(1, 2), TreeMode::Initial).root();
        let c2 = build_tree_dp(&leaves, &cfg(2, 2), TreeMode::Initial).root();
        let c4 = build_tree_dp(&leaves, &cfg(4, 2), TreeMode::Initial).root();
        assert_eq!(c1, CostTuple::new(0, 0, 5));
        assert!(c2 < c1);
        assert!(c4 <= c2);
    }
}
