//! The iterative flow: initial levels, first splitter insertion, then
//! alternating level assignment and splitter-tree reconstruction.

use std::time::{Duration, Instant};

use log::{debug, info};
use serde::{Deserialize, Serialize};

use crate::assign::{assign_levels, materialize_buffers, DEFAULT_NODE_LIMIT};
use crate::config::PhaseConfig;
use crate::error::{OptimizeError, Step};
use crate::initial::assign_initial_levels;
use crate::netlist::{
    absorb_inverters, strip_buffers, strip_buffers_and_splitters, validate, Cost, Levels, Netlist, NodeId,
    NodeKind,
};
use crate::splitter::{apply_tree, fanout_leaves, optimal_tree, TreeMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptimizeOptions {
    /// Solve level assignment as an integer program instead of rounding
    /// the LP relaxation.
    pub exact_ilp: bool,
    pub max_iters: usize,
    /// Branch-and-bound node limit in exact mode.
    pub node_limit: usize,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        OptimizeOptions {
            exact_ilp: false,
            max_iters: 50,
            node_limit: DEFAULT_NODE_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub buffers: usize,
    pub splitters: usize,
    pub total: usize,
    /// Level-assignment rounds run.
    pub iterations: usize,
    pub wall_time: Duration,
    /// Whether every level assignment was a proven integer optimum.
    pub exact: bool,
}

/// A netlist with every buffer and splitter in place, plus its levels.
#[derive(Debug, Clone)]
pub struct Solution {
    pub netlist: Netlist,
    pub levels: Levels,
    pub metrics: Metrics,
}

impl Solution {
    pub fn cost(&self) -> Cost {
        self.netlist.cost()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopReason {
    /// The last round matched the best total.
    NoImprovement,
    /// The last round was worse than the best total.
    CostIncreased,
    MaxIterations,
}

/// One level-assignment round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub fractional_cost: f64,
    pub cost: Cost,
    pub accepted: bool,
    /// Sources whose tree could not be rebuilt within slack and were
    /// rebuilt with payable extra delay instead.
    pub fallbacks: usize,
    /// Nodes and edges of the buffer-free graph that was levelled.
    pub graph_nodes: usize,
    pub graph_edges: usize,
    pub lp_vars: usize,
    pub lp_rows: usize,
}

/// Size of the initial level-assignment program.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InitialStats {
    pub graph_nodes: usize,
    pub graph_edges: usize,
    pub lp_vars: usize,
    pub lp_rows: usize,
    pub subset_rows: usize,
}

#[derive(Debug, Clone)]
pub struct OptimizeRun {
    pub solution: Solution,
    pub initial: InitialStats,
    pub history: Vec<IterationRecord>,
    pub stop: StopReason,
}

/// Slack of each node of a materialized netlist: for a two-input gate
/// whose only fanout starts a chain of buffers, the level of the last
/// buffer minus the gate level; 0 everywhere else.
pub fn compute_slacks(net: &Netlist, levels: &Levels) -> Vec<u32> {
    let mut out = vec![0; net.num_nodes()];
    for id in net.node_ids() {
        if !matches!(net.kind(id), NodeKind::Gate(op) if op.arity() == 2) {
            continue;
        }
        let mut cur = id;
        loop {
            let outs = net.fanout_edges(cur);
            if outs.len() != 1 {
                break;
            }
            let next = net.edge(outs[0]).dst;
            if net.kind(next) != NodeKind::Buffer {
                break;
            }
            cur = next;
        }
        out[id.0] = (levels[cur] - levels[id]) as u32;
    }
    out
}

/// Removes every buffer and splitter, keeping the levels of what remains.
pub fn strip_splitter_trees(net: &Netlist, levels: &Levels) -> (Netlist, Levels) {
    let (_, map) = net.filtered(|id| !net.kind(id).is_buffer_or_splitter());
    (strip_buffers_and_splitters(net), levels.remapped(&map))
}

/// Builds and splices a tree for every multi-fanout node of `gates`, in
/// ascending id order. Returns the number of sources that needed the
/// payable-extra-delay fallback.
fn insert_trees(
    net: &mut Netlist,
    levels: &mut Levels,
    cfg: &PhaseConfig,
    mode: TreeMode,
    slack: &[u32],
    step: Step,
) -> Result<usize, OptimizeError> {
    let sources: Vec<NodeId> = net.node_ids().filter(|&n| net.fanout_count(n) > 1).collect();
    let start = levels.clone();
    let mut counter = 0;
    let mut fallbacks = 0;
    for src in sources {
        let remaining: Vec<u32> = (0..net.num_nodes())
            .map(|i| {
                let used = levels.as_slice()[i] - start.as_slice().get(i).copied().unwrap_or(0);
                slack.get(i).copied().unwrap_or(0).saturating_sub(used.max(0) as u32)
            })
            .collect();
        let leaves = fanout_leaves(net, levels, src, &remaining);
        let mut sol = optimal_tree(&leaves, cfg, mode);
        if !sol.root().is_finite() && mode == TreeMode::Reconstruct {
            debug!("{}: no tree within slack, paying extra delay", net.name(src));
            fallbacks += 1;
            sol = optimal_tree(&leaves, cfg, TreeMode::Initial);
        }
        let tree = sol.tree().map_err(|source| OptimizeError::Tree { step, source })?;
        apply_tree(net, levels, src, &tree, &mut counter);
    }
    Ok(fallbacks)
}

/// Runs the full flow and returns the best solution with its history.
pub fn optimize_with_history(
    net: &Netlist,
    cfg: &PhaseConfig,
    opts: &OptimizeOptions,
) -> Result<OptimizeRun, OptimizeError> {
    cfg.validate()?;
    let clock = Instant::now();
    let gates = strip_buffers_and_splitters(&absorb_inverters(net));
    let report = validate(&gates);
    if !report.is_empty() {
        return Err(OptimizeError::Input(report.to_string().trim_end().to_string()));
    }
    if gates.outputs().is_empty() {
        return Err(OptimizeError::Input("netlist has no outputs".into()));
    }

    let init = assign_initial_levels(&gates, cfg)?;
    let initial = InitialStats {
        graph_nodes: gates.num_nodes(),
        graph_edges: gates.num_edges(),
        lp_vars: init.lp_vars,
        lp_rows: init.lp_rows,
        subset_rows: init.subset_rows,
    };
    let mut work = gates.clone();
    let mut levels = init.levels;
    insert_trees(&mut work, &mut levels, cfg, TreeMode::Initial, &[], Step::SplitterInsertion)?;
    let mut graph = strip_buffers(&work).0;
    let mut fallbacks = 0;

    let mut best: Option<(Netlist, Levels, Cost)> = None;
    let mut history = Vec::new();
    let mut all_exact = true;
    let stop = loop {
        let iteration = history.len() + 1;
        let asg = assign_levels(&graph, cfg, opts.exact_ilp, opts.node_limit)?;
        all_exact &= asg.exact;
        let (mat, mlv) = materialize_buffers(&graph, &asg.levels, cfg);
        let cost = mat.cost();
        let prev = best.as_ref().map(|b| b.2.total);
        let accepted = prev.is_none_or(|p| cost.total < p);
        info!(
            "iteration {iteration}: lp {:.2}, buffers {}, splitters {}, total {}, {}",
            asg.fractional_cost,
            cost.buffers,
            cost.splitters,
            cost.total,
            if accepted { "accepted" } else { "rejected" }
        );
        history.push(IterationRecord {
            iteration,
            fractional_cost: asg.fractional_cost,
            cost,
            accepted,
            fallbacks,
            graph_nodes: graph.num_nodes(),
            graph_edges: graph.num_edges(),
            lp_vars: asg.lp_vars,
            lp_rows: asg.lp_rows,
        });
        if !accepted {
            break if cost.total > prev.unwrap_or(0) {
                StopReason::CostIncreased
            } else {
                StopReason::NoImprovement
            };
        }
        let slacks = compute_slacks(&mat, &mlv);
        let (stripped, mut lv) = strip_splitter_trees(&mat, &mlv);
        best = Some((mat, mlv, cost));
        if iteration >= opts.max_iters {
            break StopReason::MaxIterations;
        }
        let mut next = stripped;
        fallbacks = insert_trees(&mut next, &mut lv, cfg, TreeMode::Reconstruct, &slacks, Step::Reconstruction)?;
        graph = strip_buffers(&next).0;
    };

    let (netlist, levels, cost) = best.expect("first round is always accepted");
    let metrics = Metrics {
        buffers: cost.buffers,
        splitters: cost.splitters,
        total: cost.total,
        iterations: history.len(),
        wall_time: clock.elapsed(),
        exact: opts.exact_ilp && all_exact,
    };
    Ok(OptimizeRun {
        solution: Solution {
            netlist,
            levels,
            metrics,
        },
        initial,
        history,
        stop,
    })
}

/// Minimizes inserted buffers and splitters for `net` under `cfg`.
pub fn optimize(net: &Netlist, cfg: &PhaseConfig, opts: &OptimizeOptions) -> Result<Solution, OptimizeError> {
    optimize_with_history(net, cfg, opts).map(|r| r.solution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::parse_bench;

    fn diamond() -> Netlist {
        parse_bench("INPUT(a)\nINPUT(b)\nINPUT(c)\ng1 = AND(a,b)\ng2 = AND(g1,c)\ng3 = OR(g1,g2)\nOUTPUT(g3)\n").unwrap()
    }

    #[test]
    fn slack_of_trailing_buffers() {
        let mut net = parse_bench("INPUT(a)\nINPUT(b)\ng = AND(a,b)\nm = MAJ(a,b,a)\nOUTPUT(g)\nOUTPUT(m)\n").unwrap();
        let g = net.find_signal("g").unwrap();
        let m = net.find_signal("m").unwrap();
        let mut levels = Levels::new(vec![0, 0, 5, 5, 8, 8]);
        for src in [g, m] {
            let e = net.fanout_edges(src)[0];
            let b1 = net.add_node(NodeKind::Buffer, format!("{}_b1", net.name(src)));
            let b2 = net.add_node(NodeKind::Buffer, format!("{}_b2", net.name(src)));
            levels.push(6);
            levels.push(7);
            net.add_edge(src, b1, false);
            net.add_edge(b1, b2, false);
            net.set_edge_src(e, b2);
        }
        let s = compute_slacks(&net, &levels);
        assert_eq!(s[g.0], 2);
        assert_eq!(s[m.0], 0);
    }

    #[test]
    fn chain_needs_nothing() {
        let net = parse_bench("INPUT(a)\ng = BUF(a)\nh = BUF(g)\nOUTPUT(h)\n").unwrap();
        let run = optimize_with_history(&net, &PhaseConfig::default(), &OptimizeOptions::default()).unwrap();
        assert_eq!(run.solution.metrics.total, 0);
    }

    #[test]
    fn diamond_costs() {
        // g1 feeds g2 and g3, g2 feeds g3; c needs two buffers to reach g2
        let net = diamond();
        let s0 = optimize(&net, &PhaseConfig::with_skip(0), &OptimizeOptions::default()).unwrap();
        assert_eq!((s0.metrics.splitters, s0.metrics.buffers), (1, 3));
        let s1 = optimize(&net, &PhaseConfig::with_skip(1), &OptimizeOptions::default()).unwrap();
        assert_eq!((s1.metrics.splitters, s1.metrics.buffers), (1, 1));
    }
}
