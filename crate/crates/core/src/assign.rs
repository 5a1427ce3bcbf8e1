//! Level assignment for a fixed splitter topology, and buffer
//! materialization.

use log::debug;

use crate::config::PhaseConfig;
use crate::error::{OptimizeError, Step};
use crate::lp::{solve_ilp_small, solve_lp, LinearProgram, LpStatus, VarId};
use crate::model::{level_model, round_levels};
use crate::netlist::{Cost, Levels, Netlist, NodeKind};

/// Default branch-and-bound node limit for exact assignment.
pub const DEFAULT_NODE_LIMIT: usize = 20_000;

/// Minimizes `sum C_ij` over the edge-span model of `graph`, which holds
/// gates, inputs, outputs and splitters but no buffers.
pub fn build_assignment_lp(graph: &Netlist, cfg: &PhaseConfig) -> LinearProgram {
    level_model(graph, cfg, |_| 1.0).lp
}

#[derive(Debug, Clone)]
pub struct Assignment {
    pub levels: Levels,
    /// Objective of the solved program (fractional in relaxed mode).
    pub fractional_cost: f64,
    /// Whether the levels come from a proven integer optimum.
    pub exact: bool,
    pub lp_vars: usize,
    pub lp_rows: usize,
}

/// Assigns levels to `graph`.
///
/// Relaxed mode solves the LP and rounds every level up, which keeps every
/// edge span at least 1. Exact mode runs branch and bound over the same
/// program with integer levels and costs; when the node limit is hit the
/// best integer solution found is used and `exact` is false.
pub fn assign_levels(
    graph: &Netlist,
    cfg: &PhaseConfig,
    exact: bool,
    node_limit: usize,
) -> Result<Assignment, OptimizeError> {
    let step = Step::LevelAssignment;
    let model = level_model(graph, cfg, |_| 1.0);
    let sol = if exact {
        let ints: Vec<VarId> = model.level_var.iter().chain(&model.cost_var).copied().collect();
        solve_ilp_small(&model.lp, &ints, node_limit)
    } else {
        solve_lp(&model.lp)
    }
    .map_err(|source| OptimizeError::Solver { step, source })?;
    let proven = match sol.status {
        LpStatus::Optimal => exact,
        LpStatus::ResourceLimit if !sol.values.is_empty() => false,
        status => return Err(OptimizeError::Status { step, status }),
    };
    debug!("level assignment: objective {:.3}", sol.objective_value);
    Ok(Assignment {
        levels: round_levels(&model, &sol.values),
        fractional_cost: sol.objective_value,
        exact: proven,
        lp_vars: model.lp.num_vars(),
        lp_rows: model.lp.rows().len(),
    })
}

/// Buffers needed on an edge spanning `delta` levels.
pub fn buffers_for_span(delta: i64, span: u32) -> usize {
    let n = i64::from(span);
    ((delta + n - 1) / n - 1).max(0) as usize
}

/// Inserts `ceil(delta/N) - 1` buffers on every edge of `graph`, at levels
/// `L_i + N, L_i + 2N, ...`.
///
/// Existing nodes keep their ids; buffers are appended and named `bufK`.
pub fn materialize_buffers(graph: &Netlist, levels: &Levels, cfg: &PhaseConfig) -> (Netlist, Levels) {
    let (mut net, _) = graph.filtered(|_| true);
    let mut lv = levels.clone();
    let span = cfg.span();
    let mut counter = 0usize;
    for e in 0..graph.num_edges() {
        let edge = graph.edge(e);
        let (li, lj) = (levels[edge.src], levels[edge.dst]);
        let k = buffers_for_span(lj - li, span);
        let mut prev = edge.src;
        for step in 1..=k {
            let name = net.fresh_name("buf", &mut counter);
            let b = net.add_node(NodeKind::Buffer, name);
            lv.push(li + step as i64 * i64::from(span));
            net.add_edge(prev, b, false);
            prev = b;
        }
        if k > 0 {
            net.set_edge_src(e, prev);
        }
    }
    (net, lv)
}

/// Buffer and splitter counts of a materialized netlist.
pub fn total_cost(net: &Netlist) -> Cost {
    net.cost()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::{parse_bench, NodeId};

    #[test]
    fn span_buffer_counts() {
        assert_eq!(buffers_for_span(1, 1), 0);
        assert_eq!(buffers_for_span(5, 2), 2);
        assert_eq!(buffers_for_span(4, 4), 0);
        assert_eq!(buffers_for_span(6, 3), 1);
        assert_eq!(buffers_for_span(6, 1), 5);
    }

    #[test]
    fn materialize_places_earliest() {
        let net = parse_bench("INPUT(a)\ng = BUF(a)\nOUTPUT(g)\n").unwrap();
        let levels = Levels::new(vec![0, 5, 6]);
        let (m, lv) = materialize_buffers(&net, &levels, &PhaseConfig::with_skip(1));
        assert_eq!(total_cost(&m).buffers, 3);
        assert_eq!(&lv.as_slice()[3..], &[2, 4]);
        // the original buffer node is kept, two new ones feed it
        let g = net.find_signal("g").unwrap();
        let src = m.edge(m.fanin_edges(g)[0]).src;
        assert_eq!(lv[src], 4);
        assert_eq!(m.name(NodeId(3)), "buf0");
    }

    #[test]
    fn chain_needs_no_buffers() {
        let net = parse_bench("INPUT(a)\nINPUT(b)\ng1 = AND(a,b)\ng2 = OR(g1,b)\nOUTPUT(g2)\n").unwrap();
        let r = assign_levels(&net, &PhaseConfig::default(), false, 0).unwrap();
        // b -> g2 spans two levels
        assert!((r.fractional_cost - 1.0).abs() < 1e-9);
        let (m, _) = materialize_buffers(&net, &r.levels, &PhaseConfig::default());
        assert_eq!(total_cost(&m).total, 1);
        let skip = assign_levels(&net, &PhaseConfig::with_skip(1), true, 1000).unwrap();
        assert!(skip.exact);
        assert_eq!(skip.fractional_cost, 0.0);
    }
}
