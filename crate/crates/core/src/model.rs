//! Level/edge-cost variables shared by both level-assignment LPs.

use crate::config::PhaseConfig;
use crate::lp::{LinearProgram, Sense, VarId};
use crate::netlist::{Levels, Netlist, NodeKind};

pub(crate) struct LevelModel {
    pub lp: LinearProgram,
    /// Level variable per node; every output maps to one shared variable.
    pub level_var: Vec<VarId>,
    /// Edge-cost variable per edge.
    pub cost_var: Vec<VarId>,
}

/// Builds `L_j - L_i >= 1` and `L_j - L_i - N*C_ij <= N` for every edge,
/// fixes inputs at the configured level, and weights each `C_ij` by
/// `weight(edge index)` in the objective.
pub(crate) fn level_model(net: &Netlist, cfg: &PhaseConfig, weight: impl Fn(usize) -> f64) -> LevelModel {
    let mut lp = LinearProgram::new();
    let n_span = f64::from(cfg.span());
    let base = cfg.pi_level as f64;
    let mut out_var = None;
    let mut level_var = Vec::with_capacity(net.num_nodes());
    for id in net.node_ids() {
        let v = match net.kind(id) {
            NodeKind::PrimaryInput => lp.add_var(format!("L_{}", net.name(id)), base, base),
            NodeKind::PrimaryOutput => {
                *out_var.get_or_insert_with(|| lp.add_var("L_outputs", base, f64::INFINITY))
            }
            _ => lp.add_var(format!("L_{}", net.name(id)), base, f64::INFINITY),
        };
        level_var.push(v);
    }
    let mut cost_var = Vec::with_capacity(net.num_edges());
    for (k, e) in net.edges().iter().enumerate() {
        let c = lp.add_var(format!("C_{k}"), 0.0, f64::INFINITY);
        lp.set_objective(c, weight(k));
        let (li, lj) = (level_var[e.src.0], level_var[e.dst.0]);
        lp.add_constraint(vec![(lj, 1.0), (li, -1.0)], Sense::Ge, 1.0);
        lp.add_constraint(vec![(lj, 1.0), (li, -1.0), (c, -n_span)], Sense::Le, n_span);
        cost_var.push(c);
    }
    LevelModel {
        lp,
        level_var,
        cost_var,
    }
}

/// `ceil(value - 1e-9)` per node.
pub(crate) fn round_levels(model: &LevelModel, values: &[f64]) -> Levels {
    Levels::new(
        model
            .level_var
            .iter()
            .map(|v| (values[v.0] - 1e-9).ceil() as i64)
            .collect(),
    )
}
