//! Splicing a computed tree into a netlist.

use std::collections::VecDeque;

use crate::netlist::{Levels, Netlist, NodeId, NodeKind};

use super::dp::FanoutLeaf;
use super::tree::{SplitterTree, TreeNodeKind, TreeParent};

/// Fanout leaves of `source` at the current levels, in fanout-edge order,
/// with slack taken from `slack` for two-input gates and 0 otherwise.
pub fn fanout_leaves(net: &Netlist, levels: &Levels, source: NodeId, slack: &[u32]) -> Vec<FanoutLeaf> {
    net.fanout_edges(source)
        .iter()
        .map(|&e| {
            let dst = net.edge(e).dst;
            let delay = levels[dst] - levels[source] - 1;
            assert!(delay >= 0, "edge {e} spans {} levels", delay + 1);
            let s = match net.kind(dst) {
                NodeKind::Gate(op) if op.arity() == 2 => slack.get(dst.0).copied().unwrap_or(0),
                _ => 0,
            };
            FanoutLeaf::new(delay as u32, s)
        })
        .collect()
}

/// Replaces the direct fanout edges of `source` with `tree`.
///
/// `tree` must have been built from [`fanout_leaves`] of the same state so
/// its leaf indices follow the fanout-edge order. New nodes are appended
/// with names from `counter` (`bufK` / `splK`) at level
/// `L(source) + depth`. A leaf fed later than its level moves down, and
/// the move is pushed forward so every edge still spans at least one
/// level; outputs move together. Returns the number of levels each leaf
/// moved.
pub fn apply_tree(
    net: &mut Netlist,
    levels: &mut Levels,
    source: NodeId,
    tree: &SplitterTree,
    counter: &mut usize,
) -> Vec<u32> {
    let leaf_edges: Vec<usize> = net.fanout_edges(source).to_vec();
    assert_eq!(leaf_edges.len(), tree.leaves.len(), "tree does not match fanouts");
    let base = levels[source];
    let mut ids = Vec::with_capacity(tree.nodes.len());
    for node in &tree.nodes {
        let (kind, stem) = match node.kind {
            TreeNodeKind::Buffer => (NodeKind::Buffer, "buf"),
            TreeNodeKind::Splitter => (NodeKind::Splitter, "spl"),
        };
        let name = net.fresh_name(stem, counter);
        let id = net.add_node(kind, name);
        levels.push(base + i64::from(node.depth));
        let parent = match node.parent {
            TreeParent::Source => source,
            TreeParent::Node(p) => ids[p],
        };
        net.add_edge(parent, id, false);
        ids.push(id);
    }
    let mut moved = Vec::with_capacity(tree.leaves.len());
    let mut raised = Vec::new();
    for a in &tree.leaves {
        let e = leaf_edges[a.leaf];
        let parent = match a.parent {
            TreeParent::Source => source,
            TreeParent::Node(p) => ids[p],
        };
        if parent != source {
            net.set_edge_src(e, parent);
        }
        let dst = net.edge(e).dst;
        let target = levels[parent] + 1;
        let before = levels[dst];
        if target > before {
            levels[dst] = target;
            raised.push(dst);
        }
        moved.push((levels[dst] - before) as u32);
    }
    push_forward(net, levels, raised);
    moved
}

/// Restores `L(dst) >= L(src) + 1` downstream of `start` and keeps every
/// output at one shared level.
pub fn push_forward(net: &Netlist, levels: &mut Levels, start: Vec<NodeId>) {
    let outputs = net.outputs();
    let mut queue: VecDeque<NodeId> = start.into();
    while let Some(n) = queue.pop_front() {
        for &e in net.fanout_edges(n) {
            let d = net.edge(e).dst;
            if levels[d] < levels[n] + 1 {
                levels[d] = levels[n] + 1;
                queue.push_back(d);
            }
        }
        if net.kind(n) == NodeKind::PrimaryOutput {
            let top = outputs.iter().map(|&o| levels[o]).max().unwrap_or(0);
            for &o in &outputs {
                levels[o] = top;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{optimal_tree, TreeMode};
    use super::*;
    use crate::config::PhaseConfig;
    use crate::netlist::parse_bench;

    #[test]
    fn one_splitter_for_two_leaves() {
        let mut net =
            parse_bench("INPUT(a)\nINPUT(b)\ng = AND(a,b)\nh = OR(g,b)\nk = AND(g,b)\nOUTPUT(h)\nOUTPUT(k)\n").unwrap();
        let mut levels = Levels::new(vec![0, 0, 1, 3, 3, 4, 4]);
        let g = net.find_signal("g").unwrap();
        let leaves = fanout_leaves(&net, &levels, g, &[]);
        assert_eq!(leaves, vec![FanoutLeaf::new(1, 0); 2]);
        let cfg = PhaseConfig::default().max_fanout(2);
        let tree = optimal_tree(&leaves, &cfg, TreeMode::Initial).tree().unwrap();
        let before = net.cost();
        let moved = apply_tree(&mut net, &mut levels, g, &tree, &mut 0);
        assert_eq!(moved, vec![0, 0]);
        let after = net.cost();
        assert_eq!(after.splitters - before.splitters, 1);
        assert_eq!(after.buffers, before.buffers);
        let s = net.find_signal("spl0").unwrap();
        assert_eq!(levels[s], 2);
        assert_eq!(net.fanout_count(g), 1);
        assert_eq!(net.fanout_count(s), 2);
    }

    #[test]
    fn extra_delay_moves_leaf_and_outputs() {
        let mut net = parse_bench("INPUT(a)\nINPUT(b)\nh = OR(a,b)\nk = AND(a,b)\nOUTPUT(h)\nOUTPUT(k)\nOUTPUT(z) = b\n").unwrap();
        let mut levels = Levels::new(vec![0, 0, 1, 1, 2, 2, 2]);
        let a = net.find_signal("a").unwrap();
        let leaves = fanout_leaves(&net, &levels, a, &[]);
        let cfg = PhaseConfig::default().max_fanout(2);
        let sol = optimal_tree(&leaves, &cfg, TreeMode::Initial);
        assert_eq!(sol.root().max_extra(), Some(1));
        let tree = sol.tree().unwrap();
        let moved = apply_tree(&mut net, &mut levels, a, &tree, &mut 0);
        assert_eq!(moved, vec![1, 1]);
        let h = net.find_signal("h").unwrap();
        assert_eq!(levels[h], 2);
        for o in net.outputs() {
            assert_eq!(levels[o], 3);
        }
    }
}
