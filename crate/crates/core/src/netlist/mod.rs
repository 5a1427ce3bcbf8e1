//! Netlist model: a DAG of inputs, outputs, logic gates, buffers and
//! splitters with per-edge inversion flags.

mod bench;
mod json;
mod sim;
mod validate;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

pub use bench::{parse_bench, parse_bench_with_levels, serialize};
pub use json::{from_json, to_json};
pub use sim::{exhaustive_signature, simulate_words, truth_table_eq, SIM_MAX_INPUTS};
pub use validate::{validate, ValidationReport, Violation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

/// Boolean function of a logic gate. All three are symmetric in their
/// inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateOp {
    Maj3,
    /// Majority with a constant-0 input.
    And,
    /// Majority with a constant-1 input.
    Or,
}

impl GateOp {
    pub fn arity(self) -> usize {
        match self {
            GateOp::Maj3 => 3,
            GateOp::And | GateOp::Or => 2,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            GateOp::Maj3 => "MAJ3",
            GateOp::And => "AND",
            GateOp::Or => "OR",
        }
    }

    /// Bitwise evaluation over 64 patterns at once.
    pub fn eval(self, ins: &[u64]) -> u64 {
        match self {
            GateOp::Maj3 => (ins[0] & ins[1]) | (ins[0] & ins[2]) | (ins[1] & ins[2]),
            GateOp::And => ins[0] & ins[1],
            GateOp::Or => ins[0] | ins[1],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    PrimaryInput,
    PrimaryOutput,
    Gate(GateOp),
    Buffer,
    Splitter,
    /// Present only between parsing and [`absorb_inverters`].
    Inverter,
}

impl NodeKind {
    /// Number of logic inputs for gates (2 or 3).
    pub fn logic_fanin(self) -> Option<usize> {
        match self {
            NodeKind::Gate(op) => Some(op.arity()),
            _ => None,
        }
    }

    pub fn is_buffer_or_splitter(self) -> bool {
        matches!(self, NodeKind::Buffer | NodeKind::Splitter)
    }

    pub fn keyword(self) -> &'static str {
        match self {
            NodeKind::PrimaryInput => "INPUT",
            NodeKind::PrimaryOutput => "OUTPUT",
            NodeKind::Gate(op) => op.keyword(),
            NodeKind::Buffer => "BUF",
            NodeKind::Splitter => "SPL",
            NodeKind::Inverter => "NOT",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub src: NodeId,
    pub dst: NodeId,
    pub inverted: bool,
}

/// Inserted hardware in a netlist.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cost {
    pub buffers: usize,
    pub splitters: usize,
    pub total: usize,
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} buffers + {} splitters = {}",
            self.buffers, self.splitters, self.total
        )
    }
}

/// Directed acyclic netlist with dense node ids.
///
/// Primary outputs live in their own name space, so a port may share its
/// name with the signal that drives it.
#[derive(Debug, Clone, Default)]
pub struct Netlist {
    kinds: Vec<NodeKind>,
    names: Vec<String>,
    edges: Vec<Edge>,
    fanins: Vec<Vec<usize>>,
    fanouts: Vec<Vec<usize>>,
    signals: HashMap<String, NodeId>,
    ports: HashMap<String, NodeId>,
}

impl Netlist {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a node. Panics if the name is already taken in its name space.
    pub fn add_node(&mut self, kind: NodeKind, name: impl Into<String>) -> NodeId {
        let name = name.into();
        let id = NodeId(self.kinds.len());
        let table = if kind == NodeKind::PrimaryOutput {
            &mut self.ports
        } else {
            &mut self.signals
        };
        let clash = table.insert(name.clone(), id);
        assert!(clash.is_none(), "duplicate node name `{name}`");
        self.kinds.push(kind);
        self.names.push(name);
        self.fanins.push(Vec::new());
        self.fanouts.push(Vec::new());
        id
    }

    /// A signal name not used yet, built from `stem` and a counter.
    pub fn fresh_name(&self, stem: &str, counter: &mut usize) -> String {
        loop {
            let name = format!("{stem}{}", *counter);
            *counter += 1;
            if !self.signals.contains_key(&name) {
                return name;
            }
        }
    }

    pub fn add_edge(&mut self, src: NodeId, dst: NodeId, inverted: bool) -> usize {
        let i = self.edges.len();
        self.edges.push(Edge { src, dst, inverted });
        self.fanouts[src.0].push(i);
        self.fanins[dst.0].push(i);
        i
    }

    /// Moves the tail of edge `e` to `src`, keeping its head and polarity.
    pub fn set_edge_src(&mut self, e: usize, src: NodeId) {
        let old = self.edges[e].src;
        self.fanouts[old.0].retain(|&x| x != e);
        self.fanouts[src.0].push(e);
        self.edges[e].src = src;
    }

    pub fn set_edge_inverted(&mut self, e: usize, inverted: bool) {
        self.edges[e].inverted = inverted;
    }

    pub fn num_nodes(&self) -> usize {
        self.kinds.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.kinds.len()).map(NodeId)
    }

    pub fn kind(&self, id: NodeId) -> NodeKind {
        self.kinds[id.0]
    }

    pub fn name(&self, id: NodeId) -> &str {
        &self.names[id.0]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> Edge {
        self.edges[e]
    }

    /// Indices of edges entering `id`, in insertion order.
    pub fn fanin_edges(&self, id: NodeId) -> &[usize] {
        &self.fanins[id.0]
    }

    /// Indices of edges leaving `id`, in insertion order.
    pub fn fanout_edges(&self, id: NodeId) -> &[usize] {
        &self.fanouts[id.0]
    }

    pub fn fanout_count(&self, id: NodeId) -> usize {
        self.fanouts[id.0].len()
    }

    pub fn find_signal(&self, name: &str) -> Option<NodeId> {
        self.signals.get(name).copied()
    }

    pub fn find_output(&self, port: &str) -> Option<NodeId> {
        self.ports.get(port).copied()
    }

    pub fn inputs(&self) -> Vec<NodeId> {
        self.of_kind(|k| k == NodeKind::PrimaryInput)
    }

    pub fn outputs(&self) -> Vec<NodeId> {
        self.of_kind(|k| k == NodeKind::PrimaryOutput)
    }

    pub fn gates(&self) -> Vec<NodeId> {
        self.of_kind(|k| matches!(k, NodeKind::Gate(_)))
    }

    fn of_kind(&self, f: impl Fn(NodeKind) -> bool) -> Vec<NodeId> {
        self.node_ids().filter(|&n| f(self.kind(n))).collect()
    }

    /// Buffer and splitter counts.
    pub fn cost(&self) -> Cost {
        let buffers = self.kinds.iter().filter(|&&k| k == NodeKind::Buffer).count();
        let splitters = self.kinds.iter().filter(|&&k| k == NodeKind::Splitter).count();
        Cost {
            buffers,
            splitters,
            total: buffers + splitters,
        }
    }

    /// Kahn order, always releasing the smallest ready id first. Returns a
    /// node on a cycle when the graph is cyclic.
    pub fn topo_order(&self) -> Result<Vec<NodeId>, NodeId> {
        let n = self.num_nodes();
        let mut indeg: Vec<usize> = self.fanins.iter().map(Vec::len).collect();
        let mut ready: BTreeSet<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(i) = ready.pop_first() {
            order.push(NodeId(i));
            for &e in &self.fanouts[i] {
                let d = self.edges[e].dst.0;
                indeg[d] -= 1;
                if indeg[d] == 0 {
                    ready.insert(d);
                }
            }
        }
        if order.len() == n {
            Ok(order)
        } else {
            Err(NodeId((0..n).find(|&i| indeg[i] > 0).unwrap_or(0)))
        }
    }

    /// Copy with only the nodes accepted by `keep`, renumbered densely in
    /// id order, plus the old-to-new id map. Edges touching dropped nodes
    /// are dropped.
    pub fn filtered(&self, keep: impl Fn(NodeId) -> bool) -> (Netlist, Vec<Option<NodeId>>) {
        let mut out = Netlist::new();
        let mut map = vec![None; self.num_nodes()];
        for id in self.node_ids() {
            if keep(id) {
                map[id.0] = Some(out.add_node(self.kind(id), self.name(id)));
            }
        }
        for e in &self.edges {
            if let (Some(s), Some(d)) = (map[e.src.0], map[e.dst.0]) {
                out.add_edge(s, d, e.inverted);
            }
        }
        (out, map)
    }

    /// Follows buffers, splitters and inverters upstream from edge `e`,
    /// returning the logic driver and the composed polarity.
    pub fn logical_source(&self, e: usize) -> (NodeId, bool) {
        let mut edge = self.edges[e];
        let mut inv = edge.inverted;
        loop {
            match self.kind(edge.src) {
                NodeKind::Buffer | NodeKind::Splitter | NodeKind::Inverter => {
                    let Some(&up) = self.fanins[edge.src.0].first() else {
                        return (edge.src, inv);
                    };
                    if self.kind(edge.src) == NodeKind::Inverter {
                        inv = !inv;
                    }
                    edge = self.edges[up];
                    inv ^= edge.inverted;
                }
                _ => return (edge.src, inv),
            }
        }
    }
}

/// Removes every inverter node, folding its polarity into the edges that
/// used its output. Remaining nodes keep their relative order.
pub fn absorb_inverters(net: &Netlist) -> Netlist {
    collapse(net, |k| k == NodeKind::Inverter).0
}

/// Removes every buffer and splitter (and inverter), reconnecting each
/// consumer straight to its logic driver with the composed polarity.
/// Remaining nodes keep their relative order, so ids of a netlist whose
/// buffers and splitters were all appended after its other nodes are
/// preserved.
pub fn strip_buffers_and_splitters(net: &Netlist) -> Netlist {
    collapse(net, |k| {
        matches!(k, NodeKind::Inverter | NodeKind::Buffer | NodeKind::Splitter)
    })
    .0
}

/// Removes buffers and inverters but keeps splitters. Returns the new
/// netlist and the old-to-new id map.
pub fn strip_buffers(net: &Netlist) -> (Netlist, Vec<Option<NodeId>>) {
    collapse(net, |k| matches!(k, NodeKind::Inverter | NodeKind::Buffer))
}

fn collapse(net: &Netlist, drop: impl Fn(NodeKind) -> bool) -> (Netlist, Vec<Option<NodeId>>) {
    let mut out = Netlist::new();
    let mut map = vec![None; net.num_nodes()];
    for id in net.node_ids() {
        if !drop(net.kind(id)) {
            map[id.0] = Some(out.add_node(net.kind(id), net.name(id)));
        }
    }
    for id in net.node_ids() {
        let Some(dst) = map[id.0] else { continue };
        for &e in net.fanin_edges(id) {
            let (mut src, mut inv) = (net.edge(e).src, net.edge(e).inverted);
            while drop(net.kind(src)) {
                if net.kind(src) == NodeKind::Inverter {
                    inv = !inv;
                }
                let Some(&up) = net.fanin_edges(src).first() else { break };
                inv ^= net.edge(up).inverted;
                src = net.edge(up).src;
            }
            if let Some(s) = map[src.0] {
                out.add_edge(s, dst, inv);
            }
        }
    }
    (out, map)
}

/// Integer clock level per node.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Levels(Vec<i64>);

impl Levels {
    pub fn new(values: Vec<i64>) -> Self {
        Levels(values)
    }

    pub fn zeros(n: usize) -> Self {
        Levels(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, level: i64) {
        self.0.push(level);
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    /// Levels of the nodes kept by an id map, in their new order.
    pub fn remapped(&self, map: &[Option<NodeId>]) -> Levels {
        let mut out = vec![0; map.iter().flatten().count()];
        for (old, new) in map.iter().enumerate() {
            if let Some(n) = new {
                out[n.0] = self.0[old];
            }
        }
        Levels(out)
    }

    pub fn max(&self) -> i64 {
        self.0.iter().copied().max().unwrap_or(0)
    }
}

impl Index<NodeId> for Levels {
    type Output = i64;
    fn index(&self, id: NodeId) -> &i64 {
        &self.0[id.0]
    }
}

impl IndexMut<NodeId> for Levels {
    fn index_mut(&mut self, id: NodeId) -> &mut i64 {
        &mut self.0[id.0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inverter_chain(n_inv: usize) -> Netlist {
        let mut net = Netlist::new();
        let a = net.add_node(NodeKind::PrimaryInput, "a");
        let b = net.add_node(NodeKind::PrimaryInput, "b");
        let mut prev = a;
        for i in 0..n_inv {
            let x = net.add_node(NodeKind::Inverter, format!("x{i}"));
            net.add_edge(prev, x, false);
            prev = x;
        }
        let g = net.add_node(NodeKind::Gate(GateOp::And), "g");
        net.add_edge(prev, g, false);
        net.add_edge(b, g, false);
        let o = net.add_node(NodeKind::PrimaryOutput, "g");
        net.add_edge(g, o, false);
        net
    }

    #[test]
    fn single_and_double_inversion() {
        let one = absorb_inverters(&inverter_chain(1));
        assert_eq!(one.num_nodes(), 4);
        let g = one.find_signal("g").unwrap();
        let e = one.edge(one.fanin_edges(g)[0]);
        assert_eq!(one.name(e.src), "a");
        assert!(e.inverted);

        let two = absorb_inverters(&inverter_chain(2));
        let g = two.find_signal("g").unwrap();
        assert!(!two.edge(two.fanin_edges(g)[0]).inverted);
    }

    #[test]
    fn shared_inverter_feeds_every_fanout() {
        let mut net = Netlist::new();
        let a = net.add_node(NodeKind::PrimaryInput, "a");
        let c = net.add_node(NodeKind::PrimaryInput, "c");
        let x = net.add_node(NodeKind::Inverter, "x");
        net.add_edge(a, x, false);
        let g1 = net.add_node(NodeKind::Gate(GateOp::Or), "g1");
        let g2 = net.add_node(NodeKind::Gate(GateOp::And), "g2");
        net.add_edge(x, g1, false);
        net.add_edge(c, g1, false);
        net.add_edge(x, g2, false);
        net.add_edge(c, g2, false);
        for g in [g1, g2] {
            let o = net.add_node(NodeKind::PrimaryOutput, net.name(g).to_string());
            net.add_edge(g, o, false);
        }
        let out = absorb_inverters(&net);
        assert_eq!(out.num_nodes(), net.num_nodes() - 1);
        let a2 = out.find_signal("a").unwrap();
        assert_eq!(out.fanout_count(a2), 2);
        assert!(out.fanout_edges(a2).iter().all(|&e| out.edge(e).inverted));
        assert!(truth_table_eq(&net, &out).unwrap());
    }

    #[test]
    fn topo_order_detects_cycles() {
        let mut net = Netlist::new();
        let a = net.add_node(NodeKind::Buffer, "a");
        let b = net.add_node(NodeKind::Buffer, "b");
        net.add_edge(a, b, false);
        assert!(net.topo_order().is_ok());
        net.add_edge(b, a, false);
        assert!(net.topo_order().is_err());
    }

    #[test]
    fn edge_retarget_updates_adjacency() {
        let mut net = Netlist::new();
        let a = net.add_node(NodeKind::PrimaryInput, "a");
        let s = net.add_node(NodeKind::Splitter, "s");
        let o = net.add_node(NodeKind::PrimaryOutput, "o");
        let e = net.add_edge(a, o, true);
        net.add_edge(a, s, false);
        net.set_edge_src(e, s);
        assert_eq!(net.fanout_edges(a).len(), 1);
        assert_eq!(net.fanout_edges(s), &[e]);
        assert_eq!(net.logical_source(e), (a, true));
    }
}
