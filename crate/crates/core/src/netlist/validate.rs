use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Netlist, NodeId, NodeKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub node: Option<NodeId>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node {
            Some(n) => write!(f, "{n}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn push(&mut self, node: Option<NodeId>, message: String) {
        self.violations.push(Violation { node, message });
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Arity and acyclicity check against the node-kind rules.
pub fn validate(net: &Netlist) -> ValidationReport {
    let mut r = ValidationReport::default();
    for id in net.node_ids() {
        let ins = net.fanin_edges(id).len();
        let outs = net.fanout_count(id);
        let name = net.name(id);
        let mut bad = |msg: String| r.push(Some(id), format!("`{name}` {msg}"));
        match net.kind(id) {
            NodeKind::PrimaryInput => {
                if ins != 0 {
                    bad(format!("input has {ins} fanins"));
                }
            }
            NodeKind::PrimaryOutput => {
                if ins != 1 {
                    bad(format!("output has {ins} fanins"));
                }
                if outs != 0 {
                    bad(format!("output has {outs} fanouts"));
                }
            }
            NodeKind::Gate(op) => {
                if ins != op.arity() {
                    bad(format!("{} gate has {ins} fanins", op.keyword()));
                }
            }
            NodeKind::Buffer => {
                if ins != 1 {
                    bad(format!("buffer has {ins} fanins"));
                }
                if outs != 1 {
                    bad(format!("buffer has {outs} fanouts"));
                }
            }
            NodeKind::Splitter => {
                if ins != 1 {
                    bad(format!("splitter has {ins} fanins"));
                }
                if outs < 2 {
                    bad(format!("splitter fanout {outs} < 2"));
                }
            }
            NodeKind::Inverter => {
                if ins != 1 {
                    bad(format!("inverter has {ins} fanins"));
                }
            }
        }
    }
    match net.topo_order() {
        Err(n) => r.push(Some(n), format!("`{}` lies on a cycle", net.name(n))),
        Ok(order) => {
            let mut reached = vec![false; net.num_nodes()];
            for id in order {
                reached[id.0] = net.kind(id) == NodeKind::PrimaryInput
                    || net
                        .fanin_edges(id)
                        .iter()
                        .any(|&e| reached[net.edge(e).src.0]);
                if !reached[id.0] {
                    r.push(Some(id), format!("`{}` is not reachable from any input", net.name(id)));
                }
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::super::{parse_bench, GateOp};
    use super::*;

    fn diamond() -> Netlist {
        parse_bench("INPUT(a)\nINPUT(b)\ng1 = AND(a,b)\ng2 = OR(g1,a)\ng3 = AND(g1,g2)\nOUTPUT(g3)\n").unwrap()
    }

    #[test]
    fn diamond_is_clean() {
        assert!(validate(&diamond()).is_empty());
    }

    #[test]
    fn splitter_and_buffer_arity() {
        let mut net = diamond();
        let g1 = net.find_signal("g1").unwrap();
        let s = net.add_node(NodeKind::Splitter, "s");
        net.add_edge(g1, s, false);
        let b = net.add_node(NodeKind::Buffer, "bf");
        net.add_edge(s, b, false);
        let o1 = net.add_node(NodeKind::PrimaryOutput, "o1");
        let o2 = net.add_node(NodeKind::PrimaryOutput, "o2");
        net.add_edge(b, o1, false);
        net.add_edge(b, o2, false);
        let r = validate(&net);
        assert_eq!(r.violations.len(), 2);
        assert!(r.violations.iter().any(|v| v.message.contains("splitter fanout 1 < 2")));
        assert!(r.violations.iter().any(|v| v.message.contains("buffer has 2 fanouts")));
    }

    #[test]
    fn injected_violations_are_caught() {
        let mut net = diamond();
        let g = net.add_node(NodeKind::Gate(GateOp::Maj3), "m");
        let a = net.find_signal("a").unwrap();
        net.add_edge(a, g, false);
        assert_eq!(validate(&net).violations.len(), 1);

        let mut net = diamond();
        let x = net.add_node(NodeKind::Buffer, "x");
        let y = net.add_node(NodeKind::Buffer, "y");
        net.add_edge(x, y, false);
        net.add_edge(y, x, false);
        assert!(validate(&net).violations.iter().any(|v| v.message.contains("cycle")));
    }
}
