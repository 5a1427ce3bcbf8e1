//! JSON mirror of the `.bench` schema.

use serde::{Deserialize, Serialize};

use crate::error::{ParseError, ParseErrorKind};

use super::{GateOp, Levels, Netlist, NodeId, NodeKind};

#[derive(Serialize, Deserialize)]
struct JsonNode {
    id: usize,
    name: String,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    level: Option<i64>,
}

#[derive(Serialize, Deserialize)]
struct JsonEdge {
    src: usize,
    dst: usize,
    #[serde(default)]
    inverted: bool,
}

#[derive(Serialize, Deserialize)]
struct JsonNetlist {
    nodes: Vec<JsonNode>,
    edges: Vec<JsonEdge>,
}

fn kind_from(s: &str) -> Option<NodeKind> {
    Some(match s {
        "INPUT" => NodeKind::PrimaryInput,
        "OUTPUT" => NodeKind::PrimaryOutput,
        "MAJ3" => NodeKind::Gate(GateOp::Maj3),
        "AND" => NodeKind::Gate(GateOp::And),
        "OR" => NodeKind::Gate(GateOp::Or),
        "NOT" => NodeKind::Inverter,
        "BUF" => NodeKind::Buffer,
        "SPL" => NodeKind::Splitter,
        _ => return None,
    })
}

/// Pretty-printed JSON with nodes in id order and edges in insertion order.
pub fn to_json(net: &Netlist, levels: Option<&Levels>) -> String {
    let doc = JsonNetlist {
        nodes: net
            .node_ids()
            .map(|id| JsonNode {
                id: id.0,
                name: net.name(id).to_string(),
                kind: net.kind(id).keyword().to_string(),
                level: levels.map(|l| l[id]),
            })
            .collect(),
        edges: net
            .edges()
            .iter()
            .map(|e| JsonEdge {
                src: e.src.0,
                dst: e.dst.0,
                inverted: e.inverted,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("netlist JSON is always serializable")
}

/// Reads the JSON mirror. Node ids must be `0..n` in order; levels are
/// returned when every node carries one.
pub fn from_json(text: &str) -> Result<(Netlist, Option<Levels>), ParseError> {
    let err = |m: String| ParseError::new(0, ParseErrorKind::Json(m));
    let doc: JsonNetlist = serde_json::from_str(text).map_err(|e| err(e.to_string()))?;
    let mut net = Netlist::new();
    for (i, n) in doc.nodes.iter().enumerate() {
        if n.id != i {
            return Err(err(format!("node ids must be dense and ordered, found {} at {i}", n.id)));
        }
        let kind = kind_from(&n.kind)
            .ok_or_else(|| ParseError::new(0, ParseErrorKind::UnknownOp(n.kind.clone())))?;
        let taken = if kind == NodeKind::PrimaryOutput {
            net.find_output(&n.name)
        } else {
            net.find_signal(&n.name)
        };
        if taken.is_some() {
            return Err(ParseError::new(0, ParseErrorKind::Redefined(n.name.clone())));
        }
        net.add_node(kind, n.name.clone());
    }
    for e in &doc.edges {
        if e.src >= net.num_nodes() || e.dst >= net.num_nodes() {
            return Err(err(format!("edge {}->{} references a missing node", e.src, e.dst)));
        }
        net.add_edge(NodeId(e.src), NodeId(e.dst), e.inverted);
    }
    if let Err(n) = net.topo_order() {
        return Err(ParseError::new(0, ParseErrorKind::Cycle(net.name(n).to_string())));
    }
    let levels = doc
        .nodes
        .iter()
        .map(|n| n.level)
        .collect::<Option<Vec<_>>>()
        .map(Levels::new);
    Ok((net, levels))
}

#[cfg(test)]
mod tests {
    use super::super::parse_bench;
    use super::*;

    #[test]
    fn round_trip() {
        let net = parse_bench("INPUT(a)\nINPUT(b)\nn = NOT(a)\ng = OR(n, b)\nOUTPUT(g)\n").unwrap();
        let levels = Levels::new(vec![0, 0, 1, 2, 3]);
        let text = to_json(&net, Some(&levels));
        let (back, lv) = from_json(&text).unwrap();
        assert_eq!(to_json(&back, lv.as_ref()), text);
        assert_eq!(lv.unwrap(), levels);
        let (_, none) = from_json(&to_json(&net, None)).unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(from_json("{").is_err());
        let cyc = r#"{"nodes":[{"id":0,"name":"a","kind":"BUF"},{"id":1,"name":"b","kind":"BUF"}],
                      "edges":[{"src":0,"dst":1},{"src":1,"dst":0}]}"#;
        assert!(matches!(from_json(cyc).unwrap_err().kind, ParseErrorKind::Cycle(_)));
        let dangling = r#"{"nodes":[{"id":0,"name":"a","kind":"INPUT"}],"edges":[{"src":0,"dst":4}]}"#;
        assert!(from_json(dangling).is_err());
    }
}
