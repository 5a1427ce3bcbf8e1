//! Line-based `.bench` reading and writing.
//!
//! ```text
//! INPUT(a)
//! OUTPUT(y)          # port y driven by signal y
//! OUTPUT(z) = g      # port z driven by signal g
//! g = MAJ3(a, b, c)  # also AND, OR, NOT, BUF, SPL
//! # level g = 3
//! # level OUTPUT(z) = 5
//! ```

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use crate::error::{ParseError, ParseErrorKind};

use super::{absorb_inverters, GateOp, Levels, Netlist, NodeId, NodeKind};

struct Def {
    kind: NodeKind,
    args: Vec<(String, usize)>,
}

struct Port {
    line: usize,
    name: String,
    driver: String,
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::new(line, ParseErrorKind::Syntax(msg.into()))
}

fn is_ident(s: &str) -> bool {
    !s.is_empty()
        && s
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '[' | ']' | '$'))
}

/// Splits `KEY(body)` into its parts.
fn call(s: &str) -> Option<(&str, &str)> {
    let open = s.find('(')?;
    let body = s[open + 1..].strip_suffix(')')?;
    Some((s[..open].trim(), body.trim()))
}

fn ident(line: usize, s: &str) -> Result<String, ParseError> {
    let s = s.trim();
    if is_ident(s) {
        Ok(s.to_string())
    } else {
        Err(syntax(line, format!("invalid signal name `{s}`")))
    }
}

fn op_kind(op: &str) -> Option<(NodeKind, usize)> {
    let kind = match op.to_ascii_uppercase().as_str() {
        "MAJ3" | "MAJ" => NodeKind::Gate(GateOp::Maj3),
        "AND" => NodeKind::Gate(GateOp::And),
        "OR" => NodeKind::Gate(GateOp::Or),
        "NOT" => NodeKind::Inverter,
        "BUF" => NodeKind::Buffer,
        "SPL" => NodeKind::Splitter,
        _ => return None,
    };
    let arity = kind.logic_fanin().unwrap_or(1);
    Some((kind, arity))
}

/// Parsed statements plus level annotations, before graph construction.
struct Statements {
    inputs: Vec<(String, usize)>,
    ports: Vec<Port>,
    defs: HashMap<String, Def>,
    order: Vec<String>,
    levels: Vec<(usize, String, i64)>,
}

fn scan(text: &str) -> Result<Statements, ParseError> {
    let mut st = Statements {
        inputs: Vec::new(),
        ports: Vec::new(),
        defs: HashMap::new(),
        order: Vec::new(),
        levels: Vec::new(),
    };
    let mut defined: HashSet<String> = HashSet::new();
    let mut port_names: HashSet<String> = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let (code, comment) = match raw.find('#') {
            Some(p) => (&raw[..p], Some(raw[p + 1..].trim())),
            None => (raw, None),
        };
        if let Some(rest) = comment.and_then(|c| c.strip_prefix("level ")) {
            let (name, value) = rest
                .split_once('=')
                .ok_or_else(|| syntax(line, "level annotation needs `=`"))?;
            let value: i64 = value
                .trim()
                .parse()
                .map_err(|_| syntax(line, format!("invalid level `{}`", value.trim())))?;
            st.levels.push((line, name.trim().to_string(), value));
        }
        let code = code.trim();
        if code.is_empty() {
            continue;
        }
        if let Some((lhs, rhs)) = code.split_once('=') {
            let lhs = lhs.trim();
            if let Some(("OUTPUT", port)) = call(lhs) {
                let name = ident(line, port)?;
                if !port_names.insert(name.clone()) {
                    return Err(ParseError::new(line, ParseErrorKind::Redefined(name)));
                }
                st.ports.push(Port {
                    line,
                    name,
                    driver: ident(line, rhs)?,
                });
                continue;
            }
            let name = ident(line, lhs)?;
            let (op, body) = call(rhs.trim()).ok_or_else(|| syntax(line, "expected `OP(args)`"))?;
            let (kind, arity) =
                op_kind(op).ok_or_else(|| ParseError::new(line, ParseErrorKind::UnknownOp(op.to_string())))?;
            let args: Vec<(String, usize)> = if body.is_empty() {
                Vec::new()
            } else {
                body.split(',')
                    .map(|a| ident(line, a).map(|a| (a, line)))
                    .collect::<Result<_, _>>()?
            };
            if args.len() != arity {
                return Err(ParseError::new(
                    line,
                    ParseErrorKind::Arity {
                        op: op.to_ascii_uppercase(),
                        expected: arity,
                        found: args.len(),
                    },
                ));
            }
            if !defined.insert(name.clone()) {
                return Err(ParseError::new(line, ParseErrorKind::Redefined(name)));
            }
            st.order.push(name.clone());
            st.defs.insert(name, Def { kind, args });
            continue;
        }
        match call(code) {
            Some(("INPUT", body)) => {
                let name = ident(line, body)?;
                if !defined.insert(name.clone()) {
                    return Err(ParseError::new(line, ParseErrorKind::Redefined(name)));
                }
                st.inputs.push((name, line));
            }
            Some(("OUTPUT", body)) => {
                let name = ident(line, body)?;
                if !port_names.insert(name.clone()) {
                    return Err(ParseError::new(line, ParseErrorKind::Redefined(name)));
                }
                st.ports.push(Port {
                    line,
                    driver: name.clone(),
                    name,
                });
            }
            _ => return Err(syntax(line, format!("unrecognized statement `{code}`"))),
        }
    }
    Ok(st)
}

fn build(st: &Statements) -> Result<Netlist, ParseError> {
    let mut net = Netlist::new();
    for (name, _) in &st.inputs {
        net.add_node(NodeKind::PrimaryInput, name.clone());
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state: HashMap<&str, u8> = HashMap::new();
    for root in &st.order {
        if state.get(root.as_str()) == Some(&2) {
            continue;
        }
        let mut stack: Vec<(&str, usize)> = vec![(root.as_str(), 0)];
        state.insert(root.as_str(), 1);
        while let Some(&mut (name, ref mut next)) = stack.last_mut() {
            let def = &st.defs[name];
            if let Some((arg, line)) = def.args.get(*next) {
                *next += 1;
                if net.find_signal(arg).is_some() {
                    continue;
                }
                match state.get(arg.as_str()) {
                    Some(1) => {
                        return Err(ParseError::new(*line, ParseErrorKind::Cycle(arg.clone())))
                    }
                    Some(_) => {}
                    None if st.defs.contains_key(arg) => {
                        state.insert(arg.as_str(), 1);
                        stack.push((arg.as_str(), 0));
                    }
                    None => {
                        return Err(ParseError::new(*line, ParseErrorKind::Undefined(arg.clone())))
                    }
                }
                continue;
            }
            let id = net.add_node(def.kind, name);
            for (arg, _) in &def.args {
                let src = net.find_signal(arg).expect("fanins are built first");
                net.add_edge(src, id, false);
            }
            state.insert(name, 2);
            stack.pop();
        }
    }
    for p in &st.ports {
        let src = net.find_signal(&p.driver).ok_or_else(|| {
            ParseError::new(p.line, ParseErrorKind::Undefined(p.driver.clone()))
        })?;
        let o = net.add_node(NodeKind::PrimaryOutput, p.name.clone());
        net.add_edge(src, o, false);
    }
    Ok(net)
}

/// Parses a netlist as written, inverter nodes included.
///
/// Node ids are assigned inputs first, then logic in dependency order
/// following the file, then outputs.
pub fn parse_bench(text: &str) -> Result<Netlist, ParseError> {
    build(&scan(text)?)
}

/// Parses a netlist, absorbs its inverters, and reads `# level` comments.
///
/// Levels are returned only when annotations are present; then every node
/// of the absorbed netlist must be annotated.
pub fn parse_bench_with_levels(text: &str) -> Result<(Netlist, Option<Levels>), ParseError> {
    let st = scan(text)?;
    let net = absorb_inverters(&build(&st)?);
    if st.levels.is_empty() {
        return Ok((net, None));
    }
    let mut levels: Vec<Option<i64>> = vec![None; net.num_nodes()];
    for (line, name, value) in &st.levels {
        let id = match call(name) {
            Some(("OUTPUT", port)) => net.find_output(port.trim()),
            _ => net.find_signal(name),
        };
        match id {
            Some(id) => levels[id.0] = Some(*value),
            // annotations on absorbed inverters carry no information
            None if st.defs.get(name).is_some_and(|d| d.kind == NodeKind::Inverter) => {}
            None => {
                return Err(ParseError::new(*line, ParseErrorKind::Undefined(name.clone())))
            }
        }
    }
    let values = levels
        .iter()
        .enumerate()
        .map(|(i, l)| {
            l.ok_or_else(|| syntax(0, format!("no level annotation for `{}`", net.name(NodeId(i)))))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((net, Some(Levels::new(values))))
}

/// Writes `net` in `.bench` form, optionally with level comments.
///
/// Output is deterministic. Inverted edges are written through `NOT`
/// lines named after their source, shared by every inverted use of that
/// source; parsing the text and absorbing inverters gives back a netlist
/// isomorphic to `net` with equal names.
pub fn serialize(net: &Netlist, levels: Option<&Levels>) -> String {
    let mut out = String::new();
    let cost = net.cost();
    let _ = writeln!(
        out,
        "# {} inputs, {} outputs, {} gates, {} buffers, {} splitters",
        net.inputs().len(),
        net.outputs().len(),
        net.gates().len(),
        cost.buffers,
        cost.splitters
    );
    let order = net
        .topo_order()
        .unwrap_or_else(|_| net.node_ids().collect());
    let mut taken: HashSet<String> = net
        .node_ids()
        .filter(|&n| net.kind(n) != NodeKind::PrimaryOutput)
        .map(|n| net.name(n).to_string())
        .collect();
    let mut inv_names: HashMap<NodeId, String> = HashMap::new();
    let mut body = String::new();
    let mut ref_name = |src: NodeId, inverted: bool, body: &mut String| -> String {
        if !inverted {
            return net.name(src).to_string();
        }
        inv_names
            .entry(src)
            .or_insert_with(|| {
                let base = format!("{}_inv", net.name(src));
                let mut name = base.clone();
                let mut k = 1;
                while !taken.insert(name.clone()) {
                    k += 1;
                    name = format!("{base}{k}");
                }
                let _ = writeln!(body, "{name} = NOT({})", net.name(src));
                name
            })
            .clone()
    };

    for &id in &order {
        if net.kind(id) == NodeKind::PrimaryInput {
            let _ = writeln!(out, "INPUT({})", net.name(id));
        }
    }
    let mut ports = Vec::new();
    for &id in &order {
        match net.kind(id) {
            NodeKind::PrimaryInput => {}
            NodeKind::PrimaryOutput => ports.push(id),
            kind => {
                let args: Vec<String> = net
                    .fanin_edges(id)
                    .iter()
                    .map(|&e| {
                        let edge = net.edge(e);
                        ref_name(edge.src, edge.inverted, &mut body)
                    })
                    .collect();
                let _ = writeln!(body, "{} = {}({})", net.name(id), kind.keyword(), args.join(", "));
            }
        }
    }
    ports.sort();
    for &id in &ports {
        let port = net.name(id);
        match net.fanin_edges(id).first() {
            Some(&e) => {
                let edge = net.edge(e);
                let driver = ref_name(edge.src, edge.inverted, &mut body);
                if driver == port {
                    let _ = writeln!(out, "OUTPUT({port})");
                } else {
                    let _ = writeln!(out, "OUTPUT({port}) = {driver}");
                }
            }
            None => {
                let _ = writeln!(out, "# OUTPUT({port}) has no driver");
            }
        }
    }
    out.push_str(&body);
    if let Some(levels) = levels {
        for id in net.node_ids() {
            if net.kind(id) == NodeKind::Inverter {
                continue;
            }
            let name = if net.kind(id) == NodeKind::PrimaryOutput {
                format!("OUTPUT({})", net.name(id))
            } else {
                net.name(id).to_string()
            };
            let _ = writeln!(out, "# level {name} = {}", levels[id]);
        }
    }
    out
}
