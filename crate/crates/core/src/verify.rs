//! Independent checks on optimized netlists and the buffer-chain
//! reduction baseline.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::PhaseConfig;
use crate::iterate::{Metrics, Solution};
use crate::netlist::{simulate_words, validate, Levels, Netlist, NodeId, NodeKind, Violation, SIM_MAX_INPUTS};

/// Random 64-pattern words per input when a circuit is too wide for
/// exhaustive simulation.
pub const RANDOM_SIM_WORDS: usize = 16;

fn violation(node: Option<NodeId>, message: String) -> Violation {
    Violation { node, message }
}

/// Every edge spans `1..=N` levels, all outputs share one level and all
/// inputs sit at the configured base level.
pub fn check_phase_legality(net: &Netlist, levels: &Levels, cfg: &PhaseConfig) -> Vec<Violation> {
    let mut out = Vec::new();
    if levels.len() != net.num_nodes() {
        out.push(violation(
            None,
            format!("{} levels for {} nodes", levels.len(), net.num_nodes()),
        ));
        return out;
    }
    let n = i64::from(cfg.span());
    for (k, e) in net.edges().iter().enumerate() {
        let span = levels[e.dst] - levels[e.src];
        if span < 1 || span > n {
            out.push(violation(
                Some(e.dst),
                format!(
                    "edge {k} `{}` -> `{}` spans {span} levels, allowed 1..={n}",
                    net.name(e.src),
                    net.name(e.dst)
                ),
            ));
        }
    }
    let outs = net.outputs();
    if let Some(&first) = outs.first() {
        for &o in &outs[1..] {
            if levels[o] != levels[first] {
                out.push(violation(
                    Some(o),
                    format!(
                        "output `{}` at level {} but `{}` at {}",
                        net.name(o),
                        levels[o],
                        net.name(first),
                        levels[first]
                    ),
                ));
            }
        }
    }
    for i in net.inputs() {
        if levels[i] != cfg.pi_level {
            out.push(violation(
                Some(i),
                format!("input `{}` at level {}, expected {}", net.name(i), levels[i], cfg.pi_level),
            ));
        }
    }
    out
}

/// Node arity rules plus fanout limits: splitters drive `2..=X` nodes,
/// everything else at most one.
pub fn check_structure(net: &Netlist, cfg: &PhaseConfig) -> Vec<Violation> {
    let mut out = validate(net).violations;
    for id in net.node_ids() {
        let f = net.fanout_count(id);
        match net.kind(id) {
            NodeKind::Splitter if f > cfg.max_fanout => out.push(violation(
                Some(id),
                format!("splitter `{}` drives {f}, capacity {}", net.name(id), cfg.max_fanout),
            )),
            NodeKind::Splitter | NodeKind::Buffer | NodeKind::PrimaryOutput => {}
            _ if f > 1 => out.push(violation(
                Some(id),
                format!("`{}` drives {f} nodes without a splitter", net.name(id)),
            )),
            _ => {}
        }
    }
    out
}

/// Logic view of a node: kind plus sorted `(driver, inverted)` fanins
/// after looking through buffers, splitters and inverters.
type LogicView = BTreeMap<String, (String, Vec<(String, bool)>)>;

fn logic_view(net: &Netlist) -> Result<LogicView, String> {
    let mut view = BTreeMap::new();
    for id in net.node_ids() {
        let kind = net.kind(id);
        if matches!(kind, NodeKind::Buffer | NodeKind::Splitter | NodeKind::Inverter) {
            continue;
        }
        let mut fanins = Vec::new();
        for &e in net.fanin_edges(id) {
            let mut edge = net.edge(e);
            let mut inv = edge.inverted;
            let mut hops = 0;
            while matches!(net.kind(edge.src), NodeKind::Buffer | NodeKind::Splitter | NodeKind::Inverter) {
                if net.kind(edge.src) == NodeKind::Inverter {
                    inv = !inv;
                }
                let ins = net.fanin_edges(edge.src);
                if ins.len() != 1 || hops > net.num_nodes() {
                    return Err(format!("`{}` has {} fanins", net.name(edge.src), ins.len()));
                }
                edge = net.edge(ins[0]);
                inv ^= edge.inverted;
                hops += 1;
            }
            fanins.push((net.name(edge.src).to_string(), inv));
        }
        fanins.sort();
        let key = match kind {
            NodeKind::PrimaryOutput => format!("output {}", net.name(id)),
            _ => net.name(id).to_string(),
        };
        view.insert(key, (kind.keyword().to_string(), fanins));
    }
    Ok(view)
}

/// Outcome of comparing an optimized netlist with its source.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    /// Differences between the collapsed logic graphs, by node name.
    pub mismatches: Vec<String>,
    /// Simulation agreement; exhaustive up to the input limit, random
    /// patterns above it.
    pub simulation: Option<bool>,
    pub exhaustive: bool,
}

impl EquivalenceReport {
    pub fn is_equivalent(&self) -> bool {
        self.mismatches.is_empty() && self.simulation != Some(false)
    }
}

/// Output words keyed by port name for shared input words keyed by name.
fn simulate_named(net: &Netlist, inputs: &BTreeMap<String, Vec<u64>>, words: usize) -> BTreeMap<String, Vec<u64>> {
    let ins: Vec<Vec<u64>> = net
        .inputs()
        .into_iter()
        .map(|i| inputs.get(net.name(i)).cloned().unwrap_or_else(|| vec![0; words]))
        .collect();
    let outs = simulate_words(net, &ins);
    net.outputs()
        .into_iter()
        .zip(outs)
        .map(|(o, w)| (net.name(o).to_string(), w))
        .collect()
}

fn input_words(names: &[String]) -> (BTreeMap<String, Vec<u64>>, usize, bool) {
    let n = names.len();
    if n <= SIM_MAX_INPUTS {
        let patterns = 1usize << n;
        let words = patterns.div_ceil(64);
        let map = names
            .iter()
            .enumerate()
            .map(|(k, name)| {
                let w = (0..words)
                    .map(|w| {
                        (0..64).fold(0u64, |acc, b| {
                            let p = w * 64 + b;
                            if p < patterns && (p >> k) & 1 == 1 {
                                acc | 1 << b
                            } else {
                                acc
                            }
                        })
                    })
                    .collect();
                (name.clone(), w)
            })
            .collect();
        return (map, words, true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let map = names
        .iter()
        .map(|name| (name.clone(), (0..RANDOM_SIM_WORDS).map(|_| rng.gen()).collect()))
        .collect();
    (map, RANDOM_SIM_WORDS, false)
}

/// Compares `optimized` with `original` structurally and by simulation.
pub fn equivalence_report(original: &Netlist, optimized: &Netlist) -> EquivalenceReport {
    let mut report = EquivalenceReport::default();
    let (a, b) = match (logic_view(original), logic_view(optimized)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) => {
            report.mismatches.push(format!("original: {e}"));
            return report;
        }
        (_, Err(e)) => {
            report.mismatches.push(format!("optimized: {e}"));
            return report;
        }
    };
    for (name, x) in &a {
        match b.get(name) {
            None => report.mismatches.push(format!("`{name}` missing")),
            Some(y) if x != y => report
                .mismatches
                .push(format!("`{name}`: {} {:?} became {} {:?}", x.0, x.1, y.0, y.1)),
            Some(_) => {}
        }
    }
    for name in b.keys().filter(|k| !a.contains_key(*k)) {
        report.mismatches.push(format!("`{name}` added"));
    }
    if original.topo_order().is_err() || optimized.topo_order().is_err() {
        report.mismatches.push("netlist has a cycle".into());
        return report;
    }
    let names: Vec<String> = original
        .inputs()
        .into_iter()
        .map(|i| original.name(i).to_string())
        .collect();
    let (words, count, exhaustive) = input_words(&names);
    let x = simulate_named(original, &words, count);
    let y = simulate_named(optimized, &words, count);
    report.simulation = Some(x == y);
    report.exhaustive = exhaustive;
    report
}

/// Whether `optimized` implements `original` with the same gate graph.
pub fn check_equivalence(original: &Netlist, optimized: &Netlist) -> bool {
    equivalence_report(original, optimized).is_equivalent()
}

/// Every check on one optimized netlist.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub legality: Vec<Violation>,
    pub structure: Vec<Violation>,
    pub equivalence: EquivalenceReport,
}

impl VerifyReport {
    pub fn is_clean(&self) -> bool {
        self.legality.is_empty() && self.structure.is_empty() && self.equivalence.is_equivalent()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl std::fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for v in &self.legality {
            writeln!(f, "legality: {v}")?;
        }
        for v in &self.structure {
            writeln!(f, "structure: {v}")?;
        }
        for m in &self.equivalence.mismatches {
            writeln!(f, "equivalence: {m}")?;
        }
        if self.equivalence.simulation == Some(false) {
            writeln!(f, "equivalence: simulated outputs differ")?;
        }
        Ok(())
    }
}

pub fn verify(original: &Netlist, optimized: &Netlist, levels: &Levels, cfg: &PhaseConfig) -> VerifyReport {
    VerifyReport {
        legality: check_phase_legality(optimized, levels, cfg),
        structure: check_structure(optimized, cfg),
        equivalence: equivalence_report(original, optimized),
    }
}

/// Replaces every maximal buffer chain of `sol` spanning `delta` levels
/// with `ceil(delta / N) - 1` buffers at the earliest levels. Gates and
/// splitters keep their levels.
pub fn buffer_chain_reduce(sol: &Solution, target: &PhaseConfig) -> Solution {
    let clock = Instant::now();
    let net = &sol.netlist;
    let mut out = Netlist::new();
    let mut map = vec![None; net.num_nodes()];
    let mut levels = Levels::new(Vec::new());
    for id in net.node_ids() {
        if net.kind(id) != NodeKind::Buffer {
            map[id.0] = Some(out.add_node(net.kind(id), net.name(id)));
            levels.push(sol.levels[id]);
        }
    }
    let n = i64::from(target.span());
    let mut counter = 0;
    for id in net.node_ids() {
        let Some(dst) = map[id.0] else { continue };
        for &e in net.fanin_edges(id) {
            let mut edge = net.edge(e);
            let mut inv = edge.inverted;
            while net.kind(edge.src) == NodeKind::Buffer {
                edge = net.edge(net.fanin_edges(edge.src)[0]);
                inv ^= edge.inverted;
            }
            let src = map[edge.src.0].expect("chain starts at a kept node");
            let base = levels[src];
            let k = ((levels[dst] - base + n - 1) / n - 1).max(0);
            let mut prev = src;
            for step in 1..=k {
                let b = out.add_node(NodeKind::Buffer, out.fresh_name("buf", &mut counter));
                levels.push(base + step * n);
                out.add_edge(prev, b, false);
                prev = b;
            }
            out.add_edge(prev, dst, inv);
        }
    }
    let cost = out.cost();
    Solution {
        netlist: out,
        levels,
        metrics: Metrics {
            buffers: cost.buffers,
            splitters: cost.splitters,
            total: cost.total,
            iterations: sol.metrics.iterations,
            wall_time: clock.elapsed(),
            exact: sol.metrics.exact,
        },
    }
}
