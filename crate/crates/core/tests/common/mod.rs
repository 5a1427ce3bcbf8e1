#![allow(dead_code)]

use std::collections::VecDeque;
use std::path::PathBuf;

use aqfp_bsopt::netlist::{parse_bench, GateOp, Netlist, NodeId, NodeKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CORPUS: [&str; 10] = [
    "c432", "c499", "c880", "c1355", "c1908", "c2670", "c3540", "c5315", "c6288", "mult8",
];

pub fn corpus_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(format!("{name}.bench"))
}

pub fn load_corpus(name: &str) -> Netlist {
    let text = std::fs::read_to_string(corpus_path(name)).expect("corpus file");
    parse_bench(&text).expect("corpus parses")
}

/// Random combinational circuit: every gate draws its fanins from earlier
/// signals, and every signal left without fanout becomes an output.
pub fn random_circuit(seed: u64, inputs: usize, gates: usize) -> Netlist {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut net = Netlist::new();
    let mut signals: Vec<NodeId> = (0..inputs)
        .map(|i| net.add_node(NodeKind::PrimaryInput, format!("i{i}")))
        .collect();
    for g in 0..gates {
        let op = match rng.gen_range(0..5) {
            0 => GateOp::Maj3,
            1 | 2 => GateOp::And,
            _ => GateOp::Or,
        };
        let id = net.add_node(NodeKind::Gate(op), format!("g{g}"));
        let window = signals.len().min(inputs + 6);
        for _ in 0..op.arity() {
            let pick = signals[signals.len() - 1 - rng.gen_range(0..window)];
            net.add_edge(pick, id, rng.gen_bool(0.3));
        }
        signals.push(id);
    }
    let mut k = 0;
    for s in signals {
        let dangling = net.fanout_count(s) == 0 && net.kind(s) != NodeKind::PrimaryInput;
        if dangling || (net.kind(s) != NodeKind::PrimaryInput && rng.gen_bool(0.1)) {
            let o = net.add_node(NodeKind::PrimaryOutput, format!("o{k}"));
            net.add_edge(s, o, false);
            k += 1;
        }
    }
    net
}

/// Fewest intermediate stops on the way from position 0 to `delta + 1`
/// with hops of at most `ps`, by breadth-first search.
pub fn chain_search(delta: u32, ps: u32) -> u32 {
    let goal = delta + 1;
    let mut dist = vec![u32::MAX; goal as usize + 1];
    dist[0] = 0;
    let mut queue = VecDeque::from([0u32]);
    while let Some(p) = queue.pop_front() {
        for hop in 1..=ps {
            let q = p + hop;
            if q <= goal && dist[q as usize] == u32::MAX {
                dist[q as usize] = dist[p as usize] + 1;
                queue.push_back(q);
            }
        }
    }
    dist[goal as usize] - 1
}

/// Leaf-depth lists of every splitter tree with `m` leaves.
pub fn tree_shapes(m: usize, x: usize) -> Vec<Vec<u64>> {
    if m == 1 {
        return vec![vec![0]];
    }
    let mut out = Vec::new();
    for parts in partitions(m, x) {
        let mut acc: Vec<Vec<u64>> = vec![Vec::new()];
        for &p in &parts {
            let mut next = Vec::new();
            for a in &acc {
                for shape in tree_shapes(p, x) {
                    let mut v = a.clone();
                    v.extend(shape.iter().map(|d| d + 1));
                    next.push(v);
                }
            }
            acc = next;
        }
        out.extend(acc);
    }
    out
}

/// Nondecreasing splits of `m` into 2..=x positive parts.
fn partitions(m: usize, x: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, min: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            if cur.len() >= 2 {
                out.push(cur.clone());
            }
            return;
        }
        if slots == 0 {
            return;
        }
        for p in min..=rest {
            cur.push(p);
            go(rest - p, p, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(m, 1, x, &mut Vec::new(), &mut out);
    out
}
