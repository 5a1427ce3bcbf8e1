//! Bit-parallel logic simulation.

use super::{Netlist, NodeId, NodeKind};

/// Largest input count for exhaustive simulation.
pub const SIM_MAX_INPUTS: usize = 12;

/// Simulates 64 patterns per word. `inputs[k]` holds the words for the
/// k-th primary input in id order; the result holds one word vector per
/// primary output in id order.
pub fn simulate_words(net: &Netlist, inputs: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let words = inputs.first().map_or(1, Vec::len);
    let order = net.topo_order().expect("simulation needs an acyclic netlist");
    let mut val: Vec<Vec<u64>> = vec![Vec::new(); net.num_nodes()];
    let mut input_pos = vec![usize::MAX; net.num_nodes()];
    for (k, i) in net.inputs().into_iter().enumerate() {
        input_pos[i.0] = k;
    }
    for id in order {
        let ins: Vec<Vec<u64>> = net
            .fanin_edges(id)
            .iter()
            .map(|&e| {
                let edge = net.edge(e);
                let v = &val[edge.src.0];
                if edge.inverted {
                    v.iter().map(|w| !w).collect()
                } else {
                    v.clone()
                }
            })
            .collect();
        val[id.0] = match net.kind(id) {
            NodeKind::PrimaryInput => inputs
                .get(input_pos[id.0])
                .cloned()
                .unwrap_or_else(|| vec![0; words]),
            NodeKind::Gate(op) => (0..words)
                .map(|w| {
                    let args: Vec<u64> = ins.iter().map(|v| v[w]).collect();
                    op.eval(&args)
                })
                .collect(),
            NodeKind::Inverter => ins[0].iter().map(|w| !w).collect(),
            NodeKind::PrimaryOutput | NodeKind::Buffer | NodeKind::Splitter => {
                ins.into_iter().next().unwrap_or_else(|| vec![0; words])
            }
        };
    }
    net.outputs().into_iter().map(|o| std::mem::take(&mut val[o.0])).collect()
}

/// Words enumerating every assignment of `n` inputs, input `k` taking
/// bit `k` of the pattern index.
fn counting_words(n: usize, k: usize) -> Vec<u64> {
    let patterns = 1usize << n;
    (0..patterns.div_ceil(64))
        .map(|w| {
            (0..64)
                .filter(|b| {
                    let p = w * 64 + b;
                    p < patterns && (p >> k) & 1 == 1
                })
                .fold(0u64, |acc, b| acc | 1 << b)
        })
        .collect()
}

fn masked(n: usize, mut out: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    let patterns = 1usize << n;
    let mask = if patterns >= 64 { u64::MAX } else { (1u64 << patterns) - 1 };
    for v in &mut out {
        if let Some(last) = v.last_mut() {
            *last &= mask;
        }
    }
    out
}

/// Output words for every input combination, or `None` above
/// [`SIM_MAX_INPUTS`] inputs. Input `k` in id order drives bit `k` of the
/// pattern index.
pub fn exhaustive_signature(net: &Netlist) -> Option<Vec<Vec<u64>>> {
    let n = net.inputs().len();
    if n > SIM_MAX_INPUTS {
        return None;
    }
    let inputs: Vec<Vec<u64>> = (0..n).map(|k| counting_words(n, k)).collect();
    Some(masked(n, simulate_words(net, &inputs)))
}

/// Whether two netlists compute the same function with inputs and outputs
/// matched by name. `None` when the interfaces differ or there are more
/// than [`SIM_MAX_INPUTS`] inputs.
pub fn truth_table_eq(a: &Netlist, b: &Netlist) -> Option<bool> {
    let names = |n: &Netlist, ids: Vec<NodeId>| -> Vec<String> {
        ids.into_iter().map(|i| n.name(i).to_string()).collect()
    };
    let (ia, ib) = (names(a, a.inputs()), names(b, b.inputs()));
    let (oa, ob) = (names(a, a.outputs()), names(b, b.outputs()));
    let sorted = |v: &[String]| {
        let mut v = v.to_vec();
        v.sort();
        v
    };
    if sorted(&ia) != sorted(&ib) || sorted(&oa) != sorted(&ob) || ia.len() > SIM_MAX_INPUTS {
        return None;
    }
    let n = ia.len();
    let sig_a = exhaustive_signature(a)?;
    let inputs_b: Vec<Vec<u64>> = ib
        .iter()
        .map(|name| counting_words(n, ia.iter().position(|x| x == name).expect("same inputs")))
        .collect();
    let sig_b = masked(n, simulate_words(b, &inputs_b));
    Some(oa.iter().enumerate().all(|(i, name)| {
        let j = ob.iter().position(|x| x == name).expect("same outputs");
        sig_a[i] == sig_b[j]
    }))
}

#[cfg(test)]
mod tests {
    use super::super::parse_bench;
    use super::*;

    #[test]
    fn majority_truth_table() {
        let net = parse_bench("INPUT(a)\nINPUT(b)\nINPUT(c)\nm = MAJ3(a,b,c)\nOUTPUT(m)\n").unwrap();
        let sig = exhaustive_signature(&net).unwrap();
        // patterns p = a + 2b + 4c; majority true for 3,5,6,7
        assert_eq!(sig[0][0], 0b1110_1000);
    }

    #[test]
    fn equivalence_by_name() {
        let a = parse_bench("INPUT(x)\nINPUT(y)\ng = AND(x,y)\nOUTPUT(g)\n").unwrap();
        let b = parse_bench("INPUT(y)\nINPUT(x)\nnx = NOT(x)\nny = NOT(y)\no = OR(nx,ny)\ng = NOT(o)\nOUTPUT(g)\n").unwrap();
        assert_eq!(truth_table_eq(&a, &b), Some(true));
        let c = parse_bench("INPUT(x)\nINPUT(y)\ng = OR(x,y)\nOUTPUT(g)\n").unwrap();
        assert_eq!(truth_table_eq(&a, &c), Some(false));
    }
}
