mod common;

use aqfp_bsopt::config::PhaseConfig;
use aqfp_bsopt::iterate::{optimize, OptimizeOptions};
use aqfp_bsopt::netlist::{NodeId, NodeKind};
use aqfp_bsopt::verify::{check_equivalence, equivalence_report, verify};
use common::{load_corpus, random_circuit};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn single_edit_corruptions_are_detected() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut detected = 0;
    for k in 0..100u64 {
        let net = if k % 10 == 0 { load_corpus("c432") } else { random_circuit(k, 5, 25) };
        let cfg = PhaseConfig::with_skip((k % 4) as u8);
        let sol = optimize(&net, &cfg, &OptimizeOptions::default()).unwrap();
        assert!(check_equivalence(&net, &sol.netlist));
        let mut bad = sol.netlist.clone();
        let e = rng.gen_range(0..bad.num_edges());
        if k % 2 == 0 {
            let inv = bad.edge(e).inverted;
            bad.set_edge_inverted(e, !inv);
        } else {
            let (driver, _) = bad.logical_source(e);
            let dst = bad.edge(e).dst;
            let candidates: Vec<NodeId> = bad
                .node_ids()
                .filter(|&n| n != dst && bad.kind(n) != NodeKind::PrimaryOutput)
                .filter(|&n| {
                    let logical = match bad.fanin_edges(n).first() {
                        Some(&f) if bad.kind(n).is_buffer_or_splitter() => bad.logical_source(f).0,
                        _ => n,
                    };
                    logical != driver
                })
                .collect();
            let to = candidates[rng.gen_range(0..candidates.len())];
            bad.set_edge_src(e, to);
        }
        let r = equivalence_report(&net, &bad);
        assert!(!r.is_equivalent(), "mutation {k} on edge {e} went undetected");
        detected += 1;
        assert!(!verify(&net, &bad, &sol.levels, &cfg).is_clean());
    }
    assert_eq!(detected, 100);
}
