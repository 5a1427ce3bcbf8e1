//! Optimizes a netlist, verifies it, then flips one edge polarity and shows
//! that verification catches it.

use aqfp_bsopt::config::PhaseConfig;
use aqfp_bsopt::iterate::{optimize, OptimizeOptions};
use aqfp_bsopt::netlist::{parse_bench, NodeKind};
use aqfp_bsopt::verify::verify;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "corpus/c499.bench".into());
    let net = parse_bench(&std::fs::read_to_string(&path)?)?;
    let cfg = PhaseConfig::with_skip(2);
    let sol = optimize(&net, &cfg, &OptimizeOptions::default())?;

    let report = verify(&net, &sol.netlist, &sol.levels, &cfg);
    println!("as optimized: {}", if report.is_clean() { "clean".to_string() } else { report.to_string() });

    let mut broken = sol.netlist.clone();
    let e = (0..broken.num_edges())
        .find(|&e| matches!(broken.kind(broken.edge(e).dst), NodeKind::Gate(_)))
        .expect("a gate input");
    broken.set_edge_inverted(e, !broken.edge(e).inverted);
    println!("after flipping edge {e}:");
    println!("{}", verify(&net, &broken, &sol.levels, &cfg).to_json());
    Ok(())
}
