//! Parses a .bench netlist, prints its shape and round-trips it through JSON.
//!
//! `cargo run --example parse_netlist -- corpus/c432.bench`

use aqfp_bsopt::netlist::{from_json, parse_bench, to_json, validate};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "corpus/c432.bench".into());
    let net = parse_bench(&std::fs::read_to_string(&path)?)?;
    let max_fanout = net.node_ids().map(|n| net.fanout_count(n)).max().unwrap_or(0);
    println!(
        "{path}: {} inputs, {} outputs, {} gates, {} edges, max fanout {max_fanout}",
        net.inputs().len(),
        net.outputs().len(),
        net.gates().len(),
        net.num_edges()
    );
    println!("validation: {} problems", validate(&net).violations.len());
    let (back, _) = from_json(&to_json(&net, None))?;
    println!("json round trip: {} nodes, {} edges", back.num_nodes(), back.num_edges());
    Ok(())
}
