//! Compares the buffer-chain reduction baseline with full optimization for
//! each skip.

use aqfp_bsopt::config::PhaseConfig;
use aqfp_bsopt::iterate::{optimize, OptimizeOptions};
use aqfp_bsopt::netlist::parse_bench;
use aqfp_bsopt::verify::buffer_chain_reduce;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "corpus/c880.bench".into());
    let net = parse_bench(&std::fs::read_to_string(&path)?)?;
    let opts = OptimizeOptions::default();
    let zero = optimize(&net, &PhaseConfig::with_skip(0), &opts)?;
    println!("skip 0: {}", zero.cost());
    for skip in 1..=3 {
        let cfg = PhaseConfig::with_skip(skip);
        let base = buffer_chain_reduce(&zero, &cfg);
        let opt = optimize(&net, &cfg, &opts)?;
        let saved = 100.0 * (1.0 - opt.metrics.total as f64 / base.metrics.total as f64);
        println!("skip {skip}: reduce {}, optimize {} ({saved:.1}% fewer)", base.metrics.total, opt.metrics.total);
    }
    Ok(())
}
