//! Full optimization of one netlist with the per-round history.
//!
//! `cargo run --release --example optimize -- corpus/c1908.bench 2`

use aqfp_bsopt::config::PhaseConfig;
use aqfp_bsopt::iterate::{optimize_with_history, OptimizeOptions};
use aqfp_bsopt::netlist::parse_bench;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| "corpus/c432.bench".into());
    let skip: u8 = args.next().map_or(Ok(1), |s| s.parse())?;
    let net = parse_bench(&std::fs::read_to_string(&path)?)?;

    let run = optimize_with_history(&net, &PhaseConfig::with_skip(skip), &OptimizeOptions::default())?;
    for h in &run.history {
        println!(
            "round {}: lp {:.1}, {} ({}){}",
            h.iteration,
            h.fractional_cost,
            h.cost,
            if h.accepted { "accepted" } else { "rejected" },
            if h.fallbacks > 0 { format!(", {} fallbacks", h.fallbacks) } else { String::new() }
        );
    }
    let m = &run.solution.metrics;
    println!(
        "stop {:?}: {} buffers + {} splitters = {} in {:.2}s",
        run.stop,
        m.buffers,
        m.splitters,
        m.total,
        m.wall_time.as_secs_f64()
    );
    Ok(())
}
