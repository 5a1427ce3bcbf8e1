//! Runs the initial level assignment on a netlist and reports the program
//! size and how many edges end up spanning more than one phase.
//!
//! `cargo run --release --example initial_levels -- corpus/c880.bench 2`

use aqfp_bsopt::config::PhaseConfig;
use aqfp_bsopt::initial::assign_initial_levels;
use aqfp_bsopt::netlist::{absorb_inverters, parse_bench, strip_buffers_and_splitters};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| "corpus/c880.bench".into());
    let skip: u8 = args.next().map_or(Ok(1), |s| s.parse())?;
    let cfg = PhaseConfig::with_skip(skip);
    let net = strip_buffers_and_splitters(&absorb_inverters(&parse_bench(&std::fs::read_to_string(&path)?)?));

    let init = assign_initial_levels(&net, &cfg)?;
    println!(
        "LP: {} vars, {} rows ({} subset rows), objective {:.2}",
        init.lp_vars, init.lp_rows, init.subset_rows, init.lp_objective
    );
    let long = net
        .edges()
        .iter()
        .filter(|e| init.levels[e.dst] - init.levels[e.src] > i64::from(cfg.span()))
        .count();
    println!("depth {}, {long} of {} edges need buffers", init.levels.max(), net.num_edges());
    Ok(())
}
