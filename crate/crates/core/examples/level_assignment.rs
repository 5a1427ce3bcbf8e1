//! Assigns levels to a small graph that already contains a splitter, then
//! materializes the buffers for two skips.

use aqfp_bsopt::assign::{assign_levels, materialize_buffers, DEFAULT_NODE_LIMIT};
use aqfp_bsopt::config::PhaseConfig;
use aqfp_bsopt::netlist::parse_bench;

const GRAPH: &str = "\
INPUT(a)
INPUT(b)
INPUT(c)
g1 = AND(a,b)
s = SPL(g1)
g2 = AND(s,c)
g3 = MAJ(s,g2,c)
g4 = OR(g3,a)
OUTPUT(g4)
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graph = parse_bench(GRAPH)?;
    for skip in [0, 2] {
        let cfg = PhaseConfig::with_skip(skip);
        for exact in [false, true] {
            let asg = assign_levels(&graph, &cfg, exact, DEFAULT_NODE_LIMIT)?;
            let (net, _) = materialize_buffers(&graph, &asg.levels, &cfg);
            println!(
                "skip {skip} {}: objective {:.2}, {} buffers",
                if exact { "exact" } else { "relaxed" },
                asg.fractional_cost,
                net.cost().buffers
            );
        }
    }
    Ok(())
}
