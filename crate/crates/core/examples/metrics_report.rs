//! Writes metrics records for two small circuits into a temporary
//! directory and prints the CSV summary.

use aqfp_bsopt::config::PhaseConfig;
use aqfp_bsopt::iterate::{optimize, OptimizeOptions};
use aqfp_bsopt::netlist::parse_bench;
use aqfp_bsopt::report::{load_metrics_dir, report_csv, write_text, MetricsRecord};
use aqfp_bsopt::verify::buffer_chain_reduce;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("aqfp-bsopt-report-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let opts = OptimizeOptions::default();
    for name in ["c432", "c499"] {
        let net = parse_bench(&std::fs::read_to_string(format!("corpus/{name}.bench"))?)?;
        let zero = optimize(&net, &PhaseConfig::with_skip(0), &opts)?;
        for skip in 0..=3 {
            let cfg = PhaseConfig::with_skip(skip);
            let sol = optimize(&net, &cfg, &opts)?;
            let rec = MetricsRecord::new(name, "optimize", &cfg, &sol);
            write_text(&dir.join(format!("{name}-s{skip}.json")), &rec.to_json())?;
            let base = buffer_chain_reduce(&zero, &cfg);
            let rec = MetricsRecord::new(name, "reduce", &cfg, &base);
            write_text(&dir.join(format!("{name}-s{skip}-reduce.json")), &rec.to_json())?;
        }
    }
    print!("{}", report_csv(&load_metrics_dir(&dir)?));
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
