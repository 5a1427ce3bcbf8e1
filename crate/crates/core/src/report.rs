//! Netlist files, metrics records and the CSV summary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::PhaseConfig;
use crate::error::ReportError;
use crate::iterate::Solution;
use crate::netlist::{from_json, parse_bench_with_levels, serialize, to_json, Levels, Netlist};

pub const CSV_HEADER: &str = "benchmark,method,skip,buffers,splitters,total";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Bench,
    Json,
}

impl Format {
    /// `Json` for a `.json` extension, `Bench` otherwise.
    pub fn for_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Bench,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ReportError + '_ {
    move |source| ReportError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Reads a netlist (inverters absorbed) and its level annotations.
pub fn read_netlist(path: &Path) -> Result<(Netlist, Option<Levels>), ReportError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let parsed = match Format::for_path(path) {
        Format::Json => from_json(&text),
        Format::Bench => parse_bench_with_levels(&text),
    };
    parsed.map_err(|source| ReportError::Parse {
        path: path.display().to_string(),
        source,
    })
}

pub fn render_netlist(net: &Netlist, levels: Option<&Levels>, format: Format) -> String {
    match format {
        Format::Bench => serialize(net, levels),
        Format::Json => to_json(net, levels),
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<(), ReportError> {
    fs::write(path, text).map_err(io_err(path))
}

/// One optimization or baseline result as stored in a metrics file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub benchmark: String,
    #[serde(default = "default_method")]
    pub method: String,
    pub skip: u8,
    pub buffers: usize,
    pub splitters: usize,
    pub total: usize,
    pub iterations: usize,
    pub runtime_ms: u64,
    #[serde(default)]
    pub exact: bool,
    #[serde(default)]
    pub max_fanout: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
}

fn default_method() -> String {
    "optimize".into()
}

impl MetricsRecord {
    pub fn new(benchmark: &str, method: &str, cfg: &PhaseConfig, sol: &Solution) -> Self {
        MetricsRecord {
            benchmark: benchmark.to_string(),
            method: method.to_string(),
            skip: cfg.skip,
            buffers: sol.metrics.buffers,
            splitters: sol.metrics.splitters,
            total: sol.metrics.total,
            iterations: sol.metrics.iterations,
            runtime_ms: sol.metrics.wall_time.as_millis() as u64,
            exact: sol.metrics.exact,
            max_fanout: Some(cfg.max_fanout),
            seed: Some(cfg.seed),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("metrics serialize")
    }
}

/// Every `*.json` file of `dir`, in file-name order.
pub fn load_metrics_dir(dir: &Path) -> Result<Vec<MetricsRecord>, ReportError> {
    let mut paths: Vec<_> = fs::read_dir(dir)
        .map_err(io_err(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| Format::for_path(p) == Format::Json)
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let text = fs::read_to_string(p).map_err(io_err(p))?;
            serde_json::from_str(&text).map_err(|e| ReportError::Metrics {
                path: p.display().to_string(),
                message: e.to_string(),
            })
        })
        .collect()
}

/// Mean of `1 - a/b` over the benchmarks present in both maps.
fn mean_savings(a: &BTreeMap<&str, usize>, b: &BTreeMap<&str, usize>) -> Option<f64> {
    let ratios: Vec<f64> = a
        .iter()
        .filter_map(|(k, &x)| b.get(k).filter(|&&y| y > 0).map(|&y| 1.0 - x as f64 / y as f64))
        .collect();
    (!ratios.is_empty()).then(|| ratios.iter().sum::<f64>() / ratios.len() as f64)
}

/// CSV with one row per record, then average-savings rows: each method's
/// skip `s` against its own skip 0, and `optimize` against `reduce` at
/// the same skip. Savings are per-circuit `1 - total / reference`,
/// averaged, in percent.
pub fn report_csv(records: &[MetricsRecord]) -> String {
    let mut rows: Vec<&MetricsRecord> = records.iter().collect();
    rows.sort_by(|a, b| (&a.benchmark, &a.method, a.skip).cmp(&(&b.benchmark, &b.method, b.skip)));
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    let mut totals: BTreeMap<(&str, u8), BTreeMap<&str, usize>> = BTreeMap::new();
    for r in &rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.benchmark, r.method, r.skip, r.buffers, r.splitters, r.total
        );
        totals
            .entry((r.method.as_str(), r.skip))
            .or_default()
            .insert(r.benchmark.as_str(), r.total);
    }
    for (&(method, skip), by_bench) in &totals {
        if skip == 0 {
            continue;
        }
        if let Some(s) = totals.get(&(method, 0)).and_then(|zero| mean_savings(by_bench, zero)) {
            let _ = writeln!(out, "Average Savings vs skip 0,{method},{skip},,,{:.1}%", 100.0 * s);
        }
        if method == "optimize" {
            if let Some(s) = totals.get(&("reduce", skip)).and_then(|base| mean_savings(by_bench, base)) {
                let _ = writeln!(out, "Average Savings vs reduce,{method},{skip},,,{:.1}%", 100.0 * s);
            }
        }
    }
    out
}
