use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use aqfp_bsopt::config::PhaseConfig;
use aqfp_bsopt::error::{OptimizeError, ReportError};
use aqfp_bsopt::iterate::{optimize, Metrics, OptimizeOptions, Solution};
use aqfp_bsopt::netlist::{strip_buffers_and_splitters, Levels, Netlist};
use aqfp_bsopt::report::{
    load_metrics_dir, read_netlist, render_netlist, report_csv, write_text, Format, MetricsRecord,
};
use aqfp_bsopt::verify::{buffer_chain_reduce, check_phase_legality, verify};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;

/// Buffer and splitter minimization for AQFP netlists under phase skipping.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Insert a minimal set of buffers and splitters.
    Optimize {
        input: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, value_enum, default_value_t = LpMode::Relaxed)]
        lp: LpMode,
        #[arg(long, default_value_t = 50)]
        max_iters: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check an optimized netlist against its original.
    Verify {
        original: PathBuf,
        optimized: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Buffer-chain reduction of a skip-0 solution to the target skip.
    Reduce {
        /// A skip-0 solution with levels, or an unbuffered netlist to
        /// optimize at skip 0 first.
        input: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Summarize a directory of metrics files as CSV.
    Report {
        dir: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ConfigArgs {
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=3))]
    skip: u8,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(2..))]
    max_fanout: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    subset_cap: Option<usize>,
    #[arg(long)]
    enum_threshold: Option<usize>,
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(i64).range(0..=1))]
    pi_level: i64,
}

impl ConfigArgs {
    fn config(&self) -> PhaseConfig {
        let mut cfg = PhaseConfig::with_skip(self.skip).max_fanout(self.max_fanout as usize).seed(self.seed);
        cfg.pi_level = self.pi_level;
        if let Some(c) = self.subset_cap {
            cfg.subset_cap = c;
        }
        if let Some(t) = self.enum_threshold {
            cfg.enum_threshold = t;
        }
        cfg
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output netlist; written to stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Metrics file; defaults to `<output stem>.metrics.json` next to the
    /// output.
    #[arg(long)]
    metrics: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutFormat>,
}

#[derive(Clone, Copy, ValueEnum)]
enum LpMode {
    Relaxed,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Bench,
    Json,
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl ToString) -> Failure {
    Failure {
        code,
        message: message.to_string(),
    }
}

fn from_report(e: ReportError) -> Failure {
    fail(2, e)
}

fn from_optimize(e: OptimizeError) -> Failure {
    let code = match e {
        OptimizeError::Config(_) => 1,
        OptimizeError::Input(_) => 2,
        OptimizeError::Verification(_) => 4,
        _ => 3,
    };
    fail(code, e)
}

/// Writes to stdout, ignoring a closed pipe.
fn stdout(text: &str) {
    let _ = std::io::stdout().write_all(text.as_bytes());
}

fn benchmark_name(path: &Path) -> String {
    path.file_stem().map_or_else(|| "netlist".into(), |s| s.to_string_lossy().into_owned())
}

/// Checks `sol` against `original` and writes the netlist and metrics.
fn emit(
    original: &Netlist,
    sol: &Solution,
    cfg: &PhaseConfig,
    record: MetricsRecord,
    out: &OutputArgs,
) -> Result<(), Failure> {
    let report = verify(original, &sol.netlist, &sol.levels, cfg);
    if !report.is_clean() {
        return Err(fail(4, format!("result failed verification\n{report}")));
    }
    let format = match (out.format, &out.output) {
        (Some(OutFormat::Json), _) => Format::Json,
        (Some(OutFormat::Bench), _) | (None, None) => Format::Bench,
        (None, Some(p)) => Format::for_path(p),
    };
    let text = render_netlist(&sol.netlist, Some(&sol.levels), format);
    match &out.output {
        Some(p) => write_text(p, &text).map_err(from_report)?,
        None => stdout(&text),
    }
    let metrics = out
        .metrics
        .clone()
        .or_else(|| out.output.as_ref().map(|p| p.with_extension("metrics.json")));
    if let Some(m) = metrics {
        write_text(&m, &record.to_json()).map_err(from_report)?;
    }
    info!(
        "{} {} skip {}: {} buffers, {} splitters, total {}",
        record.benchmark, record.method, record.skip, record.buffers, record.splitters, record.total
    );
    Ok(())
}

fn solution_from(net: Netlist, levels: Levels) -> Solution {
    let c = net.cost();
    Solution {
        netlist: net,
        levels,
        metrics: Metrics {
            buffers: c.buffers,
            splitters: c.splitters,
            total: c.total,
            iterations: 0,
            wall_time: Duration::ZERO,
            exact: false,
        },
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Optimize {
            input,
            config,
            lp,
            max_iters,
            output,
        } => {
            let cfg = config.config();
            let (net, _) = read_netlist(&input).map_err(from_report)?;
            let opts = OptimizeOptions {
                exact_ilp: matches!(lp, LpMode::Exact),
                max_iters,
                ..OptimizeOptions::default()
            };
            let sol = optimize(&net, &cfg, &opts).map_err(from_optimize)?;
            let record = MetricsRecord::new(&benchmark_name(&input), "optimize", &cfg, &sol);
            emit(&net, &sol, &cfg, record, &output)
        }
        Command::Verify {
            original,
            optimized,
            config,
            json,
        } => {
            let cfg = config.config();
            let (orig, _) = read_netlist(&original).map_err(from_report)?;
            let (net, levels) = read_netlist(&optimized).map_err(from_report)?;
            let levels = levels.ok_or_else(|| fail(2, format!("{}: no level annotations", optimized.display())))?;
            let report = verify(&orig, &net, &levels, &cfg);
            if json {
                stdout(&format!("{}\n", report.to_json()));
            } else if report.is_clean() {
                stdout("ok\n");
            } else {
                stdout(&report.to_string());
            }
            if report.is_clean() {
                Ok(())
            } else {
                Err(fail(4, "verification failed"))
            }
        }
        Command::Reduce { input, config, output } => {
            let cfg = config.config();
            let zero = PhaseConfig { skip: 0, ..cfg.clone() };
            let (net, levels) = read_netlist(&input).map_err(from_report)?;
            let (original, base) = match levels {
                Some(levels) if net.cost().total > 0 => {
                    let bad = check_phase_legality(&net, &levels, &zero);
                    if let Some(v) = bad.first() {
                        return Err(fail(4, format!("input is not a skip-0 solution: {v}")));
                    }
                    (strip_buffers_and_splitters(&net), solution_from(net, levels))
                }
                _ => {
                    let sol = optimize(&net, &zero, &OptimizeOptions::default()).map_err(from_optimize)?;
                    (net, sol)
                }
            };
            let sol = buffer_chain_reduce(&base, &cfg);
            let record = MetricsRecord::new(&benchmark_name(&input), "reduce", &cfg, &sol);
            emit(&original, &sol, &cfg, record, &output)
        }
        Command::Report { dir, output } => {
            let records = load_metrics_dir(&dir).map_err(from_report)?;
            let csv = report_csv(&records);
            match output {
                Some(p) => write_text(&p, &csv).map_err(from_report),
                None => {
                    stdout(&csv);
                    Ok(())
                }
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("AQFP_BSOPT_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
