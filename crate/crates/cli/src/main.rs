//! Batch analysis of molecular interaction networks over coordinate
//! trajectories. Subcommands: build, centrality, metrics, classify,
//! patches, bench.
//!
//! Exit codes: 0 success, 1 partial failure (some frames failed), 2
//! configuration error.

mod commands;
mod input;
mod output;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use waternet::netbuild::{CutoffConfig, NeighborStrategy};
use waternet::Error;

#[derive(Parser)]
#[command(name = "waternet", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct InputArgs {
    /// Input files or directories (directories expand to *.gro / *.json /
    /// *.edges depending on --format, sorted lexicographically)
    #[arg(long, required = true, num_args = 1..)]
    input: Vec<PathBuf>,

    /// Input format
    #[arg(long, value_enum, default_value = "gro")]
    format: input::InputFormat,

    /// Atom label used as graph nodes (coordinate formats)
    #[arg(long, default_value = "OW")]
    species: String,

    /// Edge cutoff distance in nm
    #[arg(long, default_value_t = waternet::netbuild::DEFAULT_CUTOFF)]
    cutoff: f64,

    /// Pair search strategy
    #[arg(long, value_enum, default_value = "auto")]
    neighbor_strategy: StrategyArg,

    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Worker threads for frame-level parallelism (0 = all cores).
    /// Outputs are deterministic at --threads 1.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum StrategyArg {
    Auto,
    AllPairs,
    CellList,
}

impl InputArgs {
    fn cutoff_config(&self) -> CutoffConfig {
        CutoffConfig {
            r_cut: self.cutoff,
            strategy: match self.neighbor_strategy {
                StrategyArg::Auto => NeighborStrategy::Auto,
                StrategyArg::AllPairs => NeighborStrategy::AllPairs,
                StrategyArg::CellList => NeighborStrategy::CellList,
            },
        }
    }
}

#[derive(Args, Clone)]
struct MeasureArgs {
    /// Comma-separated centrality measures:
    /// degree, cl, bc, katz, ec, sub, tc
    #[arg(long, value_delimiter = ',', required = true)]
    measures: Vec<String>,

    /// Attenuation for subgraph centrality and total communicability
    #[arg(long, default_value_t = waternet::walkers::DEFAULT_BETA)]
    beta: f64,

    /// Katz attenuation: "auto" (= 1/(gamma * max spectral radius over the
    /// frame set)) or an explicit value
    #[arg(long, default_value = "auto")]
    alpha: String,

    /// Safety factor for automatic alpha selection
    #[arg(long, default_value_t = waternet::walkers::DEFAULT_GAMMA)]
    gamma: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Per-frame graph summaries (N, m, density, beta index) as CSV
    Build {
        #[command(flatten)]
        io: InputArgs,
    },
    /// Per-node centrality scores per frame plus pooled histograms
    Centrality {
        #[command(flatten)]
        io: InputArgs,
        #[command(flatten)]
        measures: MeasureArgs,
        /// Histogram bin count
        #[arg(long, default_value_t = waternet::phase::DEFAULT_BINS)]
        bins: usize,
        /// Divide every score by the frame's edge count before output
        #[arg(long)]
        normalize_by_edges: bool,
    },
    /// Per-frame global metrics and spectral summary CSV with a mean row
    Metrics {
        #[command(flatten)]
        io: InputArgs,
    },
    /// LDL/HDL classification against two reference histograms
    Classify {
        #[command(flatten)]
        io: InputArgs,
        /// Pooled histogram JSON of the low-temperature reference
        #[arg(long)]
        low_ref: PathBuf,
        /// Pooled histogram JSON of the high-temperature reference
        #[arg(long)]
        high_ref: PathBuf,
        /// Moving-average window (bins) for the crossing search
        #[arg(long, default_value_t = waternet::phase::DEFAULT_SMOOTH_WINDOW)]
        smooth_window: usize,
    },
    /// High-centrality patches per frame with per-node data export
    Patches {
        #[command(flatten)]
        io: InputArgs,
        #[command(flatten)]
        measures: MeasureArgs,
        /// Patch threshold rule
        #[arg(long, value_enum, default_value = "mean")]
        threshold_mode: ThresholdArg,
        /// Threshold score for --threshold-mode value
        #[arg(long)]
        threshold_value: Option<f64>,
    },
    /// Wall-time per measure per frame (single-threaded measurement)
    Bench {
        #[command(flatten)]
        io: InputArgs,
        #[command(flatten)]
        measures: MeasureArgs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum ThresholdArg {
    Mean,
    Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(file_errors) => {
            eprintln!("{file_errors} input frame(s) failed; see messages above");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::Param(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn setup_threads(threads: usize) -> Result<(), Error> {
    let wanted = if threads == 0 {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    } else {
        threads
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(wanted)
        .build_global()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<usize, Error> {
    match cli.command {
        Command::Build { io } => {
            setup_threads(io.threads)?;
            commands::build(&io)
        }
        Command::Centrality {
            io,
            measures,
            bins,
            normalize_by_edges,
        } => {
            setup_threads(io.threads)?;
            commands::centrality(&io, &measures, bins, normalize_by_edges)
        }
        Command::Metrics { io } => {
            setup_threads(io.threads)?;
            commands::metrics(&io)
        }
        Command::Classify {
            io,
            low_ref,
            high_ref,
            smooth_window,
        } => {
            setup_threads(io.threads)?;
            commands::classify(&io, &low_ref, &high_ref, smooth_window)
        }
        Command::Patches {
            io,
            measures,
            threshold_mode,
            threshold_value,
        } => {
            setup_threads(io.threads)?;
            let mode = match (threshold_mode, threshold_value) {
                (ThresholdArg::Mean, None) => waternet::phase::ThresholdMode::Mean,
                (ThresholdArg::Value, Some(x)) => waternet::phase::ThresholdMode::Value(x),
                (ThresholdArg::Value, None) => {
                    return Err(Error::Config(
                        "--threshold-mode value requires --threshold-value".into(),
                    ))
                }
                (ThresholdArg::Mean, Some(_)) => {
                    return Err(Error::Config(
                        "--threshold-value only applies to --threshold-mode value".into(),
                    ))
                }
            };
            commands::patches(&io, &measures, mode)
        }
        Command::Bench { io, measures } => commands::bench(&io, &measures),
    }
}
