use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use stopdur_core::fullinfo::DEFAULT_GRID;

mod commands;
mod output;

use commands::{SimArgs, SimModel};
use output::Report;

const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Optimal stopping rules and values for duration problems.
#[derive(Debug, Parser)]
#[command(name = "stopdur", version)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all available).
    #[arg(long, global = true, env = "STOPDUR_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rank-only duration of the relatively best item.
    NoinfoBc {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        recall: bool,
        /// Pay only when the selected item is the overall best.
        #[arg(long)]
        overall_best: bool,
    },
    /// Rank-only best-or-second problem.
    NoinfoBest2 {
        #[arg(long)]
        n: usize,
    },
    /// Rank-only infinite problem with discounting.
    NoinfoDiscount {
        #[arg(long)]
        beta: f64,
    },
    /// Full-information duration, no recall.
    Fidp {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
    },
    /// Full-information duration with recall.
    FidpRecall {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
    },
    /// Full-information duration paid only on the overall best.
    Bcdp {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[arg(long)]
        recall: bool,
    },
    /// Bounded random horizon with the given prior P(N = k), k = 1, 2, ...
    RhPrior {
        #[arg(long, value_delimiter = ',', required = true)]
        prior: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
    },
    /// Geometric horizon; with --n also the prior truncated to 1..=n.
    RhGeometric {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
    },
    /// Best-or-second, stops on relatively best only, fixed horizon.
    Ka {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
    },
    /// Best-or-second, stops on relatively best only, geometric horizon.
    KaGeometric {
        #[arg(long)]
        p: f64,
    },
    /// Sign structure of the one-step sets of the geometric best-or-second problem.
    Best2Geometric {
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 100)]
        lattice: usize,
        /// Also simulate the full and the reduced rule.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Monte Carlo estimate of the computed optimal rule.
    Simulate {
        #[arg(long, value_enum)]
        model: SimModel,
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 0.1)]
        p: f64,
        #[arg(long, default_value_t = 0.9)]
        beta: f64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
    },
    /// Limiting constants next to their reference figures.
    Constants,
}

enum Failure {
    Config(String),
    Numerical(String),
}

impl From<stopdur_core::Error> for Failure {
    fn from(e: stopdur_core::Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Config(e.to_string())
        }
    }
}

fn run(cmd: Command) -> Result<Report, Failure> {
    let r = match cmd {
        Command::NoinfoBc { n, recall, overall_best } => commands::noinfo_bc(n, recall, overall_best)?,
        Command::NoinfoBest2 { n } => commands::noinfo_best2(n)?,
        Command::NoinfoDiscount { beta } => commands::noinfo_discount(beta)?,
        Command::Fidp { n, grid } => commands::fidp(n, grid, false)?,
        Command::FidpRecall { n, grid } => commands::fidp(n, grid, true)?,
        Command::Bcdp { n, grid, recall } => commands::bcdp(n, grid, recall)?,
        Command::RhPrior { prior, grid } => commands::rh_prior(&prior, grid)?,
        Command::RhGeometric { p, n, grid } => commands::rh_geometric(p, n, grid)?,
        Command::Ka { n, grid } => commands::ka(n, grid)?,
        Command::KaGeometric { p } => commands::ka_geometric_cmd(p)?,
        Command::Best2Geometric { p, lattice, samples, seed } => {
            if samples == Some(0) {
                return Err(Failure::Config("samples must be at least 1".into()));
            }
            commands::best2_geometric(p, lattice, samples, seed)?
        }
        Command::Simulate { model, n, p, beta, samples, seed, grid } => commands::simulate(&SimArgs {
            model,
            n,
            p,
            beta,
            samples,
            seed,
            grid,
        })?,
        Command::Constants => commands::constants()?,
    };
    Ok(r)
}

fn emit(r: &Report, format: Format, out: Option<&PathBuf>) -> Result<(), Failure> {
    let io_err = |e: io::Error| Failure::Config(format!("cannot write output: {e}"));
    let mut w: Box<dyn Write> = match out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(io_err)?)),
        None => Box::new(io::stdout().lock()),
    };
    match format {
        Format::Json => output::write_json(r, &mut w).map_err(io_err)?,
        Format::Csv => output::write_csv(r, &mut w).map_err(|e| Failure::Config(format!("cannot write output: {e}")))?,
    }
    w.flush().map_err(io_err)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = run(cli.command).and_then(|r| emit(&r, cli.format, cli.out.as_ref()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("numerical failure: {m}");
            ExitCode::from(3)
        }
    }
}
