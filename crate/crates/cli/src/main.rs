//! `eep`: fit temporal bases, pool sequences, render eigen/dynamic images,
//! check reconstruction errors, and run the synthetic pooling benchmark.
//!
//! Exit codes: 0 success, 1 data error, 2 usage error.

mod bench;
mod fit;
mod image;
mod io;
mod pool;
mod report;

use std::fmt;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "eep", version, about = "Eigen evolution pooling toolkit")]
struct Cli {
    /// Worker threads for parallel loading and pooling (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output format where a command supports several.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Eepb,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Learn eigen evolution functions from a corpus.
    Fit(fit::FitArgs),
    /// Pool sequences into descriptors.
    Pool(pool::PoolArgs),
    /// Render eigen, dynamic, or mean images from a frame directory.
    Image(image::ImageArgs),
    /// Tabulate reconstruction error against the eigenvalue tail.
    Report(report::ReportArgs),
    /// Compare pooling methods on a synthetic classification task.
    Bench(bench::BenchArgs),
}

/// Invalid combination of arguments; exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    match cli.command {
        Command::Fit(args) => fit::run(args),
        Command::Pool(args) => pool::run(args, cli.format),
        Command::Image(args) => image::run(args),
        Command::Report(args) => report::run(args, cli.format),
        Command::Bench(args) => bench::run(args, cli.format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.is::<UsageError>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
