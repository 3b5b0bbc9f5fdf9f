use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use eep::bench::{self, Generator, PoolMethod, SynthDatasetSpec};

use crate::io::write_file;
use crate::{usage, Format};

fn parse_method(s: &str) -> Result<PoolMethod, String> {
    s.parse().map_err(|e: eep::Error| e.to_string())
}

fn parse_generator(s: &str) -> Result<Generator, String> {
    s.parse().map_err(|e: eep::Error| e.to_string())
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// trend, reversal or frequency.
    #[arg(long, value_parser = parse_generator, default_value = "reversal")]
    generator: Generator,

    #[arg(long, default_value_t = 2)]
    classes: usize,

    #[arg(long = "per-class", default_value_t = 100)]
    per_class: usize,

    /// Feature dimensionality d.
    #[arg(long, default_value_t = 8)]
    dim: usize,

    /// Sequence length T.
    #[arg(long = "length", short = 'T', default_value_t = 50)]
    length: usize,

    /// Standard deviation of the additive Gaussian noise.
    #[arg(long, default_value_t = 0.05)]
    noise: f64,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Pooling methods, e.g. `mean`, `max`, `rank`, `dct:2`, `eigen:1-3+max`.
    /// Repeat the flag or separate with commas.
    #[arg(
        long = "method",
        value_parser = parse_method,
        value_delimiter = ',',
        default_values = ["mean", "max", "rank", "dct:2", "eigen:1-3"]
    )]
    methods: Vec<PoolMethod>,

    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run(args: BenchArgs, format: Format) -> Result<()> {
    let spec = SynthDatasetSpec {
        num_classes: args.classes,
        sequences_per_class: args.per_class,
        d: args.dim,
        len: args.length,
        noise_sigma: args.noise,
        generator: args.generator,
        rng_seed: args.seed,
    };
    spec.validate().map_err(|e| usage(e.to_string()))?;
    if args.per_class < 2 {
        return Err(usage("--per-class must be at least 2 to fill both splits"));
    }
    let dataset = bench::generate(&spec)?;
    let report = bench::evaluate(&dataset, &args.methods)?;
    let json = report.to_json()?;
    if let Some(path) = &args.out {
        write_file(path, &json)?;
    }
    match format {
        Format::Json => print!("{}", String::from_utf8(json)?),
        _ => print!("{}", report.to_table()),
    }
    Ok(())
}
