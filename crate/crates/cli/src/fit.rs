use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use eep::pooling::sample_regular;
use eep::TimeCovariance;

use crate::io::{gather_inputs, load_all};
use crate::usage;

#[derive(Args, Debug)]
pub struct FitArgs {
    /// Manifest listing sequence files or frame directories.
    #[arg(long)]
    manifest: Option<PathBuf>,

    /// Sequence files or frame directories, in addition to the manifest.
    inputs: Vec<PathBuf>,

    /// Number of regularly sampled time steps per sequence.
    #[arg(long = "length", short = 'L', default_value_t = 25)]
    length: usize,

    /// Number of eigen evolution functions to keep.
    #[arg(long, short = 'k')]
    k: usize,

    /// Output basis JSON.
    #[arg(long)]
    out: PathBuf,

    /// Previously saved accumulators to add before fitting.
    #[arg(long = "merge")]
    merge: Vec<PathBuf>,

    /// Save the accumulated time covariance for later merging.
    #[arg(long)]
    save_cov: Option<PathBuf>,
}

pub fn run(args: FitArgs) -> Result<()> {
    if args.length == 0 {
        return Err(usage("--length must be at least 1"));
    }
    if args.k == 0 || args.k > args.length {
        return Err(usage(format!(
            "-k must lie in 1..={} (the sequence length), got {}",
            args.length, args.k
        )));
    }
    let inputs = gather_inputs(args.manifest.as_deref(), &args.inputs)?;
    if inputs.is_empty() && args.merge.is_empty() {
        return Err(usage(
            "nothing to fit: give a manifest, inputs, or --merge files",
        ));
    }

    let len = args.length;
    let sequences = load_all(&inputs, |_, seq| Ok(sample_regular(&seq, len)?))?;
    let mut cov = TimeCovariance::from_sequences(len, &sequences)?;
    for path in &args.merge {
        let part = TimeCovariance::load(path)?;
        if part.len() != len {
            bail!(
                "{}: accumulator has L = {}, expected {len}",
                path.display(),
                part.len()
            );
        }
        cov.merge(&part)?;
    }
    if let Some(path) = &args.save_cov {
        cov.save(path)
            .with_context(|| format!("saving accumulator to {}", path.display()))?;
    }

    let spectrum = cov.fit_eigen()?;
    let basis = spectrum.take_basis(args.k)?;
    basis
        .save(&args.out)
        .with_context(|| format!("writing {}", args.out.display()))?;

    println!(
        "fitted {} sequences, L = {len}, k = {}",
        cov.sequence_count(),
        args.k
    );
    println!("{:>4}  {:>24}  {:>12}", "j", "eigenvalue", "energy");
    for (j, (lam, energy)) in spectrum
        .eigenvalues()
        .iter()
        .zip(spectrum.cumulative_energy())
        .enumerate()
    {
        println!(
            "{:>4}  {:>24}  {:>12.9}",
            j + 1,
            eep::formats::format_f64(*lam),
            energy
        );
    }
    Ok(())
}
