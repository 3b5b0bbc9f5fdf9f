use std::path::PathBuf;

use anyhow::{anyhow, bail, Result};
use clap::Args;
use eep::basis::residual_gap;
use eep::pooling::{reconstruction_error, sample_regular};
use eep::{formats, BasisSet};
use serde::Serialize;

use crate::io::{gather_inputs, load_all, parse_indices};
use crate::{usage, Format};

/// Largest accepted relative gap between reconstruction error and eigenvalue tail.
const RESIDUAL_TOL: f64 = 1e-6;

#[derive(Args, Debug)]
pub struct ReportArgs {
    #[arg(long)]
    manifest: Option<PathBuf>,

    inputs: Vec<PathBuf>,

    /// Basis JSON produced by `eep fit`.
    #[arg(long)]
    basis: PathBuf,

    /// Basis sizes to evaluate, e.g. `1-5` (default: every size the basis file allows).
    #[arg(long = "k-range")]
    k_range: Option<String>,
}

#[derive(Serialize)]
struct ReportRow {
    k: usize,
    error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    eigen_tail: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    relative_gap: Option<f64>,
}

#[derive(Serialize)]
struct ReportJson {
    sequences: usize,
    rows: Vec<ReportRow>,
    consistent: bool,
}

pub fn run(args: ReportArgs, format: Format) -> Result<()> {
    let basis = BasisSet::load(&args.basis)?;
    let ks = match &args.k_range {
        Some(spec) => parse_indices(spec).map_err(usage)?,
        None => (1..=basis.count()).collect(),
    };
    if let Some(&k) = ks.iter().find(|&&k| k > basis.count()) {
        return Err(usage(format!(
            "k = {k} exceeds the {} functions stored in {}",
            basis.count(),
            args.basis.display()
        )));
    }
    if !basis.source().is_orthonormal() {
        bail!(
            "{}: reconstruction needs an eigen or dct basis, got {}",
            args.basis.display(),
            basis.source()
        );
    }
    let inputs = gather_inputs(args.manifest.as_deref(), &args.inputs)?;
    if inputs.is_empty() {
        return Err(usage("no input sequences given"));
    }
    let len = basis.len();
    let sequences = load_all(&inputs, |path, seq| {
        sample_regular(&seq, len).map_err(|e| anyhow!("{}: {e}", path.display()))
    })?;

    let total_energy = basis.eigenvalues().map(|ev| ev.iter().sum::<f64>());
    let mut rows = Vec::with_capacity(ks.len());
    for &k in &ks {
        let truncated = basis.truncated(k)?;
        let mut error = 0.0;
        for seq in &sequences {
            error += reconstruction_error(seq, &truncated)?;
        }
        let eigen_tail = basis.eigenvalues().map(|ev| ev[k..].iter().sum::<f64>());
        let relative_gap = eigen_tail
            .zip(total_energy)
            .map(|(tail, total)| residual_gap(error, tail, total));
        rows.push(ReportRow {
            k,
            error,
            eigen_tail,
            relative_gap,
        });
    }
    let consistent = rows
        .iter()
        .all(|r| r.relative_gap.is_none_or(|g| g <= RESIDUAL_TOL));

    match format {
        Format::Json => {
            let json = ReportJson {
                sequences: sequences.len(),
                rows,
                consistent,
            };
            print!("{}", String::from_utf8(formats::to_json_bytes(&json)?)?);
        }
        _ => {
            println!(
                "{:>4}  {:>24}  {:>24}  {:>12}",
                "k", "reconstruction_error", "eigenvalue_tail", "rel_gap"
            );
            for r in &rows {
                println!(
                    "{:>4}  {:>24}  {:>24}  {:>12}",
                    r.k,
                    formats::format_f64(r.error),
                    r.eigen_tail.map_or("-".into(), formats::format_f64),
                    r.relative_gap.map_or("-".into(), |g| format!("{g:.3e}")),
                );
            }
        }
    }
    if !consistent {
        bail!(
            "reconstruction error deviates from the eigenvalue tail by more than {RESIDUAL_TOL:e} (relative); \
             the corpus differs from the one the basis was fitted on"
        );
    }
    Ok(())
}
