use std::path::{Path, PathBuf};

use anyhow::{anyhow, Result};
use clap::{ArgGroup, Args, ValueEnum};
use eep::pooling::{self, PooledDescriptor, Provenance, WindowSpan};
use eep::{formats, BasisSet, FeatureSequence};
use serde::Serialize;

use crate::io::{gather_inputs, load_all, parse_indices, write_file};
use crate::{usage, Format};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    Dct,
    Rank,
    Mean,
    Max,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("pooler").required(true).args(["basis", "method"])))]
pub struct PoolArgs {
    /// Sequence files (CSV or .eepb) or frame directories.
    inputs: Vec<PathBuf>,

    /// Manifest listing further inputs, pooled before the positional ones.
    #[arg(long)]
    manifest: Option<PathBuf>,

    /// Basis JSON produced by `eep fit`.
    #[arg(long)]
    basis: Option<PathBuf>,

    /// Built-in pooling operator.
    #[arg(long, value_enum)]
    method: Option<Builtin>,

    /// 1-based basis indices, e.g. `1,2,3` or `1-3`.
    #[arg(long)]
    indices: Option<String>,

    /// Resampling length for built-in global pooling (default: each sequence's own length).
    #[arg(long = "length", short = 'L')]
    length: Option<usize>,

    /// L2-normalize every descriptor.
    #[arg(long)]
    normalize: bool,

    /// Concatenate the selected basis descriptors of each window into one row.
    #[arg(long)]
    concat: bool,

    /// Pool within sliding windows of this many steps.
    #[arg(long)]
    window: Option<usize>,

    /// Step between window starts.
    #[arg(long, default_value_t = pooling::DEFAULT_STRIDE)]
    stride: usize,

    /// Output path for the descriptors.
    #[arg(long)]
    out: PathBuf,

    /// Optional sidecar JSON with per-row provenance.
    #[arg(long)]
    provenance: Option<PathBuf>,
}

enum Pooler {
    File { basis: BasisSet, path: PathBuf },
    Builtin(Builtin),
}

struct Plan {
    pooler: Pooler,
    indices: Vec<usize>,
    length: Option<usize>,
    window: Option<usize>,
    stride: usize,
    normalize: bool,
    concat: bool,
}

fn plan(args: &PoolArgs) -> Result<Plan> {
    let indices = match &args.indices {
        Some(spec) => parse_indices(spec).map_err(usage)?,
        None => Vec::new(),
    };
    let pooler = match (&args.basis, args.method) {
        (Some(path), None) => Pooler::File {
            basis: BasisSet::load(path)?,
            path: path.clone(),
        },
        (None, Some(m)) => Pooler::Builtin(m),
        _ => return Err(usage("give exactly one of --basis or --method")),
    };
    let indices = match &pooler {
        Pooler::File { basis, .. } => {
            if indices.is_empty() {
                (1..=basis.count()).collect()
            } else {
                if let Some(&j) = indices.iter().find(|&&j| j > basis.count()) {
                    return Err(usage(format!(
                        "index {j} exceeds the {} functions in the basis",
                        basis.count()
                    )));
                }
                indices
            }
        }
        Pooler::Builtin(Builtin::Dct) => {
            if indices.is_empty() {
                vec![1]
            } else {
                indices
            }
        }
        Pooler::Builtin(_) => {
            if indices.iter().any(|&j| j != 1) {
                return Err(usage(
                    "rank, mean and max pooling have a single function (index 1)",
                ));
            }
            vec![1]
        }
    };
    if args.length == Some(0) {
        return Err(usage("--length must be at least 1"));
    }
    if let Some(w) = args.window {
        if w < 2 {
            return Err(usage("--window must be at least 2"));
        }
        if args.length.is_some() {
            return Err(usage(
                "--length has no effect with --window; the window sets the length",
            ));
        }
    }
    if args.stride == 0 {
        return Err(usage("--stride must be at least 1"));
    }
    if let (Pooler::File { basis, path }, Some(w)) = (&pooler, args.window) {
        if basis.len() != w {
            return Err(anyhow!(
                "{}: basis has L = {} but --window is {w}; fit the basis with L = {w}",
                path.display(),
                basis.len()
            ));
        }
    }
    Ok(Plan {
        pooler,
        indices,
        length: args.length,
        window: args.window,
        stride: args.stride,
        normalize: args.normalize,
        concat: args.concat,
    })
}

impl Plan {
    fn builtin_basis(&self, kind: Builtin, len: usize) -> Result<BasisSet> {
        Ok(match kind {
            Builtin::Dct => {
                let k = self.indices.iter().copied().max().unwrap_or(1);
                if k > len {
                    return Err(anyhow!("dct index {k} exceeds the pooled length {len}"));
                }
                BasisSet::dct(len, k)?
            }
            Builtin::Rank => BasisSet::rank(len)?,
            Builtin::Mean => BasisSet::mean(len)?,
            Builtin::Max => unreachable!("max pooling has no basis"),
        })
    }

    /// Descriptor groups for one sequence; one group per window (or one for global pooling).
    fn pool(&self, seq: &FeatureSequence) -> Result<Vec<Vec<PooledDescriptor>>> {
        let groups = match self.window {
            Some(w) => self.pool_windows(seq, w)?,
            None => {
                let len = match &self.pooler {
                    Pooler::File { basis, .. } => basis.len(),
                    Pooler::Builtin(_) => self.length.unwrap_or(seq.len()),
                };
                let seq = pooling::sample_regular(seq, len)?;
                let span = WindowSpan { start: 0, end: len };
                let group = match &self.pooler {
                    Pooler::Builtin(Builtin::Max) => vec![pooling::pool_max(&seq)],
                    Pooler::Builtin(kind) => self.select(&seq, &self.builtin_basis(*kind, len)?)?,
                    Pooler::File { basis, .. } => self.select(&seq, basis)?,
                };
                vec![group.into_iter().map(|d| d.with_window(span)).collect()]
            }
        };
        groups
            .into_iter()
            .map(|group| {
                let group: Vec<PooledDescriptor> = if self.normalize {
                    group.iter().map(pooling::l2_normalize).collect()
                } else {
                    group
                };
                if self.concat {
                    Ok(vec![pooling::concat(&group)?])
                } else {
                    Ok(group)
                }
            })
            .collect()
    }

    fn select(&self, seq: &FeatureSequence, basis: &BasisSet) -> Result<Vec<PooledDescriptor>> {
        self.indices
            .iter()
            .map(|&j| Ok(pooling::pool(seq, basis, j)?))
            .collect()
    }

    fn pool_windows(
        &self,
        seq: &FeatureSequence,
        window: usize,
    ) -> Result<Vec<Vec<PooledDescriptor>>> {
        let basis = match &self.pooler {
            Pooler::Builtin(Builtin::Max) => {
                return pooling::window_starts(seq.len(), window, self.stride)
                    .into_iter()
                    .map(|start| {
                        let end = (start + window).min(seq.len());
                        let idx: Vec<usize> = (start..end).collect();
                        let chunk = pooling::sample_regular(&seq.select_time_steps(&idx)?, window)?;
                        Ok(vec![
                            pooling::pool_max(&chunk).with_window(WindowSpan { start, end })
                        ])
                    })
                    .collect();
            }
            Pooler::Builtin(kind) => self.builtin_basis(*kind, window)?,
            Pooler::File { basis, .. } => basis.clone(),
        };
        let sets = pooling::local_pool(seq, &basis, window, self.stride)?;
        Ok(sets
            .into_iter()
            .map(|set| self.indices.iter().map(|&j| set[j - 1].clone()).collect())
            .collect())
    }
}

#[derive(Serialize)]
struct Row<'a> {
    input: String,
    row: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    values: Option<&'a [f64]>,
    provenance: &'a Provenance,
}

fn rows_json(inputs: &[(PathBuf, PooledDescriptor)], with_values: bool) -> Vec<Row<'_>> {
    inputs
        .iter()
        .enumerate()
        .map(|(row, (path, d))| Row {
            input: path.display().to_string(),
            row,
            values: with_values.then_some(d.values.as_slice()),
            provenance: &d.provenance,
        })
        .collect()
}

pub fn run(args: PoolArgs, format: Format) -> Result<()> {
    let plan = plan(&args)?;
    let inputs = gather_inputs(args.manifest.as_deref(), &args.inputs)?;
    if inputs.is_empty() {
        return Err(usage("no input sequences given"));
    }
    let per_input = load_all(&inputs, |path: &Path, seq| {
        plan.pool(&seq)
            .map_err(|e| anyhow!("{}: {e:#}", path.display()))
    })?;
    let rows: Vec<(PathBuf, PooledDescriptor)> = inputs
        .iter()
        .zip(per_input)
        .flat_map(|(path, groups)| groups.into_iter().flatten().map(move |d| (path.clone(), d)))
        .collect();

    let bytes = match format {
        Format::Csv => {
            let values: Vec<&[f64]> = rows.iter().map(|(_, d)| d.values.as_slice()).collect();
            formats::rows_to_csv(&values).into_bytes()
        }
        Format::Json => formats::to_json_bytes(&rows_json(&rows, true))?,
        Format::Eepb => {
            let steps: Vec<&[f64]> = rows.iter().map(|(_, d)| d.values.as_slice()).collect();
            let seq = FeatureSequence::from_time_steps(&steps)
                .map_err(|e| anyhow!("descriptors cannot be stacked into one EEPB file: {e}"))?;
            formats::encode_eepb(&seq)
        }
    };
    write_file(&args.out, &bytes)?;
    if let Some(path) = &args.provenance {
        write_file(path, &formats::to_json_bytes(&rows_json(&rows, false))?)?;
    }
    Ok(())
}
