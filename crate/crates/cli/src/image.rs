use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use clap::{Args, ValueEnum};
use eep::image::{self as img, PooledImage, GLOBAL_EIGEN_FRAMES};
use eep::pooling::DEFAULT_STRIDE;
use eep::{formats, ppm, BasisSet, FrameSequence};

use crate::io::{parse_indices, write_file};
use crate::usage;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ImageMethod {
    /// Learned basis from `--basis`.
    Eigen,
    /// DCT-II basis functions.
    Dct,
    /// Rank-pooling weights.
    Dynamic,
    /// Temporal average.
    Mean,
}

#[derive(Args, Debug)]
pub struct ImageArgs {
    /// Directory of PPM frames, read in file-name order.
    #[arg(long)]
    frames: PathBuf,

    #[arg(long, value_enum)]
    method: ImageMethod,

    /// Basis JSON for `--method eigen`.
    #[arg(long)]
    basis: Option<PathBuf>,

    /// 1-based basis indices, e.g. `1-3`.
    #[arg(long)]
    indices: Option<String>,

    /// Frames sampled for a global DCT image.
    #[arg(long = "length", short = 'L', default_value_t = GLOBAL_EIGEN_FRAMES)]
    length: usize,

    /// Pool within sliding windows of this many frames.
    #[arg(long, conflicts_with = "global")]
    window: Option<usize>,

    #[arg(long, default_value_t = DEFAULT_STRIDE)]
    stride: usize,

    /// Pool over the whole clip (the default).
    #[arg(long)]
    global: bool,

    /// Also write the float image before rescaling, as EEPB (d = W·H·3, T = 1).
    #[arg(long)]
    raw: bool,

    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

fn indices_for(args: &ImageArgs, available: Option<usize>) -> Result<Vec<usize>> {
    let indices = match &args.indices {
        Some(spec) => parse_indices(spec).map_err(usage)?,
        None => match (args.method, available) {
            (ImageMethod::Eigen, Some(k)) => (1..=k).collect(),
            _ => vec![1],
        },
    };
    match args.method {
        ImageMethod::Dynamic | ImageMethod::Mean if indices != [1] => Err(usage(
            "dynamic and mean images have a single weight function (index 1)",
        )),
        _ => {
            if let (Some(k), Some(&j)) = (available, indices.iter().find(|&&j| Some(j) > available))
            {
                return Err(usage(format!(
                    "index {j} exceeds the {k} functions in the basis"
                )));
            }
            Ok(indices)
        }
    }
}

fn basis_for(args: &ImageArgs, len: usize, indices: &[usize]) -> Result<BasisSet> {
    let k = indices.iter().copied().max().unwrap_or(1);
    match args.method {
        ImageMethod::Dct => {
            if k > len {
                return Err(usage(format!(
                    "dct index {k} exceeds the pooled length {len}"
                )));
            }
            Ok(BasisSet::dct(len, k)?)
        }
        ImageMethod::Dynamic => Ok(BasisSet::rank(len)?),
        ImageMethod::Mean => Ok(BasisSet::mean(len)?),
        ImageMethod::Eigen => unreachable!("eigen bases come from --basis"),
    }
}

/// `(window start, basis index, image)` for every output.
fn render(args: &ImageArgs, frames: &FrameSequence) -> Result<Vec<(usize, usize, PooledImage)>> {
    let file_basis = match (args.method, &args.basis) {
        (ImageMethod::Eigen, Some(path)) => Some((BasisSet::load(path)?, path)),
        (ImageMethod::Eigen, None) => return Err(usage("--method eigen needs --basis")),
        (_, Some(_)) => return Err(usage("--basis is only used with --method eigen")),
        (_, None) => None,
    };
    let indices = indices_for(args, file_basis.as_ref().map(|(b, _)| b.count()))?;

    if let Some(window) = args.window {
        if window < 2 || args.stride == 0 {
            return Err(usage("--window must be >= 2 and --stride >= 1"));
        }
        let basis = match &file_basis {
            Some((b, path)) => {
                if b.len() != window {
                    return Err(anyhow!(
                        "{}: basis has L = {} but --window is {window}",
                        path.display(),
                        b.len()
                    ));
                }
                b.clone()
            }
            None => basis_for(args, window, &indices)?,
        };
        let sets = img::local_images(frames, &basis, window, args.stride)?;
        let mut out = Vec::new();
        for set in sets {
            for &j in &indices {
                let image = set[j - 1].clone();
                let start = image.provenance.window.map_or(0, |w| w.start);
                out.push((start, j, image));
            }
        }
        return Ok(out);
    }

    let images = match args.method {
        ImageMethod::Dynamic => vec![(1, img::dynamic_image(frames)?)],
        ImageMethod::Eigen => {
            let (basis, _) = file_basis.as_ref().expect("checked above");
            indices
                .iter()
                .map(|&j| Ok((j, img::eigen_image(frames, basis, j)?)))
                .collect::<Result<_>>()?
        }
        ImageMethod::Dct => {
            if args.length == 0 {
                return Err(usage("--length must be at least 1"));
            }
            let basis = basis_for(args, args.length, &indices)?;
            indices
                .iter()
                .map(|&j| Ok((j, img::eigen_image(frames, &basis, j)?)))
                .collect::<Result<_>>()?
        }
        ImageMethod::Mean => {
            let basis = basis_for(args, frames.len(), &indices)?;
            vec![(1, img::eigen_image(frames, &basis, 1)?)]
        }
    };
    Ok(images.into_iter().map(|(j, image)| (0, j, image)).collect())
}

fn stem(dir: &Path) -> String {
    dir.canonicalize()
        .ok()
        .and_then(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
        .unwrap_or_else(|| "frames".into())
}

pub fn run(args: ImageArgs) -> Result<()> {
    let frames = FrameSequence::from_dir(&args.frames)?;
    let outputs = render(&args, &frames)?;
    std::fs::create_dir_all(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    let stem = stem(&args.frames);
    for (start, j, image) in &outputs {
        let name = format!("{stem}_w{start}_b{j}");
        let frame = img::rescale_to_u8(image);
        write_file(
            &args.out.join(format!("{name}.ppm")),
            &ppm::encode_ppm(&frame),
        )?;
        if args.raw {
            write_file(
                &args.out.join(format!("{name}.eepb")),
                &formats::encode_eepb(&image.to_sequence()),
            )?;
        }
        println!("{name}.ppm  {}", image.tag());
    }
    Ok(())
}
