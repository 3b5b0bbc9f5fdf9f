use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use eep::{formats, FeatureSequence, FrameSequence};
use rayon::prelude::*;

/// Reads a sequence file (CSV or EEPB) or a directory of PPM frames.
pub fn load_sequence(path: &Path) -> Result<FeatureSequence> {
    if path.is_dir() {
        Ok(FrameSequence::from_dir(path)?.to_sequence())
    } else {
        Ok(formats::read_sequence(path)?)
    }
}

/// Loads and transforms every entry in parallel; results keep input order.
pub fn load_all<T, F>(paths: &[PathBuf], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&Path, FeatureSequence) -> Result<T> + Sync,
{
    paths
        .par_iter()
        .map(|p| {
            let seq = load_sequence(p).with_context(|| format!("reading {}", p.display()))?;
            f(p, seq)
        })
        .collect()
}

/// Manifest entries followed by any explicit inputs.
pub fn gather_inputs(manifest: Option<&Path>, inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut all = match manifest {
        Some(m) => formats::read_manifest(m)?,
        None => Vec::new(),
    };
    all.extend(inputs.iter().cloned());
    Ok(all)
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    formats::write_atomic(path, bytes).with_context(|| format!("writing {}", path.display()))
}

/// Parses `3`, `1,2,5` or `1-3` into 1-based indices.
pub fn parse_indices(spec: &str) -> std::result::Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for piece in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let parse = |s: &str| match s.trim().parse::<usize>() {
            Ok(j) if j >= 1 => Ok(j),
            _ => Err(format!("`{s}` is not a basis index (indices start at 1)")),
        };
        match piece.split_once('-') {
            Some((a, b)) => {
                let (a, b) = (parse(a)?, parse(b)?);
                if a > b {
                    return Err(format!("empty index range `{piece}`"));
                }
                out.extend(a..=b);
            }
            None => out.push(parse(piece)?),
        }
    }
    if out.is_empty() {
        return Err("no indices given".into());
    }
    Ok(out)
}
