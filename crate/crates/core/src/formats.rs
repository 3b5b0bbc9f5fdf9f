//! On-disk formats: sequence CSV, the EEPB binary sequence format, manifests,
//! descriptor CSV, and JSON with fixed 17-significant-digit floats.
//!
//! EEPB layout: the magic bytes `EEPB`, little-endian `u32` d, little-endian
//! `u32` T, then T·d little-endian `f64` values in time-major order (all
//! features of step 0, then step 1, ...).

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::sequence::FeatureSequence;

pub const EEPB_MAGIC: &[u8; 4] = b"EEPB";

/// Formats a float with 17 significant digits, enough to round-trip any `f64`.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

struct SigDigitsFormatter;

impl serde_json::ser::Formatter for SigDigitsFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Serializes to compact JSON with every float written as [`format_f64`] does,
/// followed by a newline.
pub fn to_json_bytes<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigDigitsFormatter);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(buf)
}

pub fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

/// Parses sequence CSV: one row per time step, one column per feature.
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_sequence_csv(text: &str, origin: &Path) -> Result<FeatureSequence> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut steps: Vec<Vec<f64>> = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::format(origin, e.to_string()))?;
        let step = record
            .iter()
            .map(|field| {
                field.parse::<f64>().map_err(|_| {
                    Error::format(
                        origin,
                        format!("row {}: `{field}` is not a number", line + 1),
                    )
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        steps.push(step);
    }
    if steps.is_empty() {
        return Err(Error::format(origin, "sequence has no time steps"));
    }
    FeatureSequence::from_time_steps(&steps).map_err(|e| Error::format(origin, e.to_string()))
}

pub fn sequence_to_csv(seq: &FeatureSequence) -> String {
    let mut out = String::new();
    for t in 0..seq.len() {
        let line: Vec<String> = seq.time_step(t).into_iter().map(format_f64).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn encode_eepb(seq: &FeatureSequence) -> Vec<u8> {
    let (d, len) = (seq.dim(), seq.len());
    let mut out = Vec::with_capacity(12 + 8 * d * len);
    out.extend_from_slice(EEPB_MAGIC);
    out.extend_from_slice(&(d as u32).to_le_bytes());
    out.extend_from_slice(&(len as u32).to_le_bytes());
    for t in 0..len {
        for v in seq.time_step(t) {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

pub fn decode_eepb(bytes: &[u8], origin: &Path) -> Result<FeatureSequence> {
    if bytes.len() < 12 || &bytes[..4] != EEPB_MAGIC {
        return Err(Error::format(origin, "missing EEPB header"));
    }
    let d = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let len = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let expected = d
        .checked_mul(len)
        .and_then(|n| n.checked_mul(8))
        .and_then(|n| n.checked_add(12));
    if expected != Some(bytes.len()) {
        return Err(Error::format(
            origin,
            format!(
                "EEPB header declares d = {d}, T = {len} but payload is {} bytes",
                bytes.len() - 12
            ),
        ));
    }
    let mut values = Matrix::zeros(d, len);
    for (n, chunk) in bytes[12..].chunks_exact(8).enumerate() {
        values[(n % d, n / d)] = f64::from_le_bytes(chunk.try_into().unwrap());
    }
    FeatureSequence::new(values).map_err(|e| Error::format(origin, e.to_string()))
}

/// Reads a sequence file, EEPB when the extension is `.eepb`, CSV otherwise.
pub fn read_sequence(path: &Path) -> Result<FeatureSequence> {
    let is_eepb = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("eepb"));
    if is_eepb {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        decode_eepb(&bytes, path)
    } else {
        parse_sequence_csv(&read_to_string(path)?, path)
    }
}

/// Parses a manifest: one path per line, `#` starts a comment. Relative
/// paths are resolved against `base`.
pub fn parse_manifest(text: &str, base: &Path) -> Vec<PathBuf> {
    text.lines()
        .map(|line| line.split('#').next().unwrap_or("").trim())
        .filter(|line| !line.is_empty())
        .map(|line| {
            let p = Path::new(line);
            if p.is_absolute() {
                p.to_path_buf()
            } else {
                base.join(p)
            }
        })
        .collect()
}

/// Reads a manifest, rejecting empty manifests and missing entries.
pub fn read_manifest(path: &Path) -> Result<Vec<PathBuf>> {
    let text = read_to_string(path)?;
    let base = path.parent().unwrap_or(Path::new(""));
    let entries = parse_manifest(&text, base);
    if entries.is_empty() {
        return Err(Error::format(path, "manifest lists no entries"));
    }
    if let Some(missing) = entries.iter().find(|p| !p.exists()) {
        return Err(Error::format(
            path,
            format!("listed path {} does not exist", missing.display()),
        ));
    }
    Ok(entries)
}

/// One comma-separated line per vector.
pub fn rows_to_csv<R: AsRef<[f64]>>(rows: &[R]) -> String {
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row.as_ref().iter().copied().map(format_f64).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}
