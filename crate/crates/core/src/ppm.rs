//! Minimal PPM (P3/P6, maxval 255) codec for RGB frames.

use std::path::Path;

use crate::error::{Error, Result};

/// 8-bit RGB image, row-major with interleaved channels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub width: usize,
    pub height: usize,
    pub data: Vec<u8>,
}

impl Frame {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::shape("frame dimensions must be nonzero"));
        }
        if data.len() != width * height * 3 {
            return Err(Error::shape(format!(
                "{} bytes cannot fill a {width}x{height} RGB frame",
                data.len()
            )));
        }
        Ok(Frame {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, rgb: [u8; 3]) -> Self {
        Frame {
            width,
            height,
            data: rgb
                .iter()
                .copied()
                .cycle()
                .take(width * height * 3)
                .collect(),
        }
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self) -> Option<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()?
            .parse()
            .ok()
    }
}

pub fn decode_ppm(bytes: &[u8], origin: &Path) -> Result<Frame> {
    let bad = |msg: &str| Error::format(origin, format!("malformed PPM: {msg}"));
    let binary = match bytes.get(..2) {
        Some(b"P6") => true,
        Some(b"P3") => false,
        _ => return Err(bad("expected P3 or P6 magic")),
    };
    let mut cur = Cursor { bytes, pos: 2 };
    let width = cur.number().ok_or_else(|| bad("missing width"))?;
    let height = cur.number().ok_or_else(|| bad("missing height"))?;
    let maxval = cur.number().ok_or_else(|| bad("missing maxval"))?;
    if width == 0 || height == 0 {
        return Err(bad("zero dimension"));
    }
    if maxval != 255 {
        return Err(bad(&format!("maxval {maxval} unsupported, expected 255")));
    }
    let n = width * height * 3;
    let data = if binary {
        if !cur.bytes.get(cur.pos).is_some_and(u8::is_ascii_whitespace) {
            return Err(bad("missing separator before raster"));
        }
        let start = cur.pos + 1;
        bytes
            .get(start..start + n)
            .ok_or_else(|| bad("truncated raster"))?
            .to_vec()
    } else {
        let mut data = Vec::with_capacity(n);
        for _ in 0..n {
            let v = cur.number().ok_or_else(|| bad("truncated raster"))?;
            data.push(u8::try_from(v).map_err(|_| bad("sample exceeds maxval"))?);
        }
        data
    };
    Frame::new(width, height, data)
}

pub fn encode_ppm(frame: &Frame) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", frame.width, frame.height).into_bytes();
    out.extend_from_slice(&frame.data);
    out
}

pub fn read_ppm(path: &Path) -> Result<Frame> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_ppm(&bytes, path)
}
