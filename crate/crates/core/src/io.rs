//! File formats: the CDICT1 dictionary container, the CIMG1 lossless float
//! image container, and binary 8-bit PGM for display output.

use crate::error::{CscError, Result};
use crate::signal::{Dictionary, Image};
use ndarray::{Array2, Array3};
use std::io::{Read, Write};
use std::path::Path;

const DICT_MAGIC: &[u8; 8] = b"CDICT1\0\0";
const IMG_MAGIC: &[u8; 8] = b"CIMG1\0\0\0";
const FLAG_NORMALIZED: u32 = 1;

// Guards against absurd headers before any allocation.
const MAX_DIM: u32 = 1 << 24;

fn io_err(path: &Path, source: std::io::Error) -> CscError {
    CscError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn format_err(path: &Path, reason: impl Into<String>) -> CscError {
    CscError::Format {
        path: path.display().to_string(),
        reason: reason.into(),
    }
}

fn read_all(path: &Path) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut buf))
        .map_err(|e| io_err(path, e))?;
    Ok(buf)
}

fn write_all(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::File::create(path)
        .and_then(|mut f| f.write_all(bytes))
        .map_err(|e| io_err(path, e))
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
    path: &'a Path,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.bytes.len() {
            return Err(format_err(
                self.path,
                format!(
                    "truncated file: needed {} bytes at offset {}, have {}",
                    n,
                    self.pos,
                    self.bytes.len() - self.pos
                ),
            ));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn dim(&mut self, what: &str) -> Result<usize> {
        let v = self.u32()?;
        if v == 0 || v > MAX_DIM {
            return Err(format_err(self.path, format!("bad {what}: {v}")));
        }
        Ok(v as usize)
    }

    fn f64s(&mut self, n: usize) -> Result<Vec<f64>> {
        let raw = self.take(8 * n)?;
        Ok(raw
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect())
    }

    fn done(&self) -> Result<()> {
        if self.pos != self.bytes.len() {
            return Err(format_err(
                self.path,
                format!("{} trailing bytes", self.bytes.len() - self.pos),
            ));
        }
        Ok(())
    }
}

/// Write a dictionary as CDICT1: magic, u32 LE filter_h / filter_w /
/// num_filters / flags (bit 0 = normalized), then f64 LE values,
/// filter-major, row-major within a filter.
pub fn write_dictionary(path: &Path, d: &Dictionary) -> Result<()> {
    let mut out = Vec::with_capacity(24 + 8 * d.filters().len());
    out.extend_from_slice(DICT_MAGIC);
    out.extend_from_slice(&(d.filter_h() as u32).to_le_bytes());
    out.extend_from_slice(&(d.filter_w() as u32).to_le_bytes());
    out.extend_from_slice(&(d.num_filters() as u32).to_le_bytes());
    let flags = if d.is_normalized() { FLAG_NORMALIZED } else { 0 };
    out.extend_from_slice(&flags.to_le_bytes());
    // Array3 (m, fh, fw) in standard layout is already filter-major
    for &v in d.filters().iter() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    write_all(path, &out)
}

pub fn read_dictionary(path: &Path) -> Result<Dictionary> {
    let bytes = read_all(path)?;
    let mut c = Cursor {
        bytes: &bytes,
        pos: 0,
        path,
    };
    if c.take(8)? != DICT_MAGIC {
        return Err(format_err(path, "bad magic, expected CDICT1"));
    }
    let fh = c.dim("filter_h")?;
    let fw = c.dim("filter_w")?;
    let m = c.dim("num_filters")?;
    let flags = c.u32()?;
    if flags & !FLAG_NORMALIZED != 0 {
        return Err(format_err(path, format!("unknown flag bits {flags:#x}")));
    }
    let vals = c.f64s(m * fh * fw)?;
    c.done()?;
    let filters = Array3::from_shape_vec((m, fh, fw), vals)
        .map_err(|e| format_err(path, e.to_string()))?;
    Dictionary::new(filters, flags & FLAG_NORMALIZED != 0)
        .map_err(|e| format_err(path, e.to_string()))
}

/// Write an image as CIMG1: magic, u32 LE height, width, then f64 LE
/// row-major samples.
pub fn write_image(path: &Path, img: &Image) -> Result<()> {
    let mut out = Vec::with_capacity(16 + 8 * img.data().len());
    out.extend_from_slice(IMG_MAGIC);
    out.extend_from_slice(&(img.height() as u32).to_le_bytes());
    out.extend_from_slice(&(img.width() as u32).to_le_bytes());
    for &v in img.data().iter() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    write_all(path, &out)
}

pub fn read_image(path: &Path) -> Result<Image> {
    let bytes = read_all(path)?;
    let mut c = Cursor {
        bytes: &bytes,
        pos: 0,
        path,
    };
    if c.take(8)? != IMG_MAGIC {
        return Err(format_err(path, "bad magic, expected CIMG1"));
    }
    let h = c.dim("height")?;
    let w = c.dim("width")?;
    let vals = c.f64s(h * w)?;
    c.done()?;
    let data = Array2::from_shape_vec((h, w), vals).map_err(|e| format_err(path, e.to_string()))?;
    Image::new(data).map_err(|e| format_err(path, e.to_string()))
}

/// Write an 8-bit binary PGM (P5, maxval 255); samples are clipped to [0, 1]
/// and quantized with round-half-away.
pub fn write_pgm(path: &Path, img: &Image) -> Result<()> {
    let mut out = Vec::with_capacity(32 + img.data().len());
    out.extend_from_slice(format!("P5\n{} {}\n255\n", img.width(), img.height()).as_bytes());
    for &v in img.data().iter() {
        out.push((v.clamp(0.0, 1.0) * 255.0).round() as u8);
    }
    write_all(path, &out)
}

/// Read an 8-bit binary PGM back into float samples in [0, 1].
pub fn read_pgm(path: &Path) -> Result<Image> {
    let bytes = read_all(path)?;
    let mut pos = 0usize;
    let mut tokens = Vec::new();
    // header: "P5", width, height, maxval, separated by whitespace/comments,
    // then exactly one whitespace byte before the raster
    while tokens.len() < 4 {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos < bytes.len() && bytes[pos] == b'#' {
            while pos < bytes.len() && bytes[pos] != b'\n' {
                pos += 1;
            }
            continue;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() && bytes[pos] != b'#' {
            pos += 1;
        }
        if pos == start {
            return Err(format_err(path, "truncated header"));
        }
        tokens.push(
            std::str::from_utf8(&bytes[start..pos])
                .map_err(|_| format_err(path, "non-ascii header"))?
                .to_string(),
        );
    }
    if tokens[0] != "P5" {
        return Err(format_err(path, format!("expected P5, got {}", tokens[0])));
    }
    let parse = |s: &str, what: &str| -> Result<usize> {
        s.parse::<usize>()
            .ok()
            .filter(|&v| v > 0 && v <= MAX_DIM as usize)
            .ok_or_else(|| format_err(path, format!("bad {what}: {s}")))
    };
    let w = parse(&tokens[1], "width")?;
    let h = parse(&tokens[2], "height")?;
    let maxval = parse(&tokens[3], "maxval")?;
    if maxval != 255 {
        return Err(format_err(path, format!("unsupported maxval {maxval}")));
    }
    pos += 1; // single whitespace after maxval
    if bytes.len() < pos || bytes.len() - pos != h * w {
        return Err(format_err(
            path,
            format!("raster size {} != {}x{}", bytes.len().saturating_sub(pos), h, w),
        ));
    }
    let data: Vec<f64> = bytes[pos..].iter().map(|&b| b as f64 / 255.0).collect();
    let data = Array2::from_shape_vec((h, w), data).map_err(|e| format_err(path, e.to_string()))?;
    Image::new(data).map_err(|e| format_err(path, e.to_string()))
}
