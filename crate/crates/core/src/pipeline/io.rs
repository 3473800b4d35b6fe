//! File formats and atomic output.
//!
//! Matrices are stored as `RBDM`, all little-endian:
//!
//! ```text
//! "RBDM"        4 bytes
//! version       u16
//! flags         u16, zero
//! rows, cols    u32 each
//! values        rows·cols f64, row-major
//! ```
//!
//! CSV matrices start with a `rows,cols` line holding the two dimensions,
//! then one matrix row per line at 17 significant digits.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::DataMatrix;

pub const MATRIX_MAGIC: &[u8; 4] = b"RBDM";
pub const MATRIX_VERSION: u16 = 1;
pub const MATRIX_HEADER_LEN: usize = 16;

pub fn encode_matrix(a: &DataMatrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(MATRIX_HEADER_LEN + 8 * a.as_slice().len());
    out.extend_from_slice(MATRIX_MAGIC);
    out.extend_from_slice(&MATRIX_VERSION.to_le_bytes());
    out.extend_from_slice(&0u16.to_le_bytes());
    out.extend_from_slice(&(a.rows() as u32).to_le_bytes());
    out.extend_from_slice(&(a.cols() as u32).to_le_bytes());
    for v in a.as_slice() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

/// Decodes a matrix without checking finiteness; consumers validate.
pub fn decode_matrix(bytes: &[u8]) -> Result<DataMatrix> {
    let bad = |reason: String| Error::Format { kind: "RBDM matrix", reason };
    if bytes.len() < MATRIX_HEADER_LEN {
        return Err(bad(format!("{} bytes is shorter than the header", bytes.len())));
    }
    if &bytes[..4] != MATRIX_MAGIC {
        return Err(bad("bad magic".into()));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != MATRIX_VERSION {
        return Err(bad(format!("unsupported version {version}")));
    }
    let flags = u16::from_le_bytes([bytes[6], bytes[7]]);
    if flags != 0 {
        return Err(bad(format!("unknown flags {flags:#06x}")));
    }
    let rows = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let cols = u32::from_le_bytes(bytes[12..16].try_into().unwrap()) as usize;
    if rows == 0 || cols == 0 {
        return Err(bad(format!("empty shape {rows}x{cols}")));
    }
    let expected = MATRIX_HEADER_LEN + 8 * rows * cols;
    if bytes.len() != expected {
        return Err(bad(format!("expected {expected} bytes, found {}", bytes.len())));
    }
    let values = bytes[MATRIX_HEADER_LEN..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(DataMatrix::from_vec(rows, cols, values))
}

pub fn matrix_to_csv(a: &DataMatrix) -> String {
    let mut out = format!("{},{}\n", a.rows(), a.cols());
    for i in 0..a.rows() {
        let line: Vec<String> = a.row(i).iter().map(|v| format!("{v:.16e}")).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn matrix_from_csv(text: &str) -> Result<DataMatrix> {
    let bad = |reason: String| Error::Format { kind: "CSV matrix", reason };
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| bad("empty file".into()))?;
    let dims: Vec<usize> = header
        .split(',')
        .map(|f| f.trim().parse().map_err(|_| bad(format!("bad header {header:?}"))))
        .collect::<Result<_>>()?;
    let [rows, cols] = dims[..] else {
        return Err(bad(format!("header needs rows,cols, got {header:?}")));
    };
    let mut values = Vec::with_capacity(rows * cols);
    for (k, line) in lines.enumerate() {
        let before = values.len();
        for field in line.split(',') {
            let v: f64 = field
                .trim()
                .parse()
                .map_err(|_| bad(format!("line {}: cannot parse {field:?}", k + 2)))?;
            values.push(v);
        }
        if values.len() - before != cols {
            return Err(bad(format!("line {} has {} fields, expected {cols}", k + 2, values.len() - before)));
        }
    }
    if values.len() != rows * cols || rows == 0 || cols == 0 {
        return Err(bad(format!("expected {rows}x{cols} values, found {}", values.len())));
    }
    Ok(DataMatrix::from_vec(rows, cols, values))
}

/// 8-bit binary PGM of a frame stored row-major, scaled so the frame's
/// minimum maps to 0 and its maximum to 255. A constant frame is all zeros.
pub fn frame_to_pgm(values: &[f64], width: usize, height: usize) -> Result<Vec<u8>> {
    if width * height != values.len() || width == 0 {
        return Err(Error::validation(format!(
            "{} values do not fill a {width}x{height} frame",
            values.len()
        )));
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend(values.iter().map(|&v| {
        if span > 0.0 {
            (255.0 * (v - lo) / span).round() as u8
        } else {
            0
        }
    }));
    Ok(out)
}

/// Frame width for `m` pixels: the smallest divisor of `m` at least as wide
/// as a 4:3 frame would be.
pub fn auto_frame_width(m: usize) -> usize {
    let ideal = (4.0 * m as f64 / 3.0).sqrt();
    (1..=m).find(|&w| m.is_multiple_of(w) && w as f64 >= ideal - 1e-9).unwrap_or(m)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::io(path, e))
}

/// Reads `.csv` as CSV and anything else as RBDM.
pub fn read_matrix(path: &Path) -> Result<DataMatrix> {
    let bytes = read_bytes(path)?;
    if path.extension().is_some_and(|e| e == "csv") {
        let text = String::from_utf8(bytes).map_err(|_| Error::Format {
            kind: "CSV matrix",
            reason: "not UTF-8".into(),
        })?;
        matrix_from_csv(&text)
    } else {
        decode_matrix(&bytes)
    }
}

/// Output files of one stage, written to temporaries and renamed into
/// place only once every write succeeded.
#[derive(Default)]
pub struct Staging {
    files: Vec<(PathBuf, Vec<u8>)>,
}

impl Staging {
    pub fn add(&mut self, path: impl Into<PathBuf>, bytes: Vec<u8>) {
        self.files.push((path.into(), bytes));
    }

    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        self.files.iter().map(|(p, _)| p.as_path())
    }

    pub fn commit(self) -> Result<()> {
        let mut temps: Vec<(PathBuf, &Path)> = Vec::with_capacity(self.files.len());
        let result = (|| {
            for (path, bytes) in &self.files {
                if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
                }
                let mut name = path.file_name().unwrap_or_default().to_os_string();
                name.push(format!(".tmp{}", std::process::id()));
                let tmp = path.with_file_name(name);
                fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
                temps.push((tmp, path));
            }
            Ok(())
        })();
        if let Err(e) = result {
            for (tmp, _) in &temps {
                let _ = fs::remove_file(tmp);
            }
            return Err(e);
        }
        for (tmp, path) in &temps {
            fs::rename(tmp, path).map_err(|e| Error::io(*path, e))?;
        }
        Ok(())
    }
}
