//! Binary layout of a [`SensorBasis`], all little-endian:
//!
//! ```text
//! "OSPB"            4 bytes
//! version           u16
//! m, r, s           u32 each
//! modes             m·r f64, row-major
//! sensor_indices    s u32, selection order
//! theta_pinv        r·s f64, row-major
//! ```

use crate::error::{Error, Result};
use crate::linalg::DataMatrix;

use super::SensorBasis;

pub const BASIS_MAGIC: &[u8; 4] = b"OSPB";
pub const BASIS_VERSION: u16 = 1;
const HEADER_LEN: usize = 4 + 2 + 3 * 4;

impl SensorBasis {
    pub fn encoded_len(&self) -> usize {
        HEADER_LEN + 8 * self.m() * self.r() + 4 * self.s() + 8 * self.r() * self.s()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.encoded_len());
        out.extend_from_slice(BASIS_MAGIC);
        out.extend_from_slice(&BASIS_VERSION.to_le_bytes());
        for dim in [self.m(), self.r(), self.s()] {
            out.extend_from_slice(&(dim as u32).to_le_bytes());
        }
        for v in self.modes().as_slice() {
            out.extend_from_slice(&v.to_le_bytes());
        }
        for &i in self.sensor_indices() {
            out.extend_from_slice(&(i as u32).to_le_bytes());
        }
        for v in self.theta_pinv().as_slice() {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = |reason: String| Error::Format {
            kind: "sensor basis",
            reason,
        };
        if bytes.len() < HEADER_LEN {
            return Err(bad(format!("{} bytes is shorter than the header", bytes.len())));
        }
        if &bytes[..4] != BASIS_MAGIC {
            return Err(bad("bad magic".into()));
        }
        let version = u16::from_le_bytes([bytes[4], bytes[5]]);
        if version != BASIS_VERSION {
            return Err(bad(format!("unsupported version {version}")));
        }
        let dim = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap()) as usize;
        let (m, r, s) = (dim(6), dim(10), dim(14));
        let expected = HEADER_LEN + 8 * m * r + 4 * s + 8 * r * s;
        if bytes.len() != expected {
            return Err(bad(format!("expected {expected} bytes, found {}", bytes.len())));
        }
        if m == 0 || r == 0 || s < r {
            return Err(bad(format!("invalid dimensions m={m} r={r} s={s}")));
        }
        let mut at = HEADER_LEN;
        let mut f64s = |count: usize| {
            let vals: Vec<f64> = bytes[at..at + 8 * count]
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
                .collect();
            at += 8 * count;
            vals
        };
        let modes = f64s(m * r);
        let idx_start = HEADER_LEN + 8 * m * r;
        let indices: Vec<usize> = bytes[idx_start..idx_start + 4 * s]
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes(c.try_into().unwrap()) as usize)
            .collect();
        let pinv_start = idx_start + 4 * s;
        let theta_pinv: Vec<f64> = bytes[pinv_start..]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        if indices.iter().any(|&i| i >= m) {
            return Err(bad("sensor index out of range".into()));
        }
        let modes = DataMatrix::new(m, r, modes).map_err(|e| bad(e.to_string()))?;
        let theta_pinv = DataMatrix::new(r, s, theta_pinv).map_err(|e| bad(e.to_string()))?;
        Ok(SensorBasis::from_raw(modes, indices, theta_pinv))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::osp::fit_basis;

    #[test]
    fn round_trip_is_bit_exact() {
        let x = DataMatrix::from_fn(15, 9, |i, j| ((i * 3 + j * 5) % 7) as f64 + (i as f64 * 0.37).sin() * j as f64);
        let basis = fit_basis(&x, 3, 5).unwrap();
        let bytes = basis.to_bytes();
        assert_eq!(bytes.len(), basis.encoded_len());
        let back = SensorBasis::from_bytes(&bytes).unwrap();
        assert_eq!(back, basis);
        assert_eq!(back.to_bytes(), bytes);
    }

    #[test]
    fn rejects_truncated_and_bad_magic() {
        let x = DataMatrix::from_fn(6, 4, |i, j| (i + j * j) as f64);
        let bytes = fit_basis(&x, 2, 2).unwrap().to_bytes();
        assert!(SensorBasis::from_bytes(&bytes[..bytes.len() - 1]).is_err());
        let mut wrong = bytes.clone();
        wrong[0] = b'X';
        assert!(SensorBasis::from_bytes(&wrong).is_err());
    }
}
