//! Binary layout of an [`LstmModel`], all little-endian:
//!
//! ```text
//! "LSTM"                        4 bytes
//! version                       u16
//! input, hidden, dense, output  u32 each
//! dropout                       f64
//! norm_mean, norm_std           input f64 each
//! parameters                    f64, in ParamLayout order:
//!                               W_x, W_h, b, W_d, b_d, W_o, b_o
//! ```
//!
//! Window and horizon belong to the training configuration and optimizer
//! moments are not kept.

use super::model::{LstmDims, LstmModel};
use crate::error::{Error, Result};

pub const MODEL_MAGIC: &[u8; 4] = b"LSTM";
pub const MODEL_VERSION: u16 = 1;
const HEADER_LEN: usize = 4 + 2 + 4 * 4 + 8;

impl LstmModel {
    pub fn encoded_len(&self) -> usize {
        HEADER_LEN + 8 * (2 * self.dims().input + self.params().len())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let d = self.dims();
        let mut out = Vec::with_capacity(self.encoded_len());
        out.extend_from_slice(MODEL_MAGIC);
        out.extend_from_slice(&MODEL_VERSION.to_le_bytes());
        for dim in [d.input, d.hidden, d.dense, d.output] {
            out.extend_from_slice(&(dim as u32).to_le_bytes());
        }
        out.extend_from_slice(&self.dropout().to_le_bytes());
        for v in self.norm_mean().iter().chain(self.norm_std()).chain(self.params()) {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = |reason: String| Error::Format {
            kind: "LSTM model",
            reason,
        };
        if bytes.len() < HEADER_LEN {
            return Err(bad(format!("{} bytes is shorter than the header", bytes.len())));
        }
        if &bytes[..4] != MODEL_MAGIC {
            return Err(bad("bad magic".into()));
        }
        let version = u16::from_le_bytes([bytes[4], bytes[5]]);
        if version != MODEL_VERSION {
            return Err(bad(format!("unsupported version {version}")));
        }
        let dim = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap()) as usize;
        let dims = LstmDims {
            input: dim(6),
            hidden: dim(10),
            dense: dim(14),
            output: dim(18),
        };
        dims.validate().map_err(|e| bad(e.to_string()))?;
        let dropout = f64::from_le_bytes(bytes[22..30].try_into().unwrap());
        let expected = HEADER_LEN + 8 * (2 * dims.input + dims.param_count());
        if bytes.len() != expected {
            return Err(bad(format!("expected {expected} bytes, found {}", bytes.len())));
        }
        let mut floats = bytes[HEADER_LEN..]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()));
        let mean: Vec<f64> = floats.by_ref().take(dims.input).collect();
        let std: Vec<f64> = floats.by_ref().take(dims.input).collect();
        let params: Vec<f64> = floats.collect();
        LstmModel::from_parts(dims, dropout, mean, std, params).map_err(|e| bad(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let dims = LstmDims { input: 3, hidden: 5, dense: 4, output: 3 };
        let mut m = LstmModel::init(dims, 0.2, 77).unwrap();
        m.set_normalization(vec![0.1, 2.0, -3.0], vec![1.5, 0.25, 9.0]).unwrap();
        let bytes = m.to_bytes();
        assert_eq!(bytes.len(), m.encoded_len());
        let back = LstmModel::from_bytes(&bytes).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.to_bytes(), bytes);
    }

    #[test]
    fn rejects_damage() {
        let m = LstmModel::init(LstmDims { input: 1, hidden: 2, dense: 2, output: 1 }, 0.0, 1).unwrap();
        let bytes = m.to_bytes();
        assert!(LstmModel::from_bytes(&bytes[..bytes.len() - 8]).is_err());
        let mut wrong = bytes.clone();
        wrong[3] = b'X';
        assert!(LstmModel::from_bytes(&wrong).is_err());
        let mut nan = bytes;
        let len = nan.len();
        nan[len - 8..].copy_from_slice(&f64::NAN.to_le_bytes());
        assert!(LstmModel::from_bytes(&nan).is_err());
    }
}
