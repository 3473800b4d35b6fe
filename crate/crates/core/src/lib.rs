// `!(x > 0.0)` guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod decompose;
pub mod error;
pub mod forecast;
pub mod linalg;
pub mod osp;
pub mod pipeline;
pub mod rng;
pub mod synth;

pub use error::{Error, Result};
pub use linalg::DataMatrix;
