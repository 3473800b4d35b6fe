//! Low-rank reconstruction: plain PCA and robust PCA by principal component
//! pursuit.

mod pca;
mod rpca;

pub use pca::pca_reconstruct;
pub use rpca::{clean, rpca, Multipliers, Param, Penalty, RpcaConfig, RpcaResult};
