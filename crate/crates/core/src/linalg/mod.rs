//! Dense linear-algebra kernels: matrix storage, SVD, pivoted QR,
//! pseudoinverse and the proximal operators used by the RPCA solver.

mod matrix;
mod pinv;
mod prox;
mod qr;
mod svd;

pub use matrix::{axpy, dot, norm2, DataMatrix};
pub use pinv::{pseudoinverse, pseudoinverse_with, DEFAULT_RCOND};
pub use prox::{singular_value_threshold, soft_threshold, soft_threshold_matrix};
pub use qr::{qr_column_pivot, PivotedQr, PIVOT_TIE_TOL};
pub use svd::{spectral_norm, svd_thin, svd_truncated, SvdFactors};

pub(crate) use prox::shrink_factors;
pub(crate) use svd::{jacobi_svd, subspace_svd, SubspaceOptions, DENSE_LIMIT};
