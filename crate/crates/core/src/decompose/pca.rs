use crate::error::{check_range, Result};
use crate::linalg::{svd_truncated, DataMatrix};

/// Best rank-`r` approximation of the column-centred data with the column
/// means added back.
///
/// The Frobenius error equals the tail singular-value energy of the centred
/// matrix.
pub fn pca_reconstruct(x: &DataMatrix, r: usize) -> Result<DataMatrix> {
    check_range("rank", r, 1, x.min_dim())?;
    x.ensure_finite()?;
    let means = x.column_means();
    let centred = DataMatrix::from_fn(x.rows(), x.cols(), |i, j| x[(i, j)] - means[j]);
    if centred.is_zero() {
        return Ok(x.clone());
    }
    let approx = svd_truncated(&centred, r)?.reconstruct();
    Ok(DataMatrix::from_fn(x.rows(), x.cols(), |i, j| approx[(i, j)] + means[j]))
}
