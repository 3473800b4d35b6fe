use crate::error::{Error, Result};

use super::matrix::DataMatrix;
use super::svd::{ensure_nonzero, jacobi_svd};

/// Singular values below `rcond · σ_max` are treated as zero.
pub const DEFAULT_RCOND: f64 = 1e-12;

/// Moore–Penrose pseudoinverse via the SVD.
pub fn pseudoinverse(a: &DataMatrix) -> Result<DataMatrix> {
    pseudoinverse_with(a, DEFAULT_RCOND)
}

pub fn pseudoinverse_with(a: &DataMatrix, rcond: f64) -> Result<DataMatrix> {
    if !(rcond >= 0.0) {
        return Err(Error::validation(format!("rcond must be >= 0, got {rcond}")));
    }
    a.ensure_finite()?;
    ensure_nonzero(a, "pseudoinverse")?;
    let f = jacobi_svd(a, None);
    let cutoff = rcond * f.singular_values[0];
    let inv: Vec<f64> = f
        .singular_values
        .iter()
        .map(|&s| if s > cutoff && s > 0.0 { 1.0 / s } else { 0.0 })
        .collect();
    // A† = V Σ⁺ Uᵀ
    let mut v_scaled = f.v.clone();
    for i in 0..v_scaled.rows() {
        for (x, w) in v_scaled.row_mut(i).iter_mut().zip(&inv) {
            *x *= w;
        }
    }
    Ok(v_scaled.matmul_t(&f.u))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_inverse() {
        let p = pseudoinverse(&DataMatrix::diag(&[2.0, 4.0])).unwrap();
        assert!(p.sub(&DataMatrix::diag(&[0.5, 0.25])).max_abs() < 1e-15);
    }

    #[test]
    fn isometry_pinv_is_transpose() {
        let s = 1.0 / 2f64.sqrt();
        let theta = DataMatrix::from_rows(&[vec![s, 0.0], vec![s, 0.0], vec![0.0, 1.0]]).unwrap();
        let p = pseudoinverse(&theta).unwrap();
        assert!(p.sub(&theta.transpose()).max_abs() < 1e-10);
    }

    #[test]
    fn rank_deficient_drops_null_directions() {
        let a = DataMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let p = pseudoinverse(&a).unwrap();
        assert!(p.sub(&DataMatrix::from_rows(&[vec![0.25, 0.25], vec![0.25, 0.25]]).unwrap()).max_abs() < 1e-14);
    }

    #[test]
    fn zero_matrix_is_degenerate() {
        assert!(pseudoinverse(&DataMatrix::zeros(2, 3)).is_err());
    }
}
