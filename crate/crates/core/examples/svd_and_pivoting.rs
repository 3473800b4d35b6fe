//! Thin SVD, pivoted QR and pseudoinverse on small matrices.

use sparsesense::linalg::{pseudoinverse, qr_column_pivot, svd_thin, svd_truncated};
use sparsesense::DataMatrix;

fn main() -> sparsesense::Result<()> {
    let a = DataMatrix::from_rows(&[
        vec![2.0, 0.0, 1.0, -1.0],
        vec![0.0, 3.0, 1.0, 0.5],
        vec![1.0, 1.0, 4.0, 0.0],
        vec![-1.0, 0.5, 0.0, 1.0],
        vec![0.5, -2.0, 1.0, 2.0],
    ])?;

    let svd = svd_thin(&a)?;
    println!("singular values {:.6?}", svd.singular_values);
    let err = svd.reconstruct().sub(&a).frobenius_norm();
    println!("||U S V^T - A|| = {err:.2e}");

    // best rank-2 approximation
    let top = svd_truncated(&a, 2)?;
    let tail: f64 = svd.singular_values[2..].iter().map(|s| s * s).sum::<f64>().sqrt();
    let err2 = top.reconstruct().sub(&a).frobenius_norm();
    println!("rank-2 error {err2:.6} vs tail energy {tail:.6}");

    // greedy column order, largest residual first
    let qr = qr_column_pivot(&a)?;
    println!("pivots {:?}  |R_kk| {:.4?}", qr.pivots, qr.r_diagonal.iter().map(|v| v.abs()).collect::<Vec<_>>());

    let p = pseudoinverse(&a)?;
    let check = a.matmul(&p).matmul(&a).sub(&a).max_abs();
    println!("pinv is {}x{}, max |A A+ A - A| = {check:.2e}", p.rows(), p.cols());
    Ok(())
}
