//! Householder QR with Businger–Golub column pivoting.

use crate::error::Result;

use super::matrix::{dot, norm2, DataMatrix};
use super::svd::ensure_nonzero;

/// Relative band inside which two residual norms count as tied; the lower
/// original column index wins a tie.
pub const PIVOT_TIE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct PivotedQr {
    /// Column permutation in selection order, length `n`.
    pub pivots: Vec<usize>,
    /// Diagonal of `R`, length `min(m, n)`; magnitudes are nonincreasing.
    pub r_diagonal: Vec<f64>,
}

/// Greedy column selection: at each step take the column with the largest
/// residual norm after projecting out the columns already chosen.
pub fn qr_column_pivot(a: &DataMatrix) -> Result<PivotedQr> {
    a.ensure_finite()?;
    ensure_nonzero(a, "pivoted QR")?;
    let (m, n) = a.shape();
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| a.column(j)).collect();
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut pivots = Vec::with_capacity(n);
    let mut r_diagonal = Vec::with_capacity(m.min(n));

    for k in 0..m.min(n) {
        let pos = pick_pivot(&cols, &remaining, k);
        let p = remaining.remove(pos);
        pivots.push(p);

        let x = &cols[p][k..];
        let alpha = norm2(x);
        if alpha == 0.0 {
            r_diagonal.push(0.0);
            continue;
        }
        let sign = if x[0] >= 0.0 { 1.0 } else { -1.0 };
        let mut v = x.to_vec();
        v[0] += sign * alpha;
        let vnorm2 = dot(&v, &v);
        r_diagonal.push(-sign * alpha);
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;
        for &j in &remaining {
            let tail = &mut cols[j][k..];
            let proj = beta * dot(&v, tail);
            for (t, vi) in tail.iter_mut().zip(&v) {
                *t -= proj * vi;
            }
        }
    }

    // Columns beyond the row count have no residual left; keep them in
    // ascending order, which is what the tie rule selects.
    pivots.extend(remaining);
    Ok(PivotedQr { pivots, r_diagonal })
}

fn pick_pivot(cols: &[Vec<f64>], remaining: &[usize], k: usize) -> usize {
    let mut best_pos = 0;
    let mut best = norm2(&cols[remaining[0]][k..]);
    for (pos, &j) in remaining.iter().enumerate().skip(1) {
        let nrm = norm2(&cols[j][k..]);
        if nrm > best * (1.0 + PIVOT_TIE_TOL) {
            best = nrm;
            best_pos = pos;
        }
    }
    best_pos
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn picks_largest_column_first() {
        let a = DataMatrix::diag(&[3.0, 1.0, 2.0]);
        let qr = qr_column_pivot(&a).unwrap();
        assert_eq!(qr.pivots, vec![0, 2, 1]);
        let mags: Vec<f64> = qr.r_diagonal.iter().map(|r| r.abs()).collect();
        assert_eq!(mags, vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn duplicated_columns_first_occurrence_wins() {
        let a = DataMatrix::from_rows(&[vec![1.0, 2.0, 2.0], vec![0.0, 1.0, 1.0]]).unwrap();
        let qr = qr_column_pivot(&a).unwrap();
        assert_eq!(qr.pivots[0], 1);
    }

    #[test]
    fn zero_matrix_is_degenerate() {
        assert!(matches!(
            qr_column_pivot(&DataMatrix::zeros(3, 3)),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn wide_matrix_returns_full_permutation() {
        let a = DataMatrix::from_fn(2, 5, |i, j| ((i + 1) * (j + 2) % 7) as f64);
        let qr = qr_column_pivot(&a).unwrap();
        let mut sorted = qr.pivots.clone();
        sorted.sort();
        assert_eq!(sorted, vec![0, 1, 2, 3, 4]);
        assert_eq!(qr.r_diagonal.len(), 2);
    }
}
