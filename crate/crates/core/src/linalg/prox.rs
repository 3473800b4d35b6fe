//! Proximal operators of the ℓ1 and nuclear norms.

use crate::error::{Error, Result};

use super::matrix::DataMatrix;
use super::svd::{jacobi_svd, SvdFactors};

/// `sign(x) · max(|x| − τ, 0)`.
#[inline]
pub fn soft_threshold(x: f64, tau: f64) -> f64 {
    debug_assert!(tau >= 0.0);
    if x > tau {
        x - tau
    } else if x < -tau {
        x + tau
    } else {
        0.0
    }
}

/// Entrywise [`soft_threshold`].
pub fn soft_threshold_matrix(a: &DataMatrix, tau: f64) -> DataMatrix {
    a.map(|x| soft_threshold(x, tau))
}

/// `U · shrink(Σ, τ) · Vᵀ`, the proximal map of `τ‖·‖_*`.
pub fn singular_value_threshold(a: &DataMatrix, tau: f64) -> Result<DataMatrix> {
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::validation(format!("threshold must be finite and >= 0, got {tau}")));
    }
    a.ensure_finite()?;
    let factors = jacobi_svd(a, None);
    Ok(shrink_factors(&factors, tau).0)
}

/// Applies the shrinkage to an existing factorisation. Also returns the
/// number of singular values that survive.
pub(crate) fn shrink_factors(f: &SvdFactors, tau: f64) -> (DataMatrix, usize) {
    let shrunk: Vec<f64> = f.singular_values.iter().map(|&s| (s - tau).max(0.0)).collect();
    let kept = shrunk.iter().filter(|&&s| s > 0.0).count();
    (f.reconstruct_with(&shrunk), kept)
}
