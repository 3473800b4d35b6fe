//! Singular value decomposition.
//!
//! Dense factorisations use one-sided (Hestenes) Jacobi rotations applied to
//! the columns of the taller orientation, so the rotated dimension is
//! `min(m, n)`. For a few leading triplets of a large matrix a block subspace
//! iteration with Rayleigh–Ritz extraction is used instead; its small core
//! SVD is again Jacobi.

use crate::error::{check_range, Error, Result};
use crate::rng::Stream;

use super::matrix::{axpy, dot, norm2, DataMatrix};

const MAX_SWEEPS: usize = 80;

/// Thin singular triplets `A ≈ U diag(σ) Vᵀ`.
#[derive(Clone, Debug)]
pub struct SvdFactors {
    /// `m × k`, orthonormal columns.
    pub u: DataMatrix,
    /// Length `k`, nonincreasing, nonnegative.
    pub singular_values: Vec<f64>,
    /// `n × k`, orthonormal columns.
    pub v: DataMatrix,
}

impl SvdFactors {
    pub fn len(&self) -> usize {
        self.singular_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.singular_values.is_empty()
    }

    /// `U diag(σ) Vᵀ`.
    pub fn reconstruct(&self) -> DataMatrix {
        self.reconstruct_with(&self.singular_values)
    }

    /// `U diag(weights) Vᵀ` for replacement singular values.
    pub fn reconstruct_with(&self, weights: &[f64]) -> DataMatrix {
        let (m, k) = self.u.shape();
        let n = self.v.rows();
        let mut scaled_u = self.u.clone();
        for i in 0..m {
            for (x, w) in scaled_u.row_mut(i).iter_mut().zip(weights) {
                *x *= w;
            }
        }
        let active = weights.iter().take(k).rposition(|&w| w != 0.0).map_or(0, |p| p + 1);
        if active == 0 {
            return DataMatrix::zeros(m, n);
        }
        if active < k {
            let u = scaled_u.columns_range(0, active);
            let v = self.v.columns_range(0, active);
            return u.matmul_t(&v);
        }
        scaled_u.matmul_t(&self.v)
    }

    /// Keeps the leading `r` triplets.
    pub fn truncate(mut self, r: usize) -> SvdFactors {
        if r < self.len() {
            self.u = self.u.columns_range(0, r);
            self.v = self.v.columns_range(0, r);
            self.singular_values.truncate(r);
        }
        self
    }
}

/// Full thin SVD, `k = min(m, n)`.
pub fn svd_thin(a: &DataMatrix) -> Result<SvdFactors> {
    a.ensure_finite()?;
    Ok(jacobi_svd(a, None))
}

/// Leading `r` singular triplets; `U_r Σ_r V_rᵀ` is the best rank-`r`
/// approximation in Frobenius norm.
pub fn svd_truncated(a: &DataMatrix, r: usize) -> Result<SvdFactors> {
    check_range("rank", r, 1, a.min_dim())?;
    a.ensure_finite()?;
    let k = a.min_dim();
    if k <= DENSE_LIMIT || 3 * r >= k {
        return Ok(jacobi_svd(a, None).truncate(r));
    }
    Ok(subspace_svd(a, r, None, &SubspaceOptions::default()))
}

/// Below this short-side dimension a dense Jacobi factorisation is cheap
/// enough to use unconditionally.
pub(crate) const DENSE_LIMIT: usize = 256;

/// Spectral norm `σ_max(A)`.
pub fn spectral_norm(a: &DataMatrix) -> f64 {
    if a.is_zero() {
        return 0.0;
    }
    if a.min_dim() <= DENSE_LIMIT {
        return jacobi_svd(a, None).singular_values[0];
    }
    let opts = SubspaceOptions {
        tol: 1e-12,
        ..SubspaceOptions::default()
    };
    subspace_svd(a, 1, None, &opts).singular_values[0]
}

/// One-sided Jacobi SVD. `warm`, when present, must be a previous
/// factorisation of a matrix of the same shape; its short-side orthogonal
/// factor seeds the rotation basis, which cuts the sweep count when the
/// matrix has changed only slightly.
pub(crate) fn jacobi_svd(a: &DataMatrix, warm: Option<&SvdFactors>) -> SvdFactors {
    let (m, n) = a.shape();
    if m >= n {
        let start = warm.map(|w| &w.v).filter(|v| v.shape() == (n, n));
        let (scaled, s, basis) = hestenes(a, start);
        finish(scaled, s, basis, false)
    } else {
        let at = a.transpose();
        let start = warm.map(|w| &w.u).filter(|u| u.shape() == (m, m));
        let (scaled, s, basis) = hestenes(&at, start);
        finish(scaled, s, basis, true)
    }
}

/// Orthogonalises the columns of `a` (`m ≥ n`). Returns column vectors of
/// `U`, singular values and column vectors of `V`, unsorted.
fn hestenes(a: &DataMatrix, start: Option<&DataMatrix>) -> (Vec<Vec<f64>>, Vec<f64>, Vec<Vec<f64>>) {
    let (m, n) = a.shape();
    let (work, basis) = match start {
        Some(v0) => (a.matmul(v0), v0.clone()),
        None => (a.clone(), DataMatrix::identity(n)),
    };
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| work.column(j)).collect();
    let mut vcols: Vec<Vec<f64>> = (0..n).map(|j| basis.column(j)).collect();

    let tol = f64::EPSILON * (m as f64).sqrt().max(1.0);
    let mut norms: Vec<f64> = cols.iter().map(|c| dot(c, c)).collect();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = norms[p];
                let beta = norms[q];
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let (left, right) = cols.split_at_mut(q);
                let (cp, cq) = (&mut left[p], &mut right[0]);
                let gamma = dot(cp, cq);
                if gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + 1.0f64.hypot(zeta));
                let c = 1.0 / 1.0f64.hypot(t);
                let s = c * t;
                rotate(cp, cq, c, s);
                norms[p] = dot(cp, cp);
                norms[q] = dot(cq, cq);
                let (vl, vr) = vcols.split_at_mut(q);
                rotate(&mut vl[p], &mut vr[0], c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let sigma: Vec<f64> = cols.iter().map(|c| norm2(c)).collect();
    (cols, sigma, vcols)
}

#[inline]
fn rotate(x: &mut [f64], y: &mut [f64], c: f64, s: f64) {
    for (xi, yi) in x.iter_mut().zip(y.iter_mut()) {
        let a = *xi;
        let b = *yi;
        *xi = c * a - s * b;
        *yi = s * a + c * b;
    }
}

/// Sorts triplets, normalises the rotated columns (which hold `σ_j w_j` on
/// entry), completes null directions and fixes signs. `transposed` means the
/// rotated columns belong to `V` and the accumulated basis is `U`.
fn finish(
    scaled: Vec<Vec<f64>>,
    sigma: Vec<f64>,
    basis: Vec<Vec<f64>>,
    transposed: bool,
) -> SvdFactors {
    let k = sigma.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]).then(i.cmp(&j)));

    let smax = order.first().map_or(0.0, |&i| sigma[i]);
    let m = scaled.first().map_or(0, Vec::len);
    let cutoff = smax * f64::EPSILON * (m.max(k) as f64);

    let mut normalized: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut accumulated: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut s_sorted = Vec::with_capacity(k);
    let mut null_slots = Vec::new();
    for &j in &order {
        let s = sigma[j];
        if s > cutoff && s > 0.0 {
            normalized.push(scaled[j].iter().map(|x| x / s).collect());
        } else {
            null_slots.push(normalized.len());
            normalized.push(vec![0.0; m]);
        }
        accumulated.push(basis[j].clone());
        s_sorted.push(s);
    }
    complete_orthonormal(&mut normalized, &null_slots);

    let (mut u_sorted, mut v_sorted) = if transposed {
        (accumulated, normalized)
    } else {
        (normalized, accumulated)
    };

    for (u, v) in u_sorted.iter_mut().zip(v_sorted.iter_mut()) {
        fix_sign(u, v);
    }

    SvdFactors {
        u: DataMatrix::from_columns(&u_sorted),
        singular_values: s_sorted,
        v: DataMatrix::from_columns(&v_sorted),
    }
}

/// Makes the largest-magnitude entry of `u` positive (first index on ties),
/// flipping `v` alongside so the product is unchanged.
pub(crate) fn fix_sign(u: &mut [f64], v: &mut [f64]) {
    let mut best = 0usize;
    for (i, x) in u.iter().enumerate() {
        if x.abs() > u[best].abs() {
            best = i;
        }
    }
    if u.get(best).is_some_and(|&x| x < 0.0) {
        u.iter_mut().for_each(|x| *x = -*x);
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Fills `cols[slot]` for each slot with unit vectors orthogonal to every
/// other column, trying canonical basis vectors in order.
fn complete_orthonormal(cols: &mut [Vec<f64>], slots: &[usize]) {
    if slots.is_empty() {
        return;
    }
    let m = cols[0].len();
    let mut candidate = 0usize;
    for &slot in slots {
        while candidate < m {
            let mut e = vec![0.0; m];
            e[candidate] = 1.0;
            candidate += 1;
            for _ in 0..2 {
                for (j, c) in cols.iter().enumerate() {
                    if j == slot || c.iter().all(|&x| x == 0.0) {
                        continue;
                    }
                    let proj = dot(c, &e);
                    axpy(-proj, c, &mut e);
                }
            }
            let nrm = norm2(&e);
            if nrm > 1e-8 {
                e.iter_mut().for_each(|x| *x /= nrm);
                cols[slot] = e;
                break;
            }
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct SubspaceOptions {
    pub oversample: usize,
    /// Stop when `‖A v_i − σ_i u_i‖ ≤ tol · σ_1` for every requested triplet.
    pub tol: f64,
    pub max_iters: usize,
    pub seed: u64,
    /// Triplets whose singular value is at or below this level need not
    /// converge.
    pub floor: f64,
}

impl Default for SubspaceOptions {
    fn default() -> Self {
        SubspaceOptions {
            oversample: 8,
            tol: 1e-11,
            max_iters: 500,
            seed: 0x5eed_5eed,
            floor: 0.0,
        }
    }
}

/// Leading `k` triplets by block subspace iteration. `start` supplies
/// initial right vectors (columns, length `n`); missing columns are drawn
/// from a seeded Gaussian stream.
pub(crate) fn subspace_svd(
    a: &DataMatrix,
    k: usize,
    start: Option<&DataMatrix>,
    opts: &SubspaceOptions,
) -> SvdFactors {
    let (m, n) = a.shape();
    let block = (k + opts.oversample).min(m.min(n));
    if block >= m.min(n) {
        return jacobi_svd(a, None).truncate(k);
    }

    let mut rng = Stream::new(opts.seed);
    let mut q_cols: Vec<Vec<f64>> = Vec::with_capacity(block);
    if let Some(s) = start.filter(|s| s.rows() == n) {
        for j in 0..s.cols().min(block) {
            q_cols.push(s.column(j));
        }
    }
    while q_cols.len() < block {
        q_cols.push((0..n).map(|_| rng.normal()).collect());
    }
    orthonormalize(&mut q_cols, &mut rng);
    let mut z = a.matmul(&DataMatrix::from_columns(&q_cols));
    let mut best: Option<SvdFactors> = None;
    for _ in 0..opts.max_iters {
        let mut p_cols: Vec<Vec<f64>> = (0..block).map(|j| z.column(j)).collect();
        orthonormalize(&mut p_cols, &mut rng);
        let p = DataMatrix::from_columns(&p_cols);
        let w = a.t_matmul(&p); // n × block
        let core = jacobi_svd(&w, None); // W = Uw Σ Vwᵀ
        let u = p.matmul(&core.v);
        let v = core.u;
        let sigma = core.singular_values;

        z = a.matmul(&v);
        let scale = sigma[0].max(f64::MIN_POSITIVE);
        let mut worst = 0.0f64;
        for i in 0..k {
            if i > 0 && sigma[i] <= opts.floor {
                break;
            }
            let mut r = 0.0;
            for row in 0..m {
                let d = z[(row, i)] - sigma[i] * u[(row, i)];
                r += d * d;
            }
            worst = worst.max(r.sqrt() / scale);
        }
        let done = worst <= opts.tol || sigma[0] == 0.0;
        best = Some(SvdFactors {
            u,
            singular_values: sigma,
            v,
        });
        if done {
            break;
        }
    }

    let mut f = best.expect("at least one iteration").truncate(k);
    let mut ucols: Vec<Vec<f64>> = (0..k).map(|j| f.u.column(j)).collect();
    let mut vcols: Vec<Vec<f64>> = (0..k).map(|j| f.v.column(j)).collect();
    for (u, v) in ucols.iter_mut().zip(vcols.iter_mut()) {
        fix_sign(u, v);
    }
    f.u = DataMatrix::from_columns(&ucols);
    f.v = DataMatrix::from_columns(&vcols);
    f
}

/// Modified Gram–Schmidt with one reorthogonalisation pass. Columns that
/// collapse are replaced by fresh Gaussian directions.
pub(crate) fn orthonormalize(cols: &mut [Vec<f64>], rng: &mut Stream) {
    for j in 0..cols.len() {
        let mut attempts = 0;
        loop {
            let orig = norm2(&cols[j]);
            for _ in 0..2 {
                let (done, rest) = cols.split_at_mut(j);
                let c = &mut rest[0];
                for prev in done.iter() {
                    let proj = dot(prev, c);
                    axpy(-proj, prev, c);
                }
            }
            let nrm = norm2(&cols[j]);
            if nrm > 1e-10 * orig.max(f64::MIN_POSITIVE) && nrm > 0.0 {
                cols[j].iter_mut().for_each(|x| *x /= nrm);
                break;
            }
            attempts += 1;
            assert!(attempts < 16, "failed to extend orthonormal basis");
            let len = cols[j].len();
            cols[j] = (0..len).map(|_| rng.normal()).collect();
        }
    }
}

pub(crate) fn ensure_nonzero(a: &DataMatrix, what: &str) -> Result<()> {
    if a.is_zero() {
        return Err(Error::Degenerate(format!("{what}: all-zero matrix")));
    }
    Ok(())
}
