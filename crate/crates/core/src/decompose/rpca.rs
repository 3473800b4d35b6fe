//! Principal component pursuit
//!
//! ```text
//! minimise ‖L‖_* + λ‖S‖₁  subject to  L + S = X
//! ```
//!
//! solved with the inexact augmented Lagrange multiplier iteration. Each
//! sweep minimises the augmented Lagrangian in `L` (singular value
//! thresholding at `1/μ`), then in `S` (entrywise soft thresholding at
//! `λ/μ`), then takes a dual ascent step `Λ ← Λ + μ(X − L − S)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    jacobi_svd, shrink_factors, soft_threshold, spectral_norm, subspace_svd, DataMatrix,
    SubspaceOptions, SvdFactors, DENSE_LIMIT,
};

/// A tuning value that is either derived from the data or fixed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Param {
    Auto,
    Value(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RpcaConfig {
    /// Sparsity weight. `Auto` is `1/√max(m, n)`.
    pub lambda: Param,
    pub mu: Penalty,
    pub max_iters: usize,
    /// Stop once `‖X − L − S‖_F / ‖X‖_F ≤ tol`.
    pub tol: f64,
    /// Factor applied to `μ` after every iteration; `1.0` keeps it fixed.
    pub mu_growth: f64,
    pub mu_max: f64,
}

impl Default for RpcaConfig {
    fn default() -> Self {
        RpcaConfig {
            lambda: Param::Auto,
            mu: Penalty::Auto,
            max_iters: 1000,
            tol: 1e-7,
            mu_growth: 1.0,
            mu_max: 1e10,
        }
    }
}

impl RpcaConfig {
    pub fn validate(&self) -> Result<()> {
        if let Param::Value(l) = self.lambda {
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::validation(format!("lambda must be > 0, got {l}")));
            }
        }
        if let Penalty::Value(mu) = self.mu {
            if !(mu > 0.0 && mu.is_finite()) {
                return Err(Error::validation(format!("mu must be > 0, got {mu}")));
            }
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::validation(format!("tol must lie in (0, 1), got {}", self.tol)));
        }
        if self.max_iters == 0 {
            return Err(Error::validation("max_iters must be >= 1"));
        }
        if !(self.mu_growth >= 1.0 && self.mu_growth.is_finite()) {
            return Err(Error::validation(format!("mu_growth must be >= 1, got {}", self.mu_growth)));
        }
        if !(self.mu_max > 0.0) {
            return Err(Error::validation("mu_max must be > 0"));
        }
        Ok(())
    }

    pub fn lambda_for(&self, x: &DataMatrix) -> f64 {
        match self.lambda {
            Param::Value(l) => l,
            Param::Auto => 1.0 / (x.rows().max(x.cols()) as f64).sqrt(),
        }
    }

    pub fn mu_for(&self, x: &DataMatrix) -> f64 {
        match self.mu {
            Penalty::Value(mu) => mu,
            Penalty::Auto => (x.rows() * x.cols()) as f64 / (4.0 * x.l1_norm()),
            Penalty::Spectral => 1.25 / spectral_norm(x),
        }
    }
}

/// Starting value of the augmented-Lagrangian penalty `μ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Penalty {
    /// `m·n / (4‖X‖₁)`, usually run without growth.
    Auto,
    /// `1.25 / ‖X‖₂`, meant for continuation with `mu_growth > 1`.
    Spectral,
    Value(f64),
}

/// Lagrange multiplier matrix `Λ`, same shape as the data.
#[derive(Clone, Debug)]
pub struct Multipliers(pub DataMatrix);

#[derive(Clone, Debug)]
pub struct RpcaResult {
    pub low_rank: DataMatrix,
    pub sparse: DataMatrix,
    pub multipliers: Multipliers,
    pub iterations: usize,
    /// `‖X − L_k − S_k‖_F / ‖X‖_F` after every iteration.
    pub residual_history: Vec<f64>,
    pub converged: bool,
    pub lambda: f64,
    /// Penalty at the start of the run.
    pub mu: f64,
    /// Singular values kept by the last thresholding step.
    pub rank: usize,
}

impl RpcaResult {
    pub fn final_residual(&self) -> f64 {
        self.residual_history.last().copied().unwrap_or(0.0)
    }
}

/// Splits `x` into a low-rank part and a sparse part.
///
/// Running out of iterations is not an error; the result then carries
/// `converged == false`.
pub fn rpca(x: &DataMatrix, cfg: &RpcaConfig) -> Result<RpcaResult> {
    cfg.validate()?;
    x.ensure_finite()?;
    let (m, n) = x.shape();
    let lambda = cfg.lambda_for(x);

    let norm_x = x.frobenius_norm();
    if norm_x == 0.0 {
        return Ok(RpcaResult {
            low_rank: DataMatrix::zeros(m, n),
            sparse: DataMatrix::zeros(m, n),
            multipliers: Multipliers(DataMatrix::zeros(m, n)),
            iterations: 1,
            residual_history: vec![0.0],
            converged: true,
            lambda,
            mu: match cfg.mu {
                Penalty::Value(mu) => mu,
                _ => 0.0,
            },
            rank: 0,
        });
    }

    let spectral = spectral_norm(x);
    let mu0 = match cfg.mu {
        Penalty::Spectral => 1.25 / spectral,
        _ => cfg.mu_for(x),
    };
    let mut mu = mu0;
    let dual_scale = spectral.max(x.max_abs() / lambda);
    let mut dual = x.scale(1.0 / dual_scale);
    let mut sparse = DataMatrix::zeros(m, n);
    let mut low_rank = DataMatrix::zeros(m, n);
    let mut svt = SvtEngine::new(m, n);
    let mut history = Vec::new();
    let mut converged = false;
    let mut rank = 0;

    let xs = x.as_slice();
    for _ in 0..cfg.max_iters {
        let inv_mu = 1.0 / mu;

        // L-step: prox of the nuclear norm at X − S + Λ/μ.
        let target = DataMatrix::from_vec(
            m,
            n,
            xs.iter()
                .zip(sparse.as_slice())
                .zip(dual.as_slice())
                .map(|((&xv, &sv), &yv)| xv - sv + yv * inv_mu)
                .collect(),
        );
        let (l_new, kept) = svt.threshold(&target, inv_mu);
        low_rank = l_new;
        rank = kept;

        // S-step: entrywise shrinkage of X − L + Λ/μ.
        let shrink = lambda * inv_mu;
        for (((s, &xv), &lv), &yv) in sparse
            .as_mut_slice()
            .iter_mut()
            .zip(xs)
            .zip(low_rank.as_slice())
            .zip(dual.as_slice())
        {
            *s = soft_threshold(xv - lv + yv * inv_mu, shrink);
        }

        // Dual ascent on the constraint residual.
        let mut res2 = 0.0;
        for (((y, &xv), &lv), &sv) in dual
            .as_mut_slice()
            .iter_mut()
            .zip(xs)
            .zip(low_rank.as_slice())
            .zip(sparse.as_slice())
        {
            let r = xv - lv - sv;
            res2 += r * r;
            *y += mu * r;
        }
        let residual = res2.sqrt() / norm_x;
        history.push(residual);
        if residual <= cfg.tol {
            converged = true;
            break;
        }
        mu = (mu * cfg.mu_growth).min(cfg.mu_max);
    }

    Ok(RpcaResult {
        low_rank,
        sparse,
        multipliers: Multipliers(dual),
        iterations: history.len(),
        residual_history: history,
        converged,
        lambda,
        mu: mu0,
        rank,
    })
}

/// The cleaned data: the low-rank part of [`rpca`].
pub fn clean(x: &DataMatrix, cfg: &RpcaConfig) -> Result<DataMatrix> {
    Ok(rpca(x, cfg)?.low_rank)
}

/// Singular value thresholding with state carried between ALM iterations.
///
/// Small problems use a dense Jacobi SVD seeded with the previous
/// factorisation. Large ones compute only the leading triplets by subspace
/// iteration, growing the block until the smallest computed singular value
/// falls under the threshold, so every value above it is captured.
struct SvtEngine {
    dense: bool,
    min_dim: usize,
    warm: Option<SvdFactors>,
    predicted: usize,
}

impl SvtEngine {
    fn new(m: usize, n: usize) -> Self {
        let min_dim = m.min(n);
        SvtEngine {
            dense: min_dim <= DENSE_LIMIT,
            min_dim,
            warm: None,
            predicted: 10.min(min_dim),
        }
    }

    fn threshold(&mut self, a: &DataMatrix, tau: f64) -> (DataMatrix, usize) {
        let factors = if self.dense {
            jacobi_svd(a, self.warm.as_ref())
        } else {
            self.leading(a, tau)
        };
        let (out, kept) = shrink_factors(&factors, tau);
        self.predicted = (kept + 5).min(self.min_dim).max(1);
        self.warm = Some(factors);
        (out, kept)
    }

    fn leading(&mut self, a: &DataMatrix, tau: f64) -> SvdFactors {
        let opts = SubspaceOptions {
            tol: 1e-9,
            max_iters: 60,
            floor: tau,
            ..SubspaceOptions::default()
        };
        let mut k = self.predicted;
        loop {
            if 2 * (k + opts.oversample) >= self.min_dim {
                return jacobi_svd(a, None);
            }
            let start = self.warm.as_ref().map(|w| &w.v);
            let f = subspace_svd(a, k, start, &opts);
            if f.singular_values[k - 1] <= tau {
                return f;
            }
            k = (2 * k).min(self.min_dim);
        }
    }
}
