//! Instances shared by the integration suites.
#![allow(dead_code)]

use sparsesense::rng::Stream;
use sparsesense::DataMatrix;

pub struct Corrupted {
    pub x: DataMatrix,
    pub low_rank: DataMatrix,
    pub sparse: DataMatrix,
    pub support: Vec<usize>,
}

/// Rank-`r` Gaussian product plus `frac` of entries hit by `±10·std`
/// spikes, all from one stream.
pub fn low_rank_plus_sparse(m: usize, n: usize, r: usize, frac: f64, seed: u64) -> Corrupted {
    let mut s = Stream::new(seed);
    let a = DataMatrix::from_fn(m, r, |_, _| s.normal());
    let b = DataMatrix::from_fn(r, n, |_, _| s.normal());
    let low_rank = a.matmul(&b);
    let mag = 10.0 * low_rank.std_dev();
    let support = s.choose_sorted(m * n, (frac * (m * n) as f64).round() as usize);
    let mut sparse = DataMatrix::zeros(m, n);
    for &k in &support {
        sparse.as_mut_slice()[k] = if s.uniform() < 0.5 { mag } else { -mag };
    }
    Corrupted { x: low_rank.add(&sparse), low_rank, sparse, support }
}

pub fn rel_err(a: &DataMatrix, truth: &DataMatrix) -> f64 {
    a.sub(truth).frobenius_norm() / truth.frobenius_norm()
}

pub fn rmse(a: &DataMatrix, b: &DataMatrix) -> f64 {
    a.sub(b).frobenius_norm() / ((a.rows() * a.cols()) as f64).sqrt()
}
