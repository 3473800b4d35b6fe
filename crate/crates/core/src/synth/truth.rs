use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::linalg::DataMatrix;
use crate::rng::{derive_seed, Stream};

/// Parameters of an exactly low-rank "thermal-like" field
/// `X = Σ_k u_k w_k(t)ᵀ`: a uniform baseline mode plus Gaussian hot spots
/// whose intensities oscillate in time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundTruthSpec {
    pub m: usize,
    pub n: usize,
    pub rank: usize,
    /// Hot-spot width as a fraction of the spatial extent.
    pub smoothness: f64,
    /// One frequency (Hz) per mode.
    pub temporal_freqs: Vec<f64>,
    /// Mean sampling interval in seconds.
    pub dt: f64,
    /// Interval spread: each gap is `dt · (1 + jitter · (2u − 1))`.
    pub jitter: f64,
    pub baseline: f64,
    pub amplitude: f64,
    pub seed: u64,
}

impl GroundTruthSpec {
    pub fn new(m: usize, n: usize, rank: usize, seed: u64) -> Self {
        GroundTruthSpec {
            m,
            n,
            rank,
            smoothness: 0.08,
            temporal_freqs: default_freqs(rank),
            dt: 0.5,
            jitter: 0.0,
            baseline: 40.0,
            amplitude: 10.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.n == 0 {
            return Err(Error::validation("ground truth needs m, n >= 1"));
        }
        check_range("rank", self.rank, 1, self.m.min(self.n))?;
        if self.temporal_freqs.len() < self.rank {
            return Err(Error::validation(format!(
                "{} temporal frequencies for rank {}",
                self.temporal_freqs.len(),
                self.rank
            )));
        }
        if !(self.smoothness > 0.0) || !(self.dt > 0.0) || !(0.0..=1.0).contains(&self.jitter) {
            return Err(Error::validation("smoothness and dt must be > 0, jitter in [0, 1]"));
        }
        Ok(())
    }
}

/// `0.03 · (1 + 0.55k)` Hz for mode `k`.
pub fn default_freqs(rank: usize) -> Vec<f64> {
    (0..rank).map(|k| 0.03 * (1.0 + 0.55 * k as f64)).collect()
}

/// Sample times starting at zero. With `jitter > 0` the gaps are uniform in
/// `dt · [1 − jitter, 1 + jitter]`.
pub fn sample_times(spec: &GroundTruthSpec) -> Vec<f64> {
    let mut rng = Stream::new(derive_seed(spec.seed, 100));
    let mut t = 0.0;
    let mut times = Vec::with_capacity(spec.n);
    for j in 0..spec.n {
        if j > 0 {
            let gap = if spec.jitter > 0.0 {
                spec.dt * (1.0 + spec.jitter * (2.0 * rng.uniform() - 1.0))
            } else {
                spec.dt
            };
            t += gap;
        }
        times.push(t);
    }
    times
}

/// The field sampled at [`sample_times`]; rank exactly `spec.rank`.
pub fn generate_ground_truth(spec: &GroundTruthSpec) -> Result<DataMatrix> {
    ground_truth_at(spec, &sample_times(spec))
}

/// The same field evaluated at arbitrary times, one column per entry of
/// `times`. `spec.n` is ignored.
pub fn ground_truth_at(spec: &GroundTruthSpec, times: &[f64]) -> Result<DataMatrix> {
    spec.validate()?;
    let mut rng = Stream::new(derive_seed(spec.seed, 0));

    let mut spatial: Vec<Vec<f64>> = Vec::with_capacity(spec.rank);
    let mut temporal: Vec<Vec<f64>> = Vec::with_capacity(spec.rank);
    for k in 0..spec.rank {
        let phase = std::f64::consts::TAU * rng.uniform();
        let freq = spec.temporal_freqs[k];
        if k == 0 {
            spatial.push(vec![1.0; spec.m]);
            let slope = 0.001 * spec.amplitude * (rng.uniform() - 0.5);
            temporal.push(
                times
                    .iter()
                    .map(|&t| {
                        spec.baseline
                            + 0.3 * spec.amplitude * (std::f64::consts::TAU * freq * t + phase).sin()
                            + slope * t
                    })
                    .collect(),
            );
        } else {
            let centre = rng.uniform_in(0.1, 0.9);
            let width = spec.smoothness * rng.uniform_in(0.75, 1.25);
            spatial.push(
                (0..spec.m)
                    .map(|i| {
                        let p = (i as f64 + 0.5) / spec.m as f64;
                        (-0.5 * ((p - centre) / width).powi(2)).exp()
                    })
                    .collect(),
            );
            let scale = spec.amplitude * rng.uniform_in(0.5, 1.5);
            let offset = spec.amplitude * rng.uniform_in(0.5, 1.5);
            temporal.push(
                times
                    .iter()
                    .map(|&t| offset + scale * (std::f64::consts::TAU * freq * t + phase).sin())
                    .collect(),
            );
        }
    }

    Ok(DataMatrix::from_fn(spec.m, times.len(), |i, j| {
        (0..spec.rank).map(|k| spatial[k][i] * temporal[k][j]).sum()
    }))
}
