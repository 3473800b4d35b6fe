use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::model::{LstmDims, LstmModel, Trace};
use super::series::{make_windows, TimeSeries};
use crate::error::{Error, Result};
use crate::linalg::DataMatrix;
use crate::rng::{derive_seed, Stream};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub window: usize,
    pub horizon: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
    pub hidden_dim: usize,
    pub dense_dim: usize,
    pub dropout: f64,
    /// Global gradient-norm ceiling.
    pub clip_norm: f64,
    /// Trailing share of windows held out, in time order.
    pub validation_fraction: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            window: 50,
            horizon: 100,
            learning_rate: 1e-4,
            epochs: 100,
            batch_size: 32,
            seed: 0,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
            hidden_dim: 128,
            dense_dim: 128,
            dropout: 0.2,
            clip_norm: 5.0,
            validation_fraction: 0.2,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window == 0 || self.horizon == 0 || self.epochs == 0 || self.batch_size == 0 {
            return Err(Error::validation("window, horizon, epochs and batch_size must be >= 1"));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::validation("learning_rate must be > 0"));
        }
        if !(0.0..1.0).contains(&self.adam_beta1) || !(0.0..1.0).contains(&self.adam_beta2) || !(self.adam_eps > 0.0) {
            return Err(Error::validation("Adam betas must lie in [0, 1) and eps must be > 0"));
        }
        if !(self.clip_norm > 0.0) {
            return Err(Error::validation("clip_norm must be > 0"));
        }
        if !(0.0..1.0).contains(&self.validation_fraction) {
            return Err(Error::validation("validation_fraction must lie in [0, 1)"));
        }
        Ok(())
    }

    pub fn dims(&self, channels: usize) -> LstmDims {
        LstmDims {
            input: channels,
            hidden: self.hidden_dim,
            dense: self.dense_dim,
            output: channels,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainHistory {
    /// RMSE over the training windows seen during each epoch, in data units.
    pub train_rmse: Vec<f64>,
    /// RMSE on the held-out windows after each epoch; empty without a split.
    pub val_rmse: Vec<f64>,
    pub epoch_seconds: Vec<f64>,
}

/// Fits a one-step-ahead model with Adam on mean squared error.
///
/// Windows are split chronologically; normalisation statistics come from
/// the rows the training windows touch. Initial weights, batch order and
/// dropout masks all derive from `cfg.seed`.
pub fn train(ts: &TimeSeries, cfg: &TrainConfig) -> Result<(LstmModel, TrainHistory)> {
    cfg.validate()?;
    let windows = make_windows(ts, cfg.window, cfg.horizon)?;
    let total = windows.len();
    let n_val = (cfg.validation_fraction * total as f64).floor() as usize;
    let n_train = total - n_val;
    let s = ts.channels();

    let mut model = LstmModel::init(cfg.dims(s), cfg.dropout, derive_seed(cfg.seed, 0))?;
    let (mean, std) = channel_stats(ts.values(), n_train + cfg.window);
    model.set_normalization(mean, std)?;
    let norm = model.normalize_rows(ts.values());
    let norm = norm.as_slice();

    let mut rng = Stream::new(derive_seed(cfg.seed, 1));
    let mut adam = Adam::new(model.params().len(), cfg);
    let mut grad = vec![0.0; model.params().len()];
    let mut trace = Trace::new(&model.dims(), cfg.window);
    let mut order: Vec<usize> = (0..n_train).collect();
    let mut history = TrainHistory::default();
    let keep = 1.0 - cfg.dropout;
    let std = model.norm_std().to_vec();

    for epoch in 0..cfg.epochs {
        let started = Instant::now();
        rng.shuffle(&mut order);
        let mut sq_sum = 0.0;
        for batch in order.chunks(cfg.batch_size) {
            grad.fill(0.0);
            let scale = 1.0 / (batch.len() * s) as f64;
            for &i in batch {
                trace.mask_in_use = cfg.dropout > 0.0;
                if trace.mask_in_use {
                    for m in trace.mask.iter_mut() {
                        *m = if rng.uniform() < keep { 1.0 / keep } else { 0.0 };
                    }
                }
                model.forward(&norm[i * s..(i + cfg.window) * s], &mut trace);
                let target = &norm[(i + cfg.window) * s..(i + cfg.window + 1) * s];
                sq_sum += trace
                    .y
                    .iter()
                    .zip(target)
                    .zip(&std)
                    .map(|((y, t), sd)| ((y - t) * sd).powi(2))
                    .sum::<f64>();
                model.accumulate(&mut trace, target, scale, &mut grad);
            }
            if !sq_sum.is_finite() || grad.iter().any(|g| !g.is_finite()) {
                return Err(Error::TrainingDiverged { epoch });
            }
            clip(&mut grad, cfg.clip_norm);
            adam.step(model.params_mut(), &grad);
        }
        trace.mask_in_use = false;
        let train_rmse = (sq_sum / (n_train * s) as f64).sqrt();
        if !train_rmse.is_finite() || model.params().iter().any(|p| !p.is_finite()) {
            return Err(Error::TrainingDiverged { epoch });
        }
        history.train_rmse.push(train_rmse);
        if n_val > 0 {
            let mut val_sq = 0.0;
            for i in n_train..total {
                model.forward(&norm[i * s..(i + cfg.window) * s], &mut trace);
                let target = &norm[(i + cfg.window) * s..(i + cfg.window + 1) * s];
                val_sq += trace
                    .y
                    .iter()
                    .zip(target)
                    .zip(&std)
                    .map(|((y, t), sd)| ((y - t) * sd).powi(2))
                    .sum::<f64>();
            }
            history.val_rmse.push((val_sq / (n_val * s) as f64).sqrt());
        }
        history.epoch_seconds.push(started.elapsed().as_secs_f64());
    }
    Ok((model, history))
}

/// Per-channel mean and population std of the first `rows` rows. Channels
/// that are constant to rounding get std 1.
fn channel_stats(values: &DataMatrix, rows: usize) -> (Vec<f64>, Vec<f64>) {
    let s = values.cols();
    let rows = rows.min(values.rows());
    let mut mean = vec![0.0; s];
    for i in 0..rows {
        for (m, &v) in mean.iter_mut().zip(values.row(i)) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= rows as f64);
    let mut var = vec![0.0; s];
    for i in 0..rows {
        for ((acc, &v), &m) in var.iter_mut().zip(values.row(i)).zip(&mean) {
            *acc += (v - m) * (v - m);
        }
    }
    let std = var
        .iter()
        .zip(&mean)
        .map(|(&v, &m)| {
            let sd = (v / rows as f64).sqrt();
            if sd > 1e-8 * m.abs().max(1.0) {
                sd
            } else {
                1.0
            }
        })
        .collect();
    (mean, std)
}

fn clip(grad: &mut [f64], max_norm: f64) {
    let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
    if norm > max_norm {
        let f = max_norm / norm;
        grad.iter_mut().for_each(|g| *g *= f);
    }
}

struct Adam {
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
    lr: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
}

impl Adam {
    fn new(len: usize, cfg: &TrainConfig) -> Self {
        Adam {
            m: vec![0.0; len],
            v: vec![0.0; len],
            t: 0,
            lr: cfg.learning_rate,
            beta1: cfg.adam_beta1,
            beta2: cfg.adam_beta2,
            eps: cfg.adam_eps,
        }
    }

    fn step(&mut self, params: &mut [f64], grad: &[f64]) {
        self.t += 1;
        let c1 = 1.0 - self.beta1.powi(self.t);
        let c2 = 1.0 - self.beta2.powi(self.t);
        for ((p, &g), (m, v)) in params.iter_mut().zip(grad).zip(self.m.iter_mut().zip(self.v.iter_mut())) {
            *m = self.beta1 * *m + (1.0 - self.beta1) * g;
            *v = self.beta2 * *v + (1.0 - self.beta2) * g * g;
            *p -= self.lr * (*m / c1) / ((*v / c2).sqrt() + self.eps);
        }
    }
}

/// Closed-loop forecast: each prediction is appended to the window and the
/// oldest row dropped.
pub fn predict_multistep(model: &LstmModel, seed_window: &DataMatrix, horizon: usize) -> Result<DataMatrix> {
    if horizon == 0 {
        return Err(Error::validation("horizon must be >= 1"));
    }
    let s = model.dims().input;
    if seed_window.cols() != s {
        return Err(Error::validation(format!(
            "seed window has {} channels, model expects {s}",
            seed_window.cols()
        )));
    }
    let mut window = seed_window.clone();
    let mut out = Vec::with_capacity(horizon * s);
    for _ in 0..horizon {
        let next = model.predict(&window)?;
        let buf = window.as_mut_slice();
        buf.copy_within(s.., 0);
        let len = buf.len();
        buf[len - s..].copy_from_slice(&next);
        out.extend_from_slice(&next);
    }
    Ok(DataMatrix::from_vec(horizon, s, out))
}

pub fn rmse(pred: &DataMatrix, truth: &DataMatrix) -> Result<f64> {
    if pred.shape() != truth.shape() {
        return Err(Error::validation(format!(
            "shape mismatch: {:?} vs {:?}",
            pred.shape(),
            truth.shape()
        )));
    }
    let sq: f64 = pred
        .as_slice()
        .iter()
        .zip(truth.as_slice())
        .map(|(p, t)| (p - t) * (p - t))
        .sum();
    Ok((sq / pred.as_slice().len() as f64).sqrt())
}
