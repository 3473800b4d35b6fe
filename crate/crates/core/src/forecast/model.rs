use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, DataMatrix};
use crate::rng::Stream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LstmDims {
    pub input: usize,
    pub hidden: usize,
    pub dense: usize,
    pub output: usize,
}

impl LstmDims {
    /// The Table I network for `channels` inputs and outputs.
    pub fn paper(channels: usize) -> Self {
        LstmDims {
            input: channels,
            hidden: 128,
            dense: 128,
            output: channels,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.input == 0 || self.hidden == 0 || self.dense == 0 || self.output == 0 {
            return Err(Error::validation("every LSTM dimension must be >= 1"));
        }
        if self.input != self.output {
            return Err(Error::validation(format!(
                "output dim {} must equal input dim {} for rollout",
                self.output, self.input
            )));
        }
        Ok(())
    }

    pub fn layout(&self) -> ParamLayout {
        let (i, h, d, o) = (self.input, self.hidden, self.dense, self.output);
        let mut at = 0;
        let mut take = |len: usize| {
            let r = at..at + len;
            at += len;
            r
        };
        let wx = take(4 * h * i);
        let wh = take(4 * h * h);
        let b = take(4 * h);
        let wd = take(d * h);
        let bd = take(d);
        let wo = take(o * d);
        let bo = take(o);
        ParamLayout { wx, wh, b, wd, bd, wo, bo }
    }

    pub fn param_count(&self) -> usize {
        self.layout().bo.end
    }
}

/// Where each tensor lives in the flat parameter vector. Gate blocks are
/// stacked in the order input, forget, candidate, output; matrices are
/// row-major with one row per output unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamLayout {
    /// `4H × I`
    pub wx: Range<usize>,
    /// `4H × H`
    pub wh: Range<usize>,
    pub b: Range<usize>,
    /// `D × H`
    pub wd: Range<usize>,
    pub bd: Range<usize>,
    /// `O × D`
    pub wo: Range<usize>,
    pub bo: Range<usize>,
}

/// LSTM layer, dropout, ReLU dense layer and linear output, applied to
/// z-scored inputs.
#[derive(Clone, Debug, PartialEq)]
pub struct LstmModel {
    dims: LstmDims,
    dropout: f64,
    norm_mean: Vec<f64>,
    norm_std: Vec<f64>,
    params: Vec<f64>,
}

impl LstmModel {
    /// All weights zero and identity normalisation.
    pub fn zeros(dims: LstmDims, dropout: f64) -> Result<Self> {
        dims.validate()?;
        if !(0.0..1.0).contains(&dropout) {
            return Err(Error::validation(format!("dropout must lie in [0, 1), got {dropout}")));
        }
        Ok(LstmModel {
            dims,
            dropout,
            norm_mean: vec![0.0; dims.input],
            norm_std: vec![1.0; dims.input],
            params: vec![0.0; dims.param_count()],
        })
    }

    /// Glorot-uniform weights per tensor, zero biases except a forget-gate
    /// bias of one.
    pub fn init(dims: LstmDims, dropout: f64, seed: u64) -> Result<Self> {
        let mut model = LstmModel::zeros(dims, dropout)?;
        let lay = dims.layout();
        let (i, h, d, o) = (dims.input, dims.hidden, dims.dense, dims.output);
        let mut rng = Stream::new(seed);
        for (range, fan_in, fan_out) in [
            (lay.wx.clone(), i, 4 * h),
            (lay.wh.clone(), h, 4 * h),
            (lay.wd.clone(), h, d),
            (lay.wo.clone(), d, o),
        ] {
            let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
            for w in &mut model.params[range] {
                *w = rng.uniform_in(-limit, limit);
            }
        }
        model.params[lay.b.start + h..lay.b.start + 2 * h].fill(1.0);
        Ok(model)
    }

    pub fn from_parts(
        dims: LstmDims,
        dropout: f64,
        norm_mean: Vec<f64>,
        norm_std: Vec<f64>,
        params: Vec<f64>,
    ) -> Result<Self> {
        let mut model = LstmModel::zeros(dims, dropout)?;
        model.set_normalization(norm_mean, norm_std)?;
        model.set_params(params)?;
        Ok(model)
    }

    pub fn dims(&self) -> LstmDims {
        self.dims
    }

    pub fn dropout(&self) -> f64 {
        self.dropout
    }

    pub fn norm_mean(&self) -> &[f64] {
        &self.norm_mean
    }

    pub fn norm_std(&self) -> &[f64] {
        &self.norm_std
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn set_params(&mut self, params: Vec<f64>) -> Result<()> {
        if params.len() != self.params.len() {
            return Err(Error::validation(format!(
                "expected {} parameters, got {}",
                self.params.len(),
                params.len()
            )));
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::validation("parameters must be finite"));
        }
        self.params = params;
        Ok(())
    }

    pub fn set_normalization(&mut self, mean: Vec<f64>, std: Vec<f64>) -> Result<()> {
        if mean.len() != self.dims.input || std.len() != self.dims.input {
            return Err(Error::validation("normalisation statistics must have one entry per channel"));
        }
        if std.iter().any(|&s| !(s > 0.0 && s.is_finite())) || mean.iter().any(|m| !m.is_finite()) {
            return Err(Error::validation("normalisation std must be positive and finite"));
        }
        self.norm_mean = mean;
        self.norm_std = std;
        Ok(())
    }

    pub fn normalize(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(&self.norm_mean)
            .zip(&self.norm_std)
            .map(|((&x, &m), &s)| (x - m) / s)
            .collect()
    }

    pub fn denormalize(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(&self.norm_mean)
            .zip(&self.norm_std)
            .map(|((&z, &m), &s)| z * s + m)
            .collect()
    }

    pub(crate) fn normalize_rows(&self, values: &DataMatrix) -> DataMatrix {
        let s = self.dims.input;
        let mut out = values.clone();
        for row in out.as_mut_slice().chunks_exact_mut(s) {
            for ((x, &m), &sd) in row.iter_mut().zip(&self.norm_mean).zip(&self.norm_std) {
                *x = (*x - m) / sd;
            }
        }
        out
    }

    fn check_window(&self, window: &DataMatrix) -> Result<()> {
        if window.cols() != self.dims.input {
            return Err(Error::validation(format!(
                "window has {} channels, model expects {}",
                window.cols(),
                self.dims.input
            )));
        }
        window.ensure_finite()
    }

    /// One-step prediction from a raw `window × s` matrix, dropout off.
    pub fn predict(&self, window: &DataMatrix) -> Result<Vec<f64>> {
        self.check_window(window)?;
        let x = self.normalize_rows(window);
        let mut trace = Trace::new(&self.dims, window.rows());
        self.forward(x.as_slice(), &mut trace);
        Ok(self.denormalize(&trace.y))
    }

    /// Final hidden and cell state after reading a normalised window.
    pub fn final_state(&self, window: &DataMatrix) -> Result<(Vec<f64>, Vec<f64>)> {
        self.check_window(window)?;
        let steps = window.rows();
        let mut trace = Trace::new(&self.dims, steps);
        self.forward(window.as_slice(), &mut trace);
        let h = self.dims.hidden;
        let last = (steps - 1) * h..steps * h;
        Ok((trace.h[last.clone()].to_vec(), trace.c[last].to_vec()))
    }

    /// Mean squared error over a batch of raw windows and raw targets,
    /// measured in normalised units, and its gradient with respect to the
    /// flat parameters. Dropout is off.
    pub fn loss_and_gradient(&self, windows: &[DataMatrix], targets: &[Vec<f64>]) -> Result<(f64, Vec<f64>)> {
        if windows.len() != targets.len() || windows.is_empty() {
            return Err(Error::validation("need one target per window and at least one window"));
        }
        let mut grad = vec![0.0; self.params.len()];
        let scale = 1.0 / (windows.len() * self.dims.output) as f64;
        let mut loss = 0.0;
        for (w, t) in windows.iter().zip(targets) {
            self.check_window(w)?;
            if t.len() != self.dims.output {
                return Err(Error::validation("target length differs from output dim"));
            }
            let x = self.normalize_rows(w);
            let target = self.normalize(t);
            let mut trace = Trace::new(&self.dims, w.rows());
            self.forward(x.as_slice(), &mut trace);
            loss += self.accumulate(&mut trace, &target, scale, &mut grad);
        }
        Ok((loss * scale, grad))
    }

    /// The loss half of [`loss_and_gradient`](Self::loss_and_gradient).
    pub fn loss(&self, windows: &[DataMatrix], targets: &[Vec<f64>]) -> Result<f64> {
        let mut total = 0.0;
        for (w, t) in windows.iter().zip(targets) {
            self.check_window(w)?;
            let x = self.normalize_rows(w);
            let target = self.normalize(t);
            let mut trace = Trace::new(&self.dims, w.rows());
            self.forward(x.as_slice(), &mut trace);
            total += trace.y.iter().zip(&target).map(|(y, t)| (y - t).powi(2)).sum::<f64>();
        }
        Ok(total / (windows.len() * self.dims.output) as f64)
    }

    /// Forward pass over a normalised row-major window. When
    /// `tr.mask_in_use` is set, `tr.mask` holds the inverted-dropout
    /// multipliers for the last hidden state.
    pub(crate) fn forward(&self, x: &[f64], tr: &mut Trace) {
        let LstmDims { input: ni, hidden: nh, dense: nd, output: no } = self.dims;
        let steps = x.len() / ni;
        tr.resize(&self.dims, steps);
        tr.x.clear();
        tr.x.extend_from_slice(x);
        let lay = self.dims.layout();
        let p = &self.params;
        let g4 = 4 * nh;

        // Input projections for every step at once, one weight row at a time.
        let wx = &p[lay.wx.clone()];
        let bias = &p[lay.b.clone()];
        for r in 0..g4 {
            let row = &wx[r * ni..(r + 1) * ni];
            for t in 0..steps {
                tr.gates[t * g4 + r] = bias[r] + dot(row, &x[t * ni..(t + 1) * ni]);
            }
        }

        let wh = &p[lay.wh.clone()];
        for t in 0..steps {
            let (done, rest) = tr.h.split_at_mut(t * nh);
            let gates = &mut tr.gates[t * g4..(t + 1) * g4];
            if t > 0 {
                let h_prev = &done[(t - 1) * nh..];
                for (r, a) in gates.iter_mut().enumerate() {
                    *a += dot(&wh[r * nh..(r + 1) * nh], h_prev);
                }
            }
            for a in &mut gates[..2 * nh] {
                *a = sigmoid(*a);
            }
            for a in &mut gates[2 * nh..3 * nh] {
                *a = a.tanh();
            }
            for a in &mut gates[3 * nh..] {
                *a = sigmoid(*a);
            }
            let (c_done, c_rest) = tr.c.split_at_mut(t * nh);
            let c_t = &mut c_rest[..nh];
            let h_t = &mut rest[..nh];
            for k in 0..nh {
                let c_prev = if t > 0 { c_done[(t - 1) * nh + k] } else { 0.0 };
                let c = gates[nh + k] * c_prev + gates[k] * gates[2 * nh + k];
                c_t[k] = c;
                h_t[k] = gates[3 * nh + k] * c.tanh();
            }
        }

        let last = &tr.h[(steps - 1) * nh..steps * nh];
        if tr.mask_in_use {
            for k in 0..nh {
                tr.hd[k] = last[k] * tr.mask[k];
            }
        } else {
            tr.hd.copy_from_slice(last);
        }
        let wd = &p[lay.wd.clone()];
        let bd = &p[lay.bd.clone()];
        for r in 0..nd {
            let z = bd[r] + dot(&wd[r * nh..(r + 1) * nh], &tr.hd);
            tr.z[r] = z;
            tr.d[r] = z.max(0.0);
        }
        let wo = &p[lay.wo.clone()];
        let bo = &p[lay.bo.clone()];
        for r in 0..no {
            tr.y[r] = bo[r] + dot(&wo[r * nd..(r + 1) * nd], &tr.d);
        }
    }

    /// Backpropagates `scale · Σ (y − target)²` from a completed forward
    /// pass, adds the result into `grad` and returns the unscaled squared
    /// error.
    pub(crate) fn accumulate(&self, tr: &mut Trace, target: &[f64], scale: f64, grad: &mut [f64]) -> f64 {
        let LstmDims { input: ni, hidden: nh, dense: nd, output: no } = self.dims;
        let steps = tr.steps;
        let g4 = 4 * nh;
        let lay = self.dims.layout();
        let p = &self.params;

        let mut sq = 0.0;
        for r in 0..no {
            let e = tr.y[r] - target[r];
            sq += e * e;
            tr.dy[r] = 2.0 * scale * e;
        }

        // Output and dense layers.
        let wo = &p[lay.wo.clone()];
        tr.dd.fill(0.0);
        for r in 0..no {
            let g = tr.dy[r];
            grad[lay.bo.start + r] += g;
            axpy(g, &tr.d, &mut grad[lay.wo.start + r * nd..lay.wo.start + (r + 1) * nd]);
            axpy(g, &wo[r * nd..(r + 1) * nd], &mut tr.dd);
        }
        let wd = &p[lay.wd.clone()];
        tr.dh.fill(0.0);
        for r in 0..nd {
            if tr.z[r] <= 0.0 {
                continue;
            }
            let g = tr.dd[r];
            grad[lay.bd.start + r] += g;
            axpy(g, &tr.hd, &mut grad[lay.wd.start + r * nh..lay.wd.start + (r + 1) * nh]);
            axpy(g, &wd[r * nh..(r + 1) * nh], &mut tr.dh);
        }
        if tr.mask_in_use {
            for k in 0..nh {
                tr.dh[k] *= tr.mask[k];
            }
        }

        // Through time.
        let wh = &p[lay.wh.clone()];
        tr.dc.fill(0.0);
        for t in (0..steps).rev() {
            let gates = &tr.gates[t * g4..(t + 1) * g4];
            let da = &mut tr.da[t * g4..(t + 1) * g4];
            for k in 0..nh {
                let (i, f, g, o) = (gates[k], gates[nh + k], gates[2 * nh + k], gates[3 * nh + k]);
                let c = tr.c[t * nh + k];
                let c_prev = if t > 0 { tr.c[(t - 1) * nh + k] } else { 0.0 };
                let tc = c.tanh();
                let dh = tr.dh[k];
                let dc = tr.dc[k] + dh * o * (1.0 - tc * tc);
                da[k] = dc * g * i * (1.0 - i);
                da[nh + k] = dc * c_prev * f * (1.0 - f);
                da[2 * nh + k] = dc * i * (1.0 - g * g);
                da[3 * nh + k] = dh * tc * o * (1.0 - o);
                tr.dc[k] = dc * f;
            }
            for (acc, &a) in grad[lay.b.clone()].iter_mut().zip(da.iter()) {
                *acc += a;
            }
            tr.dh.fill(0.0);
            if t > 0 {
                let h_prev = &tr.h[(t - 1) * nh..t * nh];
                for r in 0..g4 {
                    let a = da[r];
                    if a == 0.0 {
                        continue;
                    }
                    axpy(a, h_prev, &mut grad[lay.wh.start + r * nh..lay.wh.start + (r + 1) * nh]);
                    axpy(a, &wh[r * nh..(r + 1) * nh], &mut tr.dh);
                }
            }
        }

        let x = &tr.x;
        for r in 0..g4 {
            let row = &mut grad[lay.wx.start + r * ni..lay.wx.start + (r + 1) * ni];
            for t in 0..steps {
                let a = tr.da[t * g4 + r];
                if a != 0.0 {
                    axpy(a, &x[t * ni..(t + 1) * ni], row);
                }
            }
        }
        sq
    }
}

#[inline]
fn sigmoid(a: f64) -> f64 {
    1.0 / (1.0 + (-a).exp())
}

/// Activations of one forward pass plus scratch space for the backward one.
#[derive(Debug, Default)]
pub(crate) struct Trace {
    steps: usize,
    pub(crate) x: Vec<f64>,
    gates: Vec<f64>,
    c: Vec<f64>,
    h: Vec<f64>,
    hd: Vec<f64>,
    pub(crate) mask: Vec<f64>,
    pub(crate) mask_in_use: bool,
    z: Vec<f64>,
    d: Vec<f64>,
    pub(crate) y: Vec<f64>,
    dy: Vec<f64>,
    dd: Vec<f64>,
    dh: Vec<f64>,
    dc: Vec<f64>,
    da: Vec<f64>,
}

impl Trace {
    pub(crate) fn new(dims: &LstmDims, steps: usize) -> Self {
        let mut t = Trace::default();
        t.resize(dims, steps);
        t
    }

    fn resize(&mut self, dims: &LstmDims, steps: usize) {
        let (nh, nd, no) = (dims.hidden, dims.dense, dims.output);
        self.steps = steps;
        self.gates.resize(steps * 4 * nh, 0.0);
        self.da.resize(steps * 4 * nh, 0.0);
        self.c.resize(steps * nh, 0.0);
        self.h.resize(steps * nh, 0.0);
        for v in [&mut self.hd, &mut self.mask, &mut self.dh, &mut self.dc] {
            v.resize(nh, 0.0);
        }
        for v in [&mut self.z, &mut self.d, &mut self.dd] {
            v.resize(nd, 0.0);
        }
        self.y.resize(no, 0.0);
        self.dy.resize(no, 0.0);
    }
}
