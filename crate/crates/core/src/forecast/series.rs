use crate::error::{Error, Result};
use crate::linalg::DataMatrix;

/// Samples of `s` channels over time, one row per sample.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    timestamps: Vec<f64>,
    values: DataMatrix,
}

impl TimeSeries {
    pub fn new(timestamps: Vec<f64>, values: DataMatrix) -> Result<Self> {
        if timestamps.len() != values.rows() {
            return Err(Error::validation(format!(
                "{} timestamps for {} samples",
                timestamps.len(),
                values.rows()
            )));
        }
        if timestamps.iter().any(|t| !t.is_finite()) {
            return Err(Error::validation("timestamps must be finite"));
        }
        if timestamps.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::validation("timestamps must be nondecreasing"));
        }
        values.ensure_finite()?;
        Ok(TimeSeries { timestamps, values })
    }

    /// Samples at `0, dt, 2dt, …`.
    pub fn uniform(values: DataMatrix, dt: f64) -> Result<Self> {
        let t = (0..values.rows()).map(|k| k as f64 * dt).collect();
        TimeSeries::new(t, values)
    }

    /// Builds a series from a channels × time matrix such as OSP measurements.
    pub fn from_channel_rows(timestamps: Vec<f64>, channels: &DataMatrix) -> Result<Self> {
        TimeSeries::new(timestamps, channels.transpose())
    }

    pub fn timestamps(&self) -> &[f64] {
        &self.timestamps
    }

    pub fn values(&self) -> &DataMatrix {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.timestamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timestamps.is_empty()
    }

    pub fn channels(&self) -> usize {
        self.values.cols()
    }

    /// Samples `[start, start + len)`.
    pub fn slice(&self, start: usize, len: usize) -> TimeSeries {
        let s = self.channels();
        TimeSeries {
            timestamps: self.timestamps[start..start + len].to_vec(),
            values: DataMatrix::from_vec(len, s, self.values.as_slice()[start * s..(start + len) * s].to_vec()),
        }
    }
}

/// Resamples onto the grid `t₀, t₀ + dt, …` (up to the last timestamp) by
/// per-channel linear interpolation. Samples sharing a timestamp are
/// averaged first.
pub fn interpolate_uniform(ts: &TimeSeries, dt: f64) -> Result<TimeSeries> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::validation(format!("dt must be > 0, got {dt}")));
    }
    let s = ts.channels();
    let (times, rows) = collapse_duplicates(ts);
    if times.len() < 2 {
        return Err(Error::Degenerate(
            "interpolation needs at least 2 distinct timestamps".into(),
        ));
    }

    let t0 = times[0];
    let span = times[times.len() - 1] - t0;
    let steps = grid_steps(span, dt);
    let mut out_t = Vec::with_capacity(steps + 1);
    let mut out_v = Vec::with_capacity((steps + 1) * s);
    let mut seg = 0;
    for k in 0..=steps {
        let t = t0 + k as f64 * dt;
        while seg + 2 < times.len() && times[seg + 1] < t {
            seg += 1;
        }
        let (ta, tb) = (times[seg], times[seg + 1]);
        let w = ((t - ta) / (tb - ta)).clamp(0.0, 1.0);
        let (a, b) = (&rows[seg * s..(seg + 1) * s], &rows[(seg + 1) * s..(seg + 2) * s]);
        out_v.extend(a.iter().zip(b).map(|(&va, &vb)| va + w * (vb - va)));
        out_t.push(t);
    }
    TimeSeries::new(out_t, DataMatrix::from_vec(steps + 1, s, out_v))
}

/// Number of whole `dt` steps that fit in `span`.
pub fn grid_steps(span: f64, dt: f64) -> usize {
    (span / dt * (1.0 + 1e-12)).floor() as usize
}

fn collapse_duplicates(ts: &TimeSeries) -> (Vec<f64>, Vec<f64>) {
    let s = ts.channels();
    let mut times: Vec<f64> = Vec::with_capacity(ts.len());
    let mut rows: Vec<f64> = Vec::with_capacity(ts.len() * s);
    let mut k = 0;
    while k < ts.len() {
        let t = ts.timestamps[k];
        let mut end = k + 1;
        while end < ts.len() && ts.timestamps[end] == t {
            end += 1;
        }
        let count = (end - k) as f64;
        let start = rows.len();
        rows.extend_from_slice(ts.values.row(k));
        for extra in k + 1..end {
            for (acc, &v) in rows[start..].iter_mut().zip(ts.values.row(extra)) {
                *acc += v;
            }
        }
        if end - k > 1 {
            rows[start..].iter_mut().for_each(|v| *v /= count);
        }
        times.push(t);
        k = end;
    }
    (times, rows)
}

/// Sliding windows over a series: sample `i` reads rows `[i, i + window)`
/// and targets row `i + window`.
#[derive(Clone, Debug)]
pub struct WindowSet {
    values: DataMatrix,
    window: usize,
    horizon: usize,
}

impl WindowSet {
    pub fn len(&self) -> usize {
        self.values.rows() - self.window
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Row-major `window × s` input of sample `i`.
    pub fn input(&self, i: usize) -> &[f64] {
        let s = self.values.cols();
        &self.values.as_slice()[i * s..(i + self.window) * s]
    }

    pub fn input_matrix(&self, i: usize) -> DataMatrix {
        DataMatrix::from_vec(self.window, self.values.cols(), self.input(i).to_vec())
    }

    pub fn target(&self, i: usize) -> &[f64] {
        self.values.row(i + self.window)
    }

    /// Rows `[i + window, i + window + horizon)`, when the series reaches
    /// that far.
    pub fn multistep_target(&self, i: usize) -> Option<DataMatrix> {
        let start = i + self.window;
        if start + self.horizon > self.values.rows() {
            return None;
        }
        let s = self.values.cols();
        let rows = &self.values.as_slice()[start * s..(start + self.horizon) * s];
        Some(DataMatrix::from_vec(self.horizon, s, rows.to_vec()))
    }
}

pub fn make_windows(ts: &TimeSeries, window: usize, horizon: usize) -> Result<WindowSet> {
    if window == 0 || horizon == 0 {
        return Err(Error::validation("window and horizon must be >= 1"));
    }
    if ts.len() < window + 1 {
        return Err(Error::validation(format!(
            "series of {} samples is too short for window {window}",
            ts.len()
        )));
    }
    Ok(WindowSet {
        values: ts.values.clone(),
        window,
        horizon,
    })
}
