//! Flat `key = value` configuration.
//!
//! Keys carry a section prefix (`rpca.lambda = 0.006`); `#` starts a
//! comment. Every seed in a run derives from the top-level `seed`.

use std::fs;
use std::path::{Path, PathBuf};

use crate::decompose::{Param, Penalty, RpcaConfig};
use crate::error::{Error, Result};
use crate::forecast::TrainConfig;
use crate::rng::derive_seed;
use crate::synth::{GroundTruthSpec, Scenario, ScenarioSpec};

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    pub seed: u64,
    pub out_dir: PathBuf,
    /// Data matrix to clean instead of the synthetic one.
    pub input: Option<PathBuf>,
    /// Sample times for `input`, an `n × 1` matrix; uniform spacing
    /// `train.dt` when absent.
    pub input_timestamps: Option<PathBuf>,
    pub truth: GroundTruthSpec,
    pub scenario: ScenarioSpec,
    pub rpca: RpcaConfig,
    pub r: usize,
    pub s: usize,
    pub train: TrainConfig,
    /// Grid spacing for the interpolated variant.
    pub dt: f64,
    /// The primary model is trained on interpolated data.
    pub interpolate: bool,
    /// Also train the other variant so the two can be compared.
    pub compare: bool,
    /// PGM dumps of truth and prediction at this many horizon steps.
    pub frames: usize,
    /// Frame width in pixels; 0 picks a 4:3 divisor of `m`.
    pub frame_width: usize,
    /// Windows used to time one epoch on `s` versus `m` channels; 0 skips.
    pub cost_probe_windows: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let mut truth = GroundTruthSpec::new(2000, 1000, 10, 0);
        truth.jitter = 0.5;
        let mut cfg = PipelineConfig {
            seed: 0,
            out_dir: PathBuf::from("out"),
            input: None,
            input_timestamps: None,
            truth,
            scenario: ScenarioSpec::new(Scenario::Superposition, 0),
            rpca: RpcaConfig::default(),
            r: 10,
            s: 10,
            train: TrainConfig::default(),
            dt: 0.5,
            interpolate: true,
            compare: true,
            frames: 3,
            frame_width: 0,
            cost_probe_windows: 0,
        };
        cfg.set_seed(0);
        cfg
    }
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = PipelineConfig::parse(&text)?;
        // Relative paths inside the file are taken relative to the file.
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut cfg.input, &mut cfg.input_timestamps].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = PipelineConfig::default();
        let mut freqs_given = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::validation(format!("line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let at = |e: Error| Error::validation(format!("line {} ({key}): {e}", lineno + 1));
            cfg.set(key, value, &mut freqs_given).map_err(at)?;
        }
        if !freqs_given {
            cfg.truth.temporal_freqs = crate::synth::default_freqs(cfg.truth.rank);
        }
        cfg.set_seed(cfg.seed);
        cfg.validate()?;
        Ok(cfg)
    }

    fn set(&mut self, key: &str, v: &str, freqs_given: &mut bool) -> Result<()> {
        match key {
            "seed" => self.seed = num(v)?,
            "out" => self.out_dir = PathBuf::from(v),
            "input.path" => self.input = Some(PathBuf::from(v)),
            "input.timestamps" => self.input_timestamps = Some(PathBuf::from(v)),

            "synth.m" => self.truth.m = num(v)?,
            "synth.n" => self.truth.n = num(v)?,
            "synth.rank" => self.truth.rank = num(v)?,
            "synth.smoothness" => self.truth.smoothness = num(v)?,
            "synth.freqs" => {
                self.truth.temporal_freqs = list(v)?;
                *freqs_given = true;
            }
            "synth.dt" => self.truth.dt = num(v)?,
            "synth.jitter" => self.truth.jitter = num(v)?,
            "synth.baseline" => self.truth.baseline = num(v)?,
            "synth.amplitude" => self.truth.amplitude = num(v)?,
            "synth.scenario" => self.scenario.scenario = Scenario::from_id(num(v)?)?,
            "synth.noise_std" => self.scenario.noise_std = num(v)?,
            "synth.n_outliers" => self.scenario.n_outliers = num(v)?,
            "synth.outliers_per_frame" => self.scenario.outliers_per_frame = flag(v)?,
            "synth.outlier_ranges" => {
                let r = list(v)?;
                if r.len() != 4 {
                    return Err(Error::validation("outlier_ranges needs lo1,hi1,lo2,hi2"));
                }
                self.scenario.outlier_ranges = [(r[0], r[1]), (r[2], r[3])];
            }
            "synth.corruption_fraction" => self.scenario.corruption_fraction = num(v)?,
            "synth.corruption_interval" => {
                let r = list(v)?;
                if r.len() != 2 {
                    return Err(Error::validation("corruption_interval needs lo,hi"));
                }
                self.scenario.corruption_interval = (r[0], r[1]);
            }

            "rpca.lambda" => {
                self.rpca.lambda = if v == "auto" { Param::Auto } else { Param::Value(num(v)?) }
            }
            "rpca.mu" => {
                self.rpca.mu = match v {
                    "auto" => Penalty::Auto,
                    "spectral" => Penalty::Spectral,
                    _ => Penalty::Value(num(v)?),
                }
            }
            "rpca.max_iters" => self.rpca.max_iters = num(v)?,
            "rpca.tol" => self.rpca.tol = num(v)?,
            "rpca.mu_growth" => self.rpca.mu_growth = num(v)?,
            "rpca.mu_max" => self.rpca.mu_max = num(v)?,

            "osp.r" => self.r = num(v)?,
            "osp.s" => self.s = num(v)?,

            "train.window" => self.train.window = num(v)?,
            "train.horizon" => self.train.horizon = num(v)?,
            "train.learning_rate" => self.train.learning_rate = num(v)?,
            "train.epochs" => self.train.epochs = num(v)?,
            "train.batch_size" => self.train.batch_size = num(v)?,
            "train.hidden" => self.train.hidden_dim = num(v)?,
            "train.dense" => self.train.dense_dim = num(v)?,
            "train.dropout" => self.train.dropout = num(v)?,
            "train.clip_norm" => self.train.clip_norm = num(v)?,
            "train.validation_fraction" => self.train.validation_fraction = num(v)?,
            "train.adam_beta1" => self.train.adam_beta1 = num(v)?,
            "train.adam_beta2" => self.train.adam_beta2 = num(v)?,
            "train.adam_eps" => self.train.adam_eps = num(v)?,
            "train.dt" => self.dt = num(v)?,
            "train.interpolate" => self.interpolate = flag(v)?,
            "train.compare" => self.compare = flag(v)?,

            "evaluate.frames" => self.frames = num(v)?,
            "evaluate.frame_width" => self.frame_width = num(v)?,
            "evaluate.cost_probe_windows" => self.cost_probe_windows = num(v)?,
            _ => return Err(Error::validation(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Sets the run seed and re-derives every component seed from it.
    pub fn set_seed(&mut self, seed: u64) {
        self.seed = seed;
        self.truth.seed = derive_seed(seed, 1);
        self.scenario.seed = derive_seed(seed, 2);
        self.train.seed = derive_seed(seed, 3);
    }

    pub fn validate(&self) -> Result<()> {
        if self.input.is_none() {
            self.truth.validate()?;
            self.scenario.validate(self.truth.m, self.truth.n)?;
        }
        self.rpca.validate()?;
        self.train.validate()?;
        if self.r == 0 || self.s < self.r {
            return Err(Error::Constraint(format!(
                "need 1 <= r <= s, got r = {} and s = {}",
                self.r, self.s
            )));
        }
        if !(self.dt > 0.0) {
            return Err(Error::validation("train.dt must be > 0"));
        }
        Ok(())
    }
}

fn num<T: std::str::FromStr>(v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::validation(format!("cannot parse {v:?}")))
}

fn flag(v: &str) -> Result<bool> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::validation(format!("expected true or false, got {v:?}"))),
    }
}

fn list(v: &str) -> Result<Vec<f64>> {
    v.split(',').map(|f| num(f.trim())).collect()
}
