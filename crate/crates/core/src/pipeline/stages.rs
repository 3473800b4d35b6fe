use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::config::PipelineConfig;
use super::io::{
    auto_frame_width, encode_matrix, frame_to_pgm, matrix_to_csv, read_bytes, read_matrix, sha256_hex, Staging,
};
use crate::decompose::rpca;
use crate::error::{Error, Result};
use crate::forecast::{
    grid_steps, interpolate_uniform, predict_multistep, train, LstmModel, TimeSeries, TrainConfig,
};
use crate::linalg::DataMatrix;
use crate::osp::{compress, compression_ratio, fit_basis, reconstruct, SensorBasis};
use crate::synth::{apply_scenario, generate_ground_truth, ground_truth_at, sample_times, Touched};

pub const TRUTH: &str = "truth.rbdm";
pub const PERTURBED: &str = "perturbed.rbdm";
pub const MASK: &str = "mask.csv";
pub const TIMESTAMPS: &str = "timestamps.csv";
pub const LOW_RANK: &str = "low_rank.rbdm";
pub const SPARSE: &str = "sparse.rbdm";
pub const RESIDUALS: &str = "residuals.csv";
pub const BASIS: &str = "basis.ospb";
pub const MEASUREMENTS: &str = "measurements.rbdm";
pub const TRAIN_HISTORY: &str = "train_history.csv";
pub const RMSE_CURVE: &str = "rmse_curve.csv";
pub const TIMINGS: &str = "timings.csv";
pub const REPORT: &str = "report.json";
pub const MANIFEST: &str = "manifest.json";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Synth,
    Clean,
    Compress,
    Train,
    Predict,
    Evaluate,
}

impl Stage {
    pub const ALL: [Stage; 6] = [
        Stage::Synth,
        Stage::Clean,
        Stage::Compress,
        Stage::Train,
        Stage::Predict,
        Stage::Evaluate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Synth => "synth",
            Stage::Clean => "clean",
            Stage::Compress => "compress",
            Stage::Train => "train",
            Stage::Predict => "predict",
            Stage::Evaluate => "evaluate",
        }
    }
}

/// Forecasting on raw sample order or on the uniform time grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Interp,
    Raw,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Interp => "interp",
            Variant::Raw => "raw",
        }
    }

    pub fn model_file(self) -> String {
        format!("model_{}.lstm", self.name())
    }

    pub fn sparse_file(self) -> String {
        format!("pred_sparse_{}.rbdm", self.name())
    }

    pub fn full_file(self) -> String {
        format!("pred_full_{}.rbdm", self.name())
    }
}

fn variants(cfg: &PipelineConfig) -> Vec<Variant> {
    let primary = if cfg.interpolate { Variant::Interp } else { Variant::Raw };
    let other = if cfg.interpolate { Variant::Raw } else { Variant::Interp };
    if cfg.compare {
        vec![primary, other]
    } else {
        vec![primary]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

/// Everything a run has reported so far, stored as `report.json`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct RunReport {
    pub seed: u64,
    pub stages: BTreeMap<String, Value>,
    /// Wall-clock milliseconds per stage.
    pub timings_ms: BTreeMap<String, f64>,
    /// Host-dependent measurements such as per-epoch times.
    pub timing_details: BTreeMap<String, Value>,
    pub manifest: Vec<ManifestEntry>,
}

impl RunReport {
    pub fn load(out_dir: &Path) -> Result<Option<RunReport>> {
        let path = out_dir.join(REPORT);
        if !path.exists() {
            return Ok(None);
        }
        let bytes = read_bytes(&path)?;
        serde_json::from_slice(&bytes).map(Some).map_err(|e| Error::Format {
            kind: "run report",
            reason: e.to_string(),
        })
    }

    pub fn compression_ratio(&self) -> Option<f64> {
        self.stages.get("compress")?.get("compression_ratio")?.as_f64()
    }

    pub fn rmse_per_step(&self, variant: Variant) -> Option<Vec<f64>> {
        let curve = self.stages.get("evaluate")?.get("rmse_per_step")?.get(variant.name())?;
        serde_json::from_value(curve.clone()).ok()
    }
}

#[derive(Clone, Debug)]
pub struct StageOutcome {
    pub stage: Stage,
    pub summary: Value,
    pub warnings: Vec<String>,
    pub written: Vec<PathBuf>,
    pub millis: f64,
}

struct Output {
    summary: Value,
    staging: Staging,
    warnings: Vec<String>,
    details: Option<Value>,
}

impl Output {
    fn new(summary: Value, staging: Staging) -> Self {
        Output { summary, staging, warnings: Vec::new(), details: None }
    }
}

/// Runs one stage: reads its inputs from `cfg.out_dir` (or `cfg.input`),
/// writes its outputs atomically, then refreshes the report and manifest.
pub fn run_stage(stage: Stage, cfg: &PipelineConfig) -> Result<StageOutcome> {
    cfg.validate()?;
    let started = Instant::now();
    let out = match stage {
        Stage::Synth => synth_stage(cfg)?,
        Stage::Clean => clean_stage(cfg)?,
        Stage::Compress => compress_stage(cfg)?,
        Stage::Train => train_stage(cfg)?,
        Stage::Predict => predict_stage(cfg)?,
        Stage::Evaluate => evaluate_stage(cfg)?,
    };
    let written: Vec<PathBuf> = out.staging.paths().map(Path::to_path_buf).collect();
    out.staging.commit()?;
    let millis = started.elapsed().as_secs_f64() * 1e3;

    let mut report = RunReport::load(&cfg.out_dir).ok().flatten().unwrap_or_default();
    report.seed = cfg.seed;
    report.stages.insert(stage.name().into(), out.summary.clone());
    report.timings_ms.insert(stage.name().into(), millis);
    if let Some(d) = out.details {
        report.timing_details.insert(stage.name().into(), d);
    }
    let mut finish = Staging::default();
    if stage == Stage::Evaluate {
        let mut csv = String::from("stage,ms\n");
        for s in Stage::ALL {
            if let Some(ms) = report.timings_ms.get(s.name()) {
                let _ = writeln!(csv, "{},{ms:.3}", s.name());
            }
        }
        finish.add(cfg.out_dir.join(TIMINGS), csv.into_bytes());
    }
    finish.commit()?;
    report.manifest = scan_manifest(&cfg.out_dir)?;
    let mut finish = Staging::default();
    finish.add(cfg.out_dir.join(MANIFEST), manifest_json(&report.manifest));
    finish.add(cfg.out_dir.join(REPORT), to_json(&report));
    finish.commit()?;

    Ok(StageOutcome {
        stage,
        summary: out.summary,
        warnings: out.warnings,
        written,
        millis,
    })
}

/// All six stages in order.
pub fn run_all(cfg: &PipelineConfig) -> Result<Vec<StageOutcome>> {
    Stage::ALL.iter().map(|&s| run_stage(s, cfg)).collect()
}

fn to_json<T: Serialize>(v: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(v).expect("report serialises");
    bytes.push(b'\n');
    bytes
}

fn manifest_json(entries: &[ManifestEntry]) -> Vec<u8> {
    to_json(&json!({ "files": entries }))
}

/// Hashes of every artifact under `dir`, sorted by path. The report, the
/// manifest itself and the timing table are left out because they hold
/// wall-clock measurements.
pub fn scan_manifest(dir: &Path) -> Result<Vec<ManifestEntry>> {
    let mut files = Vec::new();
    collect_files(dir, dir, &mut files)?;
    files.sort();
    files
        .into_iter()
        .filter(|rel| ![REPORT, MANIFEST, TIMINGS].contains(&rel.as_str()) && !rel.contains(".tmp"))
        .map(|rel| {
            let bytes = read_bytes(&dir.join(&rel))?;
            Ok(ManifestEntry {
                bytes: bytes.len() as u64,
                sha256: sha256_hex(&bytes),
                path: rel,
            })
        })
        .collect()
}

fn collect_files(root: &Path, dir: &Path, out: &mut Vec<String>) -> Result<()> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let path = entry.path();
        if path.is_dir() {
            collect_files(root, &path, out)?;
        } else {
            let rel = path.strip_prefix(root).unwrap_or(&path);
            let parts: Vec<String> = rel.components().map(|c| c.as_os_str().to_string_lossy().into_owned()).collect();
            out.push(parts.join("/"));
        }
    }
    Ok(())
}

fn synth_stage(cfg: &PipelineConfig) -> Result<Output> {
    let truth = generate_ground_truth(&cfg.truth)?;
    let times = sample_times(&cfg.truth);
    let perturbed = apply_scenario(&truth, &cfg.scenario)?;
    let (m, n) = truth.shape();

    let mut mask = String::from("component,row,col\n");
    let mut components = Vec::new();
    for (component, touched) in &perturbed.components {
        match touched {
            Touched::All => components.push(json!({ "component": component.name(), "touched": "all" })),
            Touched::Entries(idx) => {
                components.push(json!({ "component": component.name(), "touched": idx.len() }));
                for &k in idx {
                    let _ = writeln!(mask, "{},{},{}", component.name(), k / n, k % n);
                }
            }
        }
    }

    let mut st = Staging::default();
    st.add(cfg.out_dir.join(TRUTH), encode_matrix(&truth));
    st.add(cfg.out_dir.join(PERTURBED), encode_matrix(&perturbed.data));
    st.add(cfg.out_dir.join(MASK), mask.into_bytes());
    st.add(cfg.out_dir.join(TIMESTAMPS), matrix_to_csv(&DataMatrix::column_vector(&times)).into_bytes());
    let summary = json!({
        "m": m,
        "n": n,
        "rank": cfg.truth.rank,
        "scenario": cfg.scenario.scenario.id(),
        "components": components,
        "mask_entries": perturbed.mask.len(),
    });
    Ok(Output::new(summary, st))
}

fn clean_input(cfg: &PipelineConfig) -> PathBuf {
    cfg.input.clone().unwrap_or_else(|| cfg.out_dir.join(PERTURBED))
}

fn clean_stage(cfg: &PipelineConfig) -> Result<Output> {
    let x = read_matrix(&clean_input(cfg))?;
    let res = rpca(&x, &cfg.rpca)?;
    let mut csv = String::from("iteration,residual\n");
    for (k, r) in res.residual_history.iter().enumerate() {
        let _ = writeln!(csv, "{},{r:.16e}", k + 1);
    }
    let mut st = Staging::default();
    st.add(cfg.out_dir.join(LOW_RANK), encode_matrix(&res.low_rank));
    st.add(cfg.out_dir.join(SPARSE), encode_matrix(&res.sparse));
    st.add(cfg.out_dir.join(RESIDUALS), csv.into_bytes());
    let summary = json!({
        "iterations": res.iterations,
        "converged": res.converged,
        "final_residual": res.final_residual(),
        "tol": cfg.rpca.tol,
        "rank": res.rank,
        "lambda": res.lambda,
        "mu": res.mu,
    });
    let mut out = Output::new(summary, st);
    if !res.converged {
        out.warnings.push(format!(
            "rpca stopped after {} iterations at residual {:.3e} (tol {:.1e})",
            res.iterations,
            res.final_residual(),
            cfg.rpca.tol
        ));
    }
    Ok(out)
}

fn compress_stage(cfg: &PipelineConfig) -> Result<Output> {
    let l = read_matrix(&cfg.out_dir.join(LOW_RANK))?;
    let basis = fit_basis(&l, cfg.r, cfg.s)?;
    let y = compress(&l, &basis)?;
    let (m, n) = l.shape();
    let basis_bytes = basis.to_bytes();
    let y_bytes = encode_matrix(&y.values);
    let summary = json!({
        "m": m,
        "n": n,
        "r": cfg.r,
        "s": cfg.s,
        "sensor_indices": basis.sensor_indices(),
        "compression_ratio": compression_ratio(m, cfg.r)?,
        "full_bytes": encode_matrix(&l).len(),
        "stored_bytes": basis_bytes.len() + y_bytes.len(),
    });
    let mut st = Staging::default();
    st.add(cfg.out_dir.join(BASIS), basis_bytes);
    st.add(cfg.out_dir.join(MEASUREMENTS), y_bytes);
    Ok(Output::new(summary, st))
}

fn load_times(cfg: &PipelineConfig, n: usize) -> Result<Vec<f64>> {
    let times = match (&cfg.input, &cfg.input_timestamps) {
        (Some(_), None) => return Ok((0..n).map(|k| k as f64 * cfg.dt).collect()),
        (Some(_), Some(path)) => read_matrix(path)?,
        (None, _) => read_matrix(&cfg.out_dir.join(TIMESTAMPS))?,
    };
    if times.as_slice().len() != n || times.min_dim() != 1 {
        return Err(Error::validation(format!(
            "{} timestamps for {n} samples",
            times.as_slice().len()
        )));
    }
    Ok(times.into_vec())
}

/// Where history ends and which times the forecasts cover, shared by the
/// train, predict and evaluate stages.
#[derive(Clone, Debug)]
pub struct ForecastSplit {
    /// Raw samples `[0, n_hist)` are history.
    pub n_hist: usize,
    /// Last grid time inside the history.
    pub grid_end: f64,
    pub horizon: usize,
    pub dt: f64,
}

impl ForecastSplit {
    /// The latest cut that leaves `horizon` raw samples and `horizon` grid
    /// steps of data after it.
    pub fn new(times: &[f64], window: usize, horizon: usize, dt: f64) -> Result<Self> {
        let n = times.len();
        let t0 = times[0];
        let mut k = n.saturating_sub(horizon);
        while k > window {
            let steps = grid_steps(times[k - 1] - t0, dt);
            let grid_end = t0 + steps as f64 * dt;
            if steps >= window && times[n - 1] >= grid_end + horizon as f64 * dt {
                return Ok(ForecastSplit { n_hist: k, grid_end, horizon, dt });
            }
            k -= 1;
        }
        Err(Error::validation(format!(
            "{n} samples are too few for window {window} plus horizon {horizon}"
        )))
    }

    pub fn future_times(&self) -> Vec<f64> {
        (1..=self.horizon).map(|k| self.grid_end + k as f64 * self.dt).collect()
    }
}

/// History series for a variant, from the `s × n` measurements.
fn history(variant: Variant, y: &DataMatrix, times: &[f64], split: &ForecastSplit) -> Result<TimeSeries> {
    let all = TimeSeries::from_channel_rows(times.to_vec(), y)?;
    let raw = all.slice(0, split.n_hist);
    match variant {
        Variant::Raw => Ok(raw),
        Variant::Interp => interpolate_uniform(&raw, split.dt),
    }
}

fn seed_window(ts: &TimeSeries, window: usize) -> DataMatrix {
    let n = ts.len();
    let s = ts.channels();
    DataMatrix::from_vec(window, s, ts.values().as_slice()[(n - window) * s..].to_vec())
}

fn train_stage(cfg: &PipelineConfig) -> Result<Output> {
    let y = read_matrix(&cfg.out_dir.join(MEASUREMENTS))?;
    let times = load_times(cfg, y.cols())?;
    let split = ForecastSplit::new(&times, cfg.train.window, cfg.train.horizon, cfg.dt)?;
    let mut st = Staging::default();
    let mut csv = String::from("variant,epoch,train_rmse,val_rmse\n");
    let mut summary = serde_json::Map::new();
    let mut details = serde_json::Map::new();
    for v in variants(cfg) {
        let ts = history(v, &y, &times, &split)?;
        let (model, hist) = train(&ts, &cfg.train)?;
        for (e, tr) in hist.train_rmse.iter().enumerate() {
            let val = hist.val_rmse.get(e).map(|x| format!("{x:.16e}")).unwrap_or_default();
            let _ = writeln!(csv, "{},{},{tr:.16e},{val}", v.name(), e + 1);
        }
        summary.insert(
            v.name().into(),
            json!({
                "samples": ts.len(),
                "epochs": hist.train_rmse.len(),
                "final_train_rmse": hist.train_rmse.last(),
                "final_val_rmse": hist.val_rmse.last(),
            }),
        );
        details.insert(v.name().into(), json!({ "epoch_seconds": hist.epoch_seconds }));
        st.add(cfg.out_dir.join(v.model_file()), model.to_bytes());
    }
    summary.insert("history_end".into(), json!(split.n_hist));
    st.add(cfg.out_dir.join(TRAIN_HISTORY), csv.into_bytes());
    let mut out = Output::new(Value::Object(summary), st);
    out.details = Some(Value::Object(details));
    Ok(out)
}

fn predict_stage(cfg: &PipelineConfig) -> Result<Output> {
    let y = read_matrix(&cfg.out_dir.join(MEASUREMENTS))?;
    let basis = SensorBasis::from_bytes(&read_bytes(&cfg.out_dir.join(BASIS))?)?;
    let times = load_times(cfg, y.cols())?;
    let split = ForecastSplit::new(&times, cfg.train.window, cfg.train.horizon, cfg.dt)?;
    let mut st = Staging::default();
    let mut summary = serde_json::Map::new();
    for v in variants(cfg) {
        let model = LstmModel::from_bytes(&read_bytes(&cfg.out_dir.join(v.model_file()))?)?;
        let ts = history(v, &y, &times, &split)?;
        let seed = seed_window(&ts, cfg.train.window);
        let sparse = predict_multistep(&model, &seed, cfg.train.horizon)?.transpose();
        let full = reconstruct(&sparse, &basis)?;
        summary.insert(v.name().into(), json!({ "sparse_shape": sparse.shape(), "full_shape": full.shape() }));
        st.add(cfg.out_dir.join(v.sparse_file()), encode_matrix(&sparse));
        st.add(cfg.out_dir.join(v.full_file()), encode_matrix(&full));
    }
    Ok(Output::new(Value::Object(summary), st))
}

/// Reference for evaluation: the synthetic ground truth when the run made
/// one, otherwise the cleaned matrix.
fn reference(cfg: &PipelineConfig) -> Result<(DataMatrix, &'static str)> {
    let truth = cfg.out_dir.join(TRUTH);
    if cfg.input.is_none() && truth.exists() {
        Ok((read_matrix(&truth)?, "truth"))
    } else {
        Ok((read_matrix(&cfg.out_dir.join(LOW_RANK))?, "low_rank"))
    }
}

/// Columns of `x` (one per sample time) linearly interpolated at `query`.
fn interpolate_columns(x: &DataMatrix, times: &[f64], query: &[f64]) -> Result<DataMatrix> {
    let ts = TimeSeries::from_channel_rows(times.to_vec(), x)?;
    let mut out = DataMatrix::zeros(x.rows(), query.len());
    let mut seg = 0;
    let t = ts.timestamps();
    for (k, &q) in query.iter().enumerate() {
        while seg + 2 < t.len() && t[seg + 1] < q {
            seg += 1;
        }
        let w = if t[seg + 1] > t[seg] { ((q - t[seg]) / (t[seg + 1] - t[seg])).clamp(0.0, 1.0) } else { 1.0 };
        for i in 0..x.rows() {
            let (a, b) = (x[(i, seg)], x[(i, seg + 1)]);
            out[(i, k)] = a + w * (b - a);
        }
    }
    Ok(out)
}

fn per_step_rmse(pred: &DataMatrix, truth: &DataMatrix) -> Result<Vec<f64>> {
    if pred.shape() != truth.shape() {
        return Err(Error::validation(format!(
            "prediction {:?} and truth {:?} differ in shape",
            pred.shape(),
            truth.shape()
        )));
    }
    Ok((0..pred.cols())
        .map(|k| {
            let sq: f64 = (0..pred.rows()).map(|i| (pred[(i, k)] - truth[(i, k)]).powi(2)).sum();
            (sq / pred.rows() as f64).sqrt()
        })
        .collect())
}

fn evaluate_stage(cfg: &PipelineConfig) -> Result<Output> {
    let (reference, source) = reference(cfg)?;
    let (m, n) = reference.shape();
    let times = load_times(cfg, n)?;
    let split = ForecastSplit::new(&times, cfg.train.window, cfg.train.horizon, cfg.dt)?;
    let h = cfg.train.horizon;

    let mut curves: Vec<(Variant, Vec<f64>)> = Vec::new();
    let mut frames: Vec<(DataMatrix, DataMatrix)> = Vec::new();
    for v in variants(cfg) {
        let pred = read_matrix(&cfg.out_dir.join(v.full_file()))?;
        let truth = match v {
            Variant::Raw => {
                let idx: Vec<usize> = (split.n_hist..split.n_hist + h).collect();
                reference.transpose().select_rows(&idx).transpose()
            }
            // Synthetic runs can evaluate the field exactly on the grid.
            Variant::Interp if source == "truth" => ground_truth_at(&cfg.truth, &split.future_times())?,
            Variant::Interp => interpolate_columns(&reference, &times, &split.future_times())?,
        };
        curves.push((v, per_step_rmse(&pred, &truth)?));
        frames.push((truth, pred));
    }

    let mut csv = String::from("step");
    for (v, _) in &curves {
        let _ = write!(csv, ",rmse_{}", v.name());
    }
    csv.push('\n');
    for k in 0..h {
        let _ = write!(csv, "{}", k + 1);
        for (_, c) in &curves {
            let _ = write!(csv, ",{:.16e}", c[k]);
        }
        csv.push('\n');
    }
    let mut st = Staging::default();
    st.add(cfg.out_dir.join(RMSE_CURVE), csv.into_bytes());

    if cfg.frames > 0 {
        let width = if cfg.frame_width > 0 { cfg.frame_width } else { auto_frame_width(m) };
        if m % width != 0 {
            return Err(Error::validation(format!("frame width {width} does not divide {m} pixels")));
        }
        let (truth, pred) = &frames[0];
        let count = cfg.frames.min(h);
        for f in 0..count {
            let step = if count == 1 { 0 } else { f * (h - 1) / (count - 1) };
            for (name, mat) in [("truth", truth), ("pred", pred)] {
                let pgm = frame_to_pgm(&mat.column(step), width, m / width)?;
                st.add(cfg.out_dir.join(format!("frames/{name}_step{:03}.pgm", step + 1)), pgm);
            }
        }
    }

    let mut summary = serde_json::Map::new();
    summary.insert("reference".into(), json!(source));
    summary.insert("history_end".into(), json!(split.n_hist));
    let mut per_step = serde_json::Map::new();
    for (v, c) in &curves {
        per_step.insert(v.name().into(), json!(c));
        summary.insert(format!("mean_rmse_{}", v.name()), json!(c.iter().sum::<f64>() / h as f64));
    }
    summary.insert("rmse_per_step".into(), Value::Object(per_step));
    if let [(_, a), (_, b)] = &curves[..] {
        let (interp, raw) = if curves[0].0 == Variant::Interp { (a, b) } else { (b, a) };
        let wins = interp.iter().zip(raw).filter(|(i, r)| i <= r).count();
        summary.insert("steps_interp_le_raw".into(), json!(wins));
        summary.insert("fraction_interp_le_raw".into(), json!(wins as f64 / h as f64));
    }

    let mut out = Output::new(Value::Object(summary), st);
    if cfg.cost_probe_windows > 0 {
        out.details = Some(cost_probe(cfg)?);
    }
    Ok(out)
}

/// Times one training epoch on the `s` measurement channels and on all `m`
/// channels of the cleaned data, same architecture and window.
fn cost_probe(cfg: &PipelineConfig) -> Result<Value> {
    let y = read_matrix(&cfg.out_dir.join(MEASUREMENTS))?;
    let l = read_matrix(&cfg.out_dir.join(LOW_RANK))?;
    let len = (cfg.train.window + cfg.cost_probe_windows).min(l.cols());
    let probe = TrainConfig { epochs: 1, validation_fraction: 0.0, ..cfg.train.clone() };
    let mut seconds = Vec::new();
    for data in [&y, &l] {
        let ts = TimeSeries::uniform(data.columns_range(0, len).transpose(), cfg.dt)?;
        let (_, hist) = train(&ts, &probe)?;
        seconds.push(hist.epoch_seconds[0]);
    }
    Ok(json!({
        "cost_probe": {
            "windows": len - cfg.train.window,
            "epoch_seconds_sparse": seconds[0],
            "epoch_seconds_full": seconds[1],
            "ratio": seconds[1] / seconds[0],
        }
    }))
}
