use std::fs;
use std::path::Path;
use std::process::Command;

use sparsesense::linalg::spectral_norm;
use sparsesense::osp::{compress, reconstruct, SensorBasis};
use sparsesense::pipeline::io::{decode_matrix, encode_matrix, matrix_to_csv, read_matrix};
use sparsesense::pipeline::*;
use sparsesense::synth::{generate_ground_truth, GroundTruthSpec};
use sparsesense::DataMatrix;

const SMALL: &str = "
seed = 5
synth.m = 48
synth.n = 260
synth.rank = 3
synth.jitter = 0.5
synth.scenario = 3
rpca.mu = spectral
rpca.mu_growth = 1.5
osp.r = 3
osp.s = 4
train.window = 12
train.horizon = 6
train.epochs = 2
train.hidden = 8
train.dense = 8
train.learning_rate = 3e-3
evaluate.frames = 2
";

fn small(out: &Path, extra: &str) -> PipelineConfig {
    let mut cfg = PipelineConfig::parse(&format!("{SMALL}\n{extra}")).unwrap();
    cfg.out_dir = out.to_path_buf();
    cfg
}

fn rbdm(dir: &Path, name: &str) -> DataMatrix {
    decode_matrix(&fs::read(dir.join(name)).unwrap()).unwrap()
}

#[test]
fn full_runs_have_identical_manifests() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run_all(&small(a.path(), "")).unwrap();
    run_all(&small(b.path(), "")).unwrap();
    let ma = fs::read(a.path().join(MANIFEST)).unwrap();
    assert_eq!(ma, fs::read(b.path().join(MANIFEST)).unwrap());
    let report = RunReport::load(a.path()).unwrap().unwrap();
    for entry in &report.manifest {
        assert!(a.path().join(&entry.path).exists(), "{}", entry.path);
    }
    let names: Vec<&str> = report.manifest.iter().map(|e| e.path.as_str()).collect();
    for f in [TRUTH, PERTURBED, LOW_RANK, BASIS, MEASUREMENTS, RMSE_CURVE, "model_interp.lstm", "pred_full_raw.rbdm"] {
        assert!(names.contains(&f), "{f} missing");
    }
    assert!(names.iter().any(|n| n.starts_with("frames/")));
    assert_eq!(report.rmse_per_step(Variant::Interp).unwrap().len(), 6);
}

#[test]
fn rerunning_one_stage_reproduces_its_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small(dir.path(), "");
    run_all(&cfg).unwrap();
    let before = fs::read(dir.path().join("pred_sparse_interp.rbdm")).unwrap();
    let basis = fs::read(dir.path().join(BASIS)).unwrap();
    run_stage(Stage::Compress, &cfg).unwrap();
    run_stage(Stage::Predict, &cfg).unwrap();
    assert_eq!(fs::read(dir.path().join(BASIS)).unwrap(), basis);
    assert_eq!(fs::read(dir.path().join("pred_sparse_interp.rbdm")).unwrap(), before);
    let decoded = SensorBasis::from_bytes(&basis).unwrap();
    assert_eq!(decoded.to_bytes(), basis);
}

#[test]
fn zero_input_cleans_to_zeros() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("zeros.csv");
    fs::write(&input, matrix_to_csv(&DataMatrix::zeros(7, 5))).unwrap();
    let mut cfg = small(&dir.path().join("out"), "");
    cfg.input = Some(input);
    run_stage(Stage::Clean, &cfg).unwrap();
    assert!(rbdm(&cfg.out_dir, LOW_RANK).is_zero());
    assert!(rbdm(&cfg.out_dir, SPARSE).is_zero());
    let report = RunReport::load(&cfg.out_dir).unwrap().unwrap();
    assert_eq!(report.stages["clean"]["converged"], true);
}

#[test]
fn recovery_instance_reports_convergence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small(dir.path(), "synth.scenario = 2\nsynth.n_outliers = 3");
    run_stage(Stage::Synth, &cfg).unwrap();
    run_stage(Stage::Clean, &cfg).unwrap();
    let clean = &RunReport::load(dir.path()).unwrap().unwrap().stages["clean"];
    assert_eq!(clean["converged"], true);
    assert!(clean["final_residual"].as_f64().unwrap() <= clean["tol"].as_f64().unwrap());
    let residuals = fs::read_to_string(dir.path().join(RESIDUALS)).unwrap();
    assert_eq!(residuals.lines().count(), clean["iterations"].as_u64().unwrap() as usize + 1);
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_sparsesense")).args(args).output().unwrap()
}

#[test]
fn non_finite_input_fails_without_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let mut bad = DataMatrix::from_fn(6, 4, |i, j| (i + j) as f64);
    bad[(2, 1)] = f64::NAN;
    fs::write(dir.path().join("bad.rbdm"), encode_matrix(&bad)).unwrap();
    let conf = dir.path().join("run.conf");
    fs::write(&conf, format!("{SMALL}\ninput.path = bad.rbdm\nout = out\n")).unwrap();
    let out = cli(&["clean", "--config", conf.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    let out_dir = dir.path().join("out");
    assert!(!out_dir.join(LOW_RANK).exists() && !out_dir.join(SPARSE).exists());
}

#[test]
fn cli_exit_codes_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    fs::write(&conf, SMALL).unwrap();
    let (c, o1, o2) = (conf.to_str().unwrap(), dir.path().join("a"), dir.path().join("b"));
    assert!(cli(&["synth", "--config", c, "--out", o1.to_str().unwrap()]).status.success());
    assert!(cli(&["synth", "--config", c, "--out", o2.to_str().unwrap(), "--seed", "6"]).status.success());
    assert_ne!(fs::read(o1.join(TRUTH)).unwrap(), fs::read(o2.join(TRUTH)).unwrap());

    let missing = cli(&["compress", "--config", c, "--out", dir.path().join("empty").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&missing.stderr).contains(LOW_RANK));

    fs::write(&conf, format!("{SMALL}\nosp.s = 2\n")).unwrap();
    assert_eq!(cli(&["synth", "--config", c]).status.code(), Some(2));
}

#[test]
fn full_image_synth_sizes_and_compression() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small(dir.path(), "synth.m = 19200\nsynth.n = 100\nsynth.rank = 10\nsynth.scenario = 2\nosp.r = 10\nosp.s = 10");
    run_stage(Stage::Synth, &cfg).unwrap();
    for f in [TRUTH, PERTURBED] {
        assert_eq!(fs::metadata(dir.path().join(f)).unwrap().len(), 16 + 8 * 19200 * 100);
    }
    // Compress the exact low-rank truth, skipping the cleaning stage.
    fs::copy(dir.path().join(TRUTH), dir.path().join(LOW_RANK)).unwrap();
    run_stage(Stage::Compress, &cfg).unwrap();
    let report = RunReport::load(dir.path()).unwrap().unwrap();
    assert_eq!(report.compression_ratio(), Some(1920.0));
    let truth = rbdm(dir.path(), TRUTH);
    let y = rbdm(dir.path(), MEASUREMENTS);
    assert_eq!(y.shape(), (10, 100));
    let basis = SensorBasis::from_bytes(&fs::read(dir.path().join(BASIS)).unwrap()).unwrap();
    let back = reconstruct(&y, &basis).unwrap();
    assert!(back.sub(&truth).frobenius_norm() <= 1e-8 * truth.frobenius_norm());
}

#[test]
fn one_step_prediction_is_reconstructed_through_the_basis() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small(dir.path(), "train.horizon = 1");
    run_all(&cfg).unwrap();
    let basis = SensorBasis::from_bytes(&fs::read(dir.path().join(BASIS)).unwrap()).unwrap();
    for v in [Variant::Interp, Variant::Raw] {
        let sparse = rbdm(dir.path(), &v.sparse_file());
        let full = rbdm(dir.path(), &v.full_file());
        assert_eq!((sparse.shape(), full.shape()), ((4, 1), (48, 1)));
        let expect = basis.modes().matmul(&basis.theta_pinv().matmul(&sparse));
        assert!(full.sub(&expect).max_abs() <= 1e-12 * expect.max_abs().max(1.0));
    }
}

#[test]
fn full_prediction_error_is_bounded_by_sparse_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small(dir.path(), "synth.scenario = 1\nsynth.noise_std = 0.5\ntrain.epochs = 4");
    run_all(&cfg).unwrap();
    let report = RunReport::load(dir.path()).unwrap().unwrap();
    let n_hist = report.stages["evaluate"]["history_end"].as_u64().unwrap() as usize;
    let truth = rbdm(dir.path(), TRUTH);
    let idx: Vec<usize> = (n_hist..n_hist + 6).collect();
    let x = truth.transpose().select_rows(&idx).transpose();
    let basis = SensorBasis::from_bytes(&fs::read(dir.path().join(BASIS)).unwrap()).unwrap();
    let y = compress(&x, &basis).unwrap().values;
    let y_hat = rbdm(dir.path(), &Variant::Raw.sparse_file());
    let x_hat = rbdm(dir.path(), &Variant::Raw.full_file());
    let projection_err = x.sub(&reconstruct(&y, &basis).unwrap()).frobenius_norm();
    let gain = spectral_norm(&basis.modes().matmul(basis.theta_pinv()));
    let bound = gain * y_hat.sub(&y).frobenius_norm() + projection_err;
    assert!(x_hat.sub(&x).frobenius_norm() <= 2.0 * bound);
}

#[test]
fn perfect_prediction_scores_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small(dir.path(), "train.interpolate = false\ntrain.compare = false\nevaluate.frames = 0");
    run_all(&cfg).unwrap();
    let report = RunReport::load(dir.path()).unwrap().unwrap();
    let n_hist = report.stages["evaluate"]["history_end"].as_u64().unwrap() as usize;
    let truth = rbdm(dir.path(), TRUTH);
    let idx: Vec<usize> = (n_hist..n_hist + 6).collect();
    let exact = truth.transpose().select_rows(&idx).transpose();
    fs::write(dir.path().join(Variant::Raw.full_file()), encode_matrix(&exact)).unwrap();
    run_stage(Stage::Evaluate, &cfg).unwrap();
    let report = RunReport::load(dir.path()).unwrap().unwrap();
    assert!(report.rmse_per_step(Variant::Raw).unwrap().iter().all(|&e| e == 0.0));
    assert!(report.rmse_per_step(Variant::Interp).is_none());
}

#[test]
fn superposition_report_lists_three_components() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small(dir.path(), "synth.scenario = 4\nsynth.n_outliers = 5");
    run_stage(Stage::Synth, &cfg).unwrap();
    let report = RunReport::load(dir.path()).unwrap().unwrap();
    let comps = report.stages["synth"]["components"].as_array().unwrap();
    let names: Vec<&str> = comps.iter().map(|c| c["component"].as_str().unwrap()).collect();
    assert_eq!(names.len(), 3);
    let mask = fs::read_to_string(dir.path().join(MASK)).unwrap();
    assert!(mask.lines().skip(1).all(|l| names.iter().any(|n| l.starts_with(n))));
}

#[test]
fn matrix_files_round_trip_through_csv() {
    let dir = tempfile::tempdir().unwrap();
    let g = generate_ground_truth(&GroundTruthSpec::new(9, 4, 2, 1)).unwrap();
    let csv = dir.path().join("g.csv");
    fs::write(&csv, matrix_to_csv(&g)).unwrap();
    assert_eq!(read_matrix(&csv).unwrap(), g);
}
