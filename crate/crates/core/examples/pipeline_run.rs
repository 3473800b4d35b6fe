//! All six pipeline stages on a small synthetic run, written to a
//! temporary directory.

use sparsesense::pipeline::{run_all, PipelineConfig, RunReport, Variant};

const CONFIG: &str = "
seed = 3
synth.m = 240
synth.n = 400
synth.rank = 4
synth.jitter = 0.6
synth.scenario = 3
rpca.mu = spectral
rpca.mu_growth = 1.5
osp.r = 4
osp.s = 6
train.window = 30
train.horizon = 40
train.epochs = 8
train.hidden = 24
train.dense = 24
train.learning_rate = 3e-3
train.dropout = 0
evaluate.frames = 2
";

fn main() -> sparsesense::Result<()> {
    let dir = std::env::temp_dir().join(format!("sparsesense-example-{}", std::process::id()));
    let mut cfg = PipelineConfig::parse(CONFIG)?;
    cfg.out_dir = dir.clone();
    for outcome in run_all(&cfg)? {
        println!("{:<9} {:>8.1} ms", outcome.stage.name(), outcome.millis);
    }
    let report = RunReport::load(&dir)?.expect("report written");
    println!("compression ratio {:?}", report.compression_ratio());
    for v in [Variant::Interp, Variant::Raw] {
        let curve = report.rmse_per_step(v).unwrap_or_default();
        let mean = curve.iter().sum::<f64>() / curve.len().max(1) as f64;
        println!("{:>6}: mean rmse {mean:.3} over {} steps", v.name(), curve.len());
    }
    for entry in &report.manifest {
        println!("{:<28} {:>9} {}", entry.path, entry.bytes, &entry.sha256[..16]);
    }
    std::fs::remove_dir_all(&dir).ok();
    Ok(())
}
