//! The clean → compress → model workflow as file-to-file stages.

pub mod config;
pub mod io;
mod stages;

pub use config::PipelineConfig;
pub use stages::{
    run_all, run_stage, scan_manifest, ForecastSplit, ManifestEntry, RunReport, Stage, StageOutcome, Variant,
    BASIS, LOW_RANK, MANIFEST, MASK, MEASUREMENTS, PERTURBED, REPORT, RESIDUALS, RMSE_CURVE, SPARSE, TIMESTAMPS,
    TIMINGS, TRAIN_HISTORY, TRUTH,
};
