use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use sparsesense::pipeline::{run_stage, PipelineConfig, Stage};

/// Clean, compress and forecast space × time data.
///
/// Exit codes: 0 success, 2 invalid input or configuration, 3 training
/// diverged, 4 file I/O failure.
#[derive(Parser)]
#[command(name = "sparsesense", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    #[arg(long)]
    config: PathBuf,
    /// Overrides the `seed` key of the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the `out` key of the config.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Command {
    Synth,
    Clean,
    Compress,
    Train,
    Predict,
    Evaluate,
    /// Every stage in order.
    Run,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: &Cli) -> sparsesense::Result<()> {
    let mut cfg = PipelineConfig::load(&cli.config)?;
    if let Some(seed) = cli.seed {
        cfg.set_seed(seed);
    }
    if let Some(out) = &cli.out {
        cfg.out_dir = out.clone();
    }
    let stages: &[Stage] = match cli.command {
        Command::Synth => &[Stage::Synth],
        Command::Clean => &[Stage::Clean],
        Command::Compress => &[Stage::Compress],
        Command::Train => &[Stage::Train],
        Command::Predict => &[Stage::Predict],
        Command::Evaluate => &[Stage::Evaluate],
        Command::Run => &Stage::ALL,
    };
    for &stage in stages {
        let outcome = run_stage(stage, &cfg)?;
        for w in &outcome.warnings {
            eprintln!("warning: {w}");
        }
        println!("{:<9} {:>10.1} ms  {}", stage.name(), outcome.millis, outcome.summary);
    }
    Ok(())
}
