//! Forecast irregularly sampled sensor streams with the LSTM, training
//! once on the raw samples and once on a uniform interpolated grid.
//!
//! cargo run --release --example lstm_forecast

use sparsesense::forecast::{interpolate_uniform, predict_multistep, train, TimeSeries, TrainConfig};
use sparsesense::osp::{compress, fit_basis};
use sparsesense::synth::{generate_ground_truth, ground_truth_at, sample_times, GroundTruthSpec};
use sparsesense::DataMatrix;

fn main() -> sparsesense::Result<()> {
    let mut spec = GroundTruthSpec::new(300, 700, 3, 5);
    spec.jitter = 0.8;
    let field = generate_ground_truth(&spec)?;
    let times = sample_times(&spec);
    let basis = fit_basis(&field, 3, 3)?;
    let y = compress(&field, &basis)?.values;

    let (hist, horizon, dt) = (600, 60, 0.5);
    let raw = TimeSeries::from_channel_rows(times[..hist].to_vec(), &y.columns_range(0, hist))?;
    let grid = interpolate_uniform(&raw, dt)?;
    let cfg = TrainConfig { epochs: 15, hidden_dim: 32, dense_dim: 32, learning_rate: 3e-3, dropout: 0.0, ..TrainConfig::default() };

    for (name, series, on_grid) in [("raw", &raw, false), ("interpolated", &grid, true)] {
        let (model, history) = train(series, &cfg)?;
        let seed = series.slice(series.len() - cfg.window, cfg.window).values().clone();
        let forecast = predict_multistep(&model, &seed, horizon)?;
        // Sensor truth at the times this variant forecasts.
        let future: Vec<f64> = if on_grid {
            let t0 = *series.timestamps().last().unwrap();
            (1..=horizon).map(|k| t0 + k as f64 * dt).collect()
        } else {
            times[hist..hist + horizon].to_vec()
        };
        let truth = ground_truth_at(&spec, &future)?.select_rows(basis.sensor_indices()).transpose();
        let err = step_rmse(&forecast, &truth);
        println!(
            "{name:>12}: val rmse {:.4}, forecast rmse at steps 1/20/60: {:.3} {:.3} {:.3}",
            history.val_rmse.last().unwrap(),
            err[0],
            err[19],
            err[59]
        );
    }
    Ok(())
}

fn step_rmse(pred: &DataMatrix, truth: &DataMatrix) -> Vec<f64> {
    (0..pred.rows())
        .map(|k| {
            let sq: f64 = pred.row(k).iter().zip(truth.row(k)).map(|(a, b)| (a - b).powi(2)).sum();
            (sq / pred.cols() as f64).sqrt()
        })
        .collect()
}
