//! LSTM forecasting on measurement streams: resampling, windowing,
//! training and closed-loop prediction.

mod codec;
mod model;
mod series;
mod train;

pub use model::{LstmDims, LstmModel, ParamLayout};
pub use series::{grid_steps, interpolate_uniform, make_windows, TimeSeries, WindowSet};
pub use train::{predict_multistep, rmse, train, TrainConfig, TrainHistory};
