//! Synthetic space × time data with known ground truth, and the four
//! perturbation scenarios (noise, outliers, corruptions, all three).

mod scenario;
mod truth;

pub use scenario::{apply_scenario, Component, Perturbed, Scenario, ScenarioSpec, Touched};
pub use truth::{default_freqs, generate_ground_truth, ground_truth_at, sample_times, GroundTruthSpec};
