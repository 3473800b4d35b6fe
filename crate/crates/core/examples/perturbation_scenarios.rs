//! The four perturbation scenarios applied to one synthetic field.

use sparsesense::synth::{apply_scenario, generate_ground_truth, GroundTruthSpec, Scenario, ScenarioSpec, Touched};

fn main() -> sparsesense::Result<()> {
    let truth = generate_ground_truth(&GroundTruthSpec::new(1200, 80, 3, 1))?;
    let total = truth.rows() * truth.cols();
    for id in 1..=4 {
        let scenario = Scenario::from_id(id)?;
        let out = apply_scenario(&truth, &ScenarioSpec::new(scenario, 42))?;
        let diff = out.data.sub(&truth);
        let parts: Vec<String> = out
            .components
            .iter()
            .map(|(c, t)| match t {
                Touched::All => format!("{} everywhere", c.name()),
                Touched::Entries(e) => format!("{} on {}", c.name(), e.len()),
            })
            .collect();
        println!(
            "scenario {id}: {:<62} change rms {:6.3}  max {:6.2}  mask {}/{total}",
            parts.join(", "),
            diff.frobenius_norm() / (total as f64).sqrt(),
            diff.max_abs(),
            out.mask.len()
        );
    }
    Ok(())
}
