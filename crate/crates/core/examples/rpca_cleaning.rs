//! Recover a thermal-like field from outlier-ridden frames and compare
//! robust PCA against plain PCA at the true rank.
//!
//! cargo run --release --example rpca_cleaning

use sparsesense::decompose::{pca_reconstruct, rpca, Penalty, RpcaConfig};
use sparsesense::synth::{apply_scenario, generate_ground_truth, GroundTruthSpec, Scenario, ScenarioSpec};

fn main() -> sparsesense::Result<()> {
    let truth = generate_ground_truth(&GroundTruthSpec::new(600, 200, 4, 7))?;
    let noisy = apply_scenario(&truth, &ScenarioSpec::new(Scenario::Outliers, 8))?;
    println!("{} of {} entries overwritten", noisy.mask.len(), truth.rows() * truth.cols());

    let cfg = RpcaConfig { mu: Penalty::Spectral, mu_growth: 1.5, ..RpcaConfig::default() };
    let res = rpca(&noisy.data, &cfg)?;
    println!(
        "rpca: {} iterations, converged {}, rank {}, residual {:.2e}",
        res.iterations,
        res.converged,
        res.rank,
        res.final_residual()
    );

    let rel = |m: &sparsesense::DataMatrix| m.sub(&truth).frobenius_norm() / truth.frobenius_norm();
    let pca = pca_reconstruct(&noisy.data, 4)?;
    println!("relative error  input {:.3e}  pca {:.3e}  rpca {:.3e}", rel(&noisy.data), rel(&pca), rel(&res.low_rank));

    let found = noisy.mask.iter().filter(|&&k| res.sparse.as_slice()[k] != 0.0).count();
    println!("sparse part flags {found}/{} outliers", noisy.mask.len());
    Ok(())
}
