//! Place sensors on POD modes, keep only their readings, and rebuild the
//! full frames from them.

use sparsesense::osp::{compress, compression_ratio, fit_basis, reconstruct, SensorBasis};
use sparsesense::pipeline::io::encode_matrix;
use sparsesense::synth::{generate_ground_truth, GroundTruthSpec};

fn main() -> sparsesense::Result<()> {
    let (m, n, r) = (4800, 300, 6);
    let field = generate_ground_truth(&GroundTruthSpec::new(m, n, r, 3))?;

    for s in [r, r + 4] {
        let basis = fit_basis(&field, r, s)?;
        let y = compress(&field, &basis)?;
        let back = reconstruct(&y.values, &basis)?;
        let err = back.sub(&field).frobenius_norm() / field.frobenius_norm();
        println!("s = {s:2}  sensors {:?}  relative error {err:.2e}", basis.sorted_indices());
    }

    let basis = fit_basis(&field, r, r)?;
    let stored = basis.to_bytes().len() + encode_matrix(&compress(&field, &basis)?.values).len();
    let full = encode_matrix(&field).len();
    println!(
        "alpha = {}  bytes {stored} of {full} ({:.2}%)",
        compression_ratio(m, r)?,
        100.0 * stored as f64 / full as f64
    );

    let decoded = SensorBasis::from_bytes(&basis.to_bytes())?;
    assert_eq!(decoded, basis);
    Ok(())
}
