//! Optimal sensor placement.
//!
//! POD modes `Ψ_r` (leading left singular vectors of the cleaned data) are
//! sampled at `s` rows chosen by QR column pivoting on `Ψ_rᵀ`. A state is
//! recovered from its samples `y = Cx` as `x̂ = Ψ_r (CΨ_r)† y`, where `C` is
//! kept in index form.

mod codec;

use crate::error::{check_range, Error, Result};
use crate::linalg::{pseudoinverse, qr_column_pivot, svd_truncated, DataMatrix, PIVOT_TIE_TOL};

pub use codec::{BASIS_MAGIC, BASIS_VERSION};

/// Fitted placement: modes, chosen rows and the precomputed `(CΨ_r)†`.
#[derive(Clone, Debug, PartialEq)]
pub struct SensorBasis {
    modes: DataMatrix,
    sensor_indices: Vec<usize>,
    sorted_indices: Vec<usize>,
    theta_pinv: DataMatrix,
}

impl SensorBasis {
    /// Assembles a basis from its parts, recomputing `(CΨ_r)†`.
    pub fn from_parts(modes: DataMatrix, sensor_indices: Vec<usize>) -> Result<Self> {
        let (m, r) = modes.shape();
        let s = sensor_indices.len();
        if s < r {
            return Err(Error::Constraint(format!(
                "sensor count s = {s} must satisfy s >= r = {r}"
            )));
        }
        let mut sorted_indices = sensor_indices.clone();
        sorted_indices.sort_unstable();
        if sorted_indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::validation("sensor indices must be distinct"));
        }
        if let Some(&bad) = sorted_indices.last().filter(|&&i| i >= m) {
            return Err(Error::Bounds {
                what: "sensor index",
                value: bad,
                min: 0,
                max: m - 1,
            });
        }
        let theta = modes.select_rows(&sensor_indices);
        let theta_pinv = pseudoinverse(&theta)?;
        Ok(SensorBasis {
            modes,
            sensor_indices,
            sorted_indices,
            theta_pinv,
        })
    }

    pub(crate) fn from_raw(modes: DataMatrix, sensor_indices: Vec<usize>, theta_pinv: DataMatrix) -> Self {
        let mut sorted_indices = sensor_indices.clone();
        sorted_indices.sort_unstable();
        SensorBasis {
            modes,
            sensor_indices,
            sorted_indices,
            theta_pinv,
        }
    }

    /// `m × r` orthonormal POD modes.
    pub fn modes(&self) -> &DataMatrix {
        &self.modes
    }

    /// Chosen rows in selection order.
    pub fn sensor_indices(&self) -> &[usize] {
        &self.sensor_indices
    }

    pub fn sorted_indices(&self) -> &[usize] {
        &self.sorted_indices
    }

    /// `r × s` pseudoinverse of the sampled modes.
    pub fn theta_pinv(&self) -> &DataMatrix {
        &self.theta_pinv
    }

    /// `CΨ_r`, the `s × r` sampled modes.
    pub fn theta(&self) -> DataMatrix {
        self.modes.select_rows(&self.sensor_indices)
    }

    pub fn m(&self) -> usize {
        self.modes.rows()
    }

    pub fn r(&self) -> usize {
        self.modes.cols()
    }

    pub fn s(&self) -> usize {
        self.sensor_indices.len()
    }
}

/// Sensor readings over time: row `k` holds the samples of
/// `sensor_indices[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementSeries {
    pub sensor_indices: Vec<usize>,
    pub values: DataMatrix,
}

/// Fits `r` POD modes to `data` and places `s ≥ r` sensors.
///
/// The first `r` sensors are the leading pivots of `qr_column_pivot(Ψ_rᵀ)`.
/// Further sensors are added greedily, each maximising the volume
/// `det(ΘᵀΘ)` of the enlarged sample matrix; for the first `r` this is the
/// same criterion the pivoted QR optimises.
pub fn fit_basis(data: &DataMatrix, r: usize, s: usize) -> Result<SensorBasis> {
    check_range("mode count r", r, 1, data.min_dim())?;
    if s < r {
        return Err(Error::Constraint(format!(
            "sensor count s = {s} must satisfy s >= r = {r}"
        )));
    }
    check_range("sensor count s", s, r, data.rows())?;
    let modes = svd_truncated(data, r)?.u;
    let indices = select_sensors(&modes, s)?;
    SensorBasis::from_parts(modes, indices)
}

/// Row selection on an orthonormal-column mode matrix.
pub fn select_sensors(modes: &DataMatrix, s: usize) -> Result<Vec<usize>> {
    let (m, r) = modes.shape();
    check_range("sensor count s", s, r, m)?;
    let qr = qr_column_pivot(&modes.transpose())?;
    let mut chosen: Vec<usize> = qr.pivots[..r].to_vec();
    if s == r {
        return Ok(chosen);
    }

    // Greedy volume growth: adding row ψ scales det(ΘᵀΘ) by 1 + ψᵀ(ΘᵀΘ)⁻¹ψ.
    let theta = modes.select_rows(&chosen);
    let mut gram_inv = pseudoinverse(&theta.t_matmul(&theta))?;
    let mut taken = vec![false; m];
    chosen.iter().for_each(|&i| taken[i] = true);
    while chosen.len() < s {
        let mut best: Option<(usize, f64)> = None;
        for i in 0..m {
            if taken[i] {
                continue;
            }
            let psi = modes.row(i);
            let gain = quadratic_form(&gram_inv, psi);
            match best {
                Some((_, b)) if gain <= b * (1.0 + PIVOT_TIE_TOL) => {}
                _ => best = Some((i, gain)),
            }
        }
        let (pick, gain) = best.expect("s <= m leaves a candidate");
        taken[pick] = true;
        chosen.push(pick);
        // Sherman–Morrison update of (ΘᵀΘ)⁻¹.
        let w = gram_inv.matvec(modes.row(pick));
        let denom = 1.0 + gain;
        for a in 0..r {
            for b in 0..r {
                gram_inv[(a, b)] -= w[a] * w[b] / denom;
            }
        }
    }
    Ok(chosen)
}

fn quadratic_form(a: &DataMatrix, x: &[f64]) -> f64 {
    let ax = a.matvec(x);
    ax.iter().zip(x).map(|(p, q)| p * q).sum()
}

/// Samples the sensor rows of `data`: `Y = C X`.
pub fn compress(data: &DataMatrix, basis: &SensorBasis) -> Result<MeasurementSeries> {
    if data.rows() != basis.m() {
        return Err(Error::validation(format!(
            "data has {} rows but the basis was fitted on {}",
            data.rows(),
            basis.m()
        )));
    }
    Ok(MeasurementSeries {
        sensor_indices: basis.sensor_indices.clone(),
        values: data.select_rows(&basis.sensor_indices),
    })
}

/// Full states from measurements, one column per time sample:
/// `X̂ = Ψ_r Θ† Y`.
pub fn reconstruct(measurements: &DataMatrix, basis: &SensorBasis) -> Result<DataMatrix> {
    if measurements.rows() != basis.s() {
        return Err(Error::validation(format!(
            "expected {} measurement rows, got {}",
            basis.s(),
            measurements.rows()
        )));
    }
    let coefficients = basis.theta_pinv.matmul(measurements);
    Ok(basis.modes.matmul(&coefficients))
}

/// Single-state form of [`reconstruct`].
pub fn reconstruct_vector(y: &[f64], basis: &SensorBasis) -> Result<Vec<f64>> {
    if y.len() != basis.s() {
        return Err(Error::validation(format!(
            "expected {} measurements, got {}",
            basis.s(),
            y.len()
        )));
    }
    let a = basis.theta_pinv.matvec(y);
    Ok(basis.modes.matvec(&a))
}

/// Memory saving factor `α = m / r` of storing `r` rows instead of `m`.
pub fn compression_ratio(m: usize, r_stored: usize) -> Result<f64> {
    if m == 0 || r_stored == 0 {
        return Err(Error::validation(format!(
            "compression ratio needs positive counts, got m = {m}, r = {r_stored}"
        )));
    }
    Ok(m as f64 / r_stored as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn concentrated(m: usize, n: usize, rows: &[usize]) -> DataMatrix {
        let mut x = DataMatrix::zeros(m, n);
        for (k, &row) in rows.iter().enumerate() {
            for j in 0..n {
                x[(row, j)] = (k as f64 + 1.0) * ((j as f64) * (0.7 + k as f64)).sin() + 3.0;
            }
        }
        x
    }

    #[test]
    fn pivots_land_on_energetic_rows() {
        let x = concentrated(10, 30, &[2, 7]);
        let basis = fit_basis(&x, 2, 2).unwrap();
        assert_eq!(basis.sorted_indices(), &[2, 7]);
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(compression_ratio(19200, 10).unwrap(), 1920.0);
        assert_eq!(compression_ratio(37, 37).unwrap(), 1.0);
        assert_eq!(compression_ratio(100, 4).unwrap(), 25.0);
        assert!(compression_ratio(100, 0).is_err());
    }

    #[test]
    fn too_few_sensors_is_constraint_error() {
        let x = concentrated(10, 30, &[2, 7, 8]);
        assert!(matches!(fit_basis(&x, 3, 2), Err(Error::Constraint(_))));
        assert!(matches!(fit_basis(&x, 0, 2), Err(Error::Bounds { .. })));
        assert!(matches!(fit_basis(&x, 2, 11), Err(Error::Bounds { .. })));
    }

    #[test]
    fn compress_is_row_gather() {
        let x = DataMatrix::from_fn(6, 4, |i, j| (10 * i + j) as f64);
        let basis = SensorBasis::from_parts(
            DataMatrix::from_fn(6, 2, |i, j| if i == j + 1 { 1.0 } else { 0.0 }),
            vec![2, 1],
        )
        .unwrap();
        let y = compress(&x, &basis).unwrap();
        assert_eq!(y.values.row(0), x.row(2));
        assert_eq!(y.values.row(1), x.row(1));
        assert!(compress(&DataMatrix::zeros(5, 4), &basis).is_err());
    }

    #[test]
    fn zero_measurements_reconstruct_to_zero() {
        let x = concentrated(12, 20, &[1, 4, 9]);
        let basis = fit_basis(&x, 3, 4).unwrap();
        let out = reconstruct_vector(&[0.0; 4], &basis).unwrap();
        assert!(out.iter().all(|&v| v == 0.0));
        assert!(reconstruct_vector(&[0.0; 3], &basis).is_err());
    }

    #[test]
    fn duplicate_indices_rejected() {
        let modes = DataMatrix::from_fn(4, 1, |i, _| if i == 0 { 1.0 } else { 0.0 });
        assert!(SensorBasis::from_parts(modes, vec![0, 0]).is_err());
    }
}
