use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::DataMatrix;
use crate::rng::{derive_seed, Stream};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scenario {
    /// 1: additive Gaussian noise on every entry.
    Noise,
    /// 2: entries overwritten by large values.
    Outliers,
    /// 3: uniform noise added to a fraction of entries.
    Corruptions,
    /// 4: scenarios 1, 2 and 3 applied in that order.
    Superposition,
}

impl Scenario {
    pub fn from_id(id: u8) -> Result<Self> {
        match id {
            1 => Ok(Scenario::Noise),
            2 => Ok(Scenario::Outliers),
            3 => Ok(Scenario::Corruptions),
            4 => Ok(Scenario::Superposition),
            _ => Err(Error::validation(format!("scenario id must be 1-4, got {id}"))),
        }
    }

    pub fn id(self) -> u8 {
        match self {
            Scenario::Noise => 1,
            Scenario::Outliers => 2,
            Scenario::Corruptions => 3,
            Scenario::Superposition => 4,
        }
    }

    fn components(self) -> &'static [Component] {
        match self {
            Scenario::Noise => &[Component::Noise],
            Scenario::Outliers => &[Component::Outliers],
            Scenario::Corruptions => &[Component::Corruptions],
            Scenario::Superposition => &[Component::Noise, Component::Outliers, Component::Corruptions],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Component {
    Noise,
    Outliers,
    Corruptions,
}

impl Component {
    fn stream_tag(self) -> u64 {
        match self {
            Component::Noise => 1,
            Component::Outliers => 2,
            Component::Corruptions => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Component::Noise => "noise",
            Component::Outliers => "outliers",
            Component::Corruptions => "corruptions",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub scenario: Scenario,
    pub noise_std: f64,
    /// Outlier count, per frame when `outliers_per_frame` is set.
    pub n_outliers: usize,
    pub outlier_ranges: [(f64, f64); 2],
    pub outliers_per_frame: bool,
    pub corruption_fraction: f64,
    pub corruption_interval: (f64, f64),
    pub seed: u64,
}

impl ScenarioSpec {
    pub fn new(scenario: Scenario, seed: u64) -> Self {
        ScenarioSpec {
            scenario,
            noise_std: 4.0,
            n_outliers: 100,
            outlier_ranges: [(30.0, 40.0), (-40.0, -30.0)],
            outliers_per_frame: true,
            corruption_fraction: 0.10,
            corruption_interval: (-15.0, 30.0),
            seed,
        }
    }

    pub fn validate(&self, m: usize, n: usize) -> Result<()> {
        if !(self.noise_std >= 0.0 && self.noise_std.is_finite()) {
            return Err(Error::validation("noise_std must be finite and >= 0"));
        }
        if !(0.0..=1.0).contains(&self.corruption_fraction) {
            return Err(Error::validation("corruption_fraction must lie in [0, 1]"));
        }
        for &(lo, hi) in self.outlier_ranges.iter().chain([&self.corruption_interval]) {
            if !(lo <= hi && lo.is_finite() && hi.is_finite()) {
                return Err(Error::validation(format!("interval [{lo}, {hi}] is not ordered")));
            }
        }
        let cap = if self.outliers_per_frame { m } else { m * n };
        let uses_outliers = self.scenario.components().contains(&Component::Outliers);
        if uses_outliers && self.n_outliers > cap {
            return Err(Error::validation(format!(
                "{} outliers exceed the {cap} available entries",
                self.n_outliers
            )));
        }
        Ok(())
    }
}

/// Which entries a component touched.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Touched {
    All,
    /// Row-major linear indices `i·n + j`, ascending.
    Entries(Vec<usize>),
}

impl Touched {
    pub fn count(&self, total: usize) -> usize {
        match self {
            Touched::All => total,
            Touched::Entries(e) => e.len(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Perturbed {
    pub data: DataMatrix,
    /// Union of the entries touched by outliers and corruptions, ascending
    /// row-major indices. Dense noise is not recorded here.
    pub mask: Vec<usize>,
    pub components: Vec<(Component, Touched)>,
}

/// Applies a perturbation scenario.
///
/// Every component draws from its own stream derived from `spec.seed`;
/// per-frame work uses a further substream per column, so the output is a
/// pure function of `(x, spec)`.
pub fn apply_scenario(x: &DataMatrix, spec: &ScenarioSpec) -> Result<Perturbed> {
    x.ensure_finite()?;
    let (m, n) = x.shape();
    spec.validate(m, n)?;
    let mut data = x.clone();
    let mut components = Vec::new();
    for &c in spec.scenario.components() {
        let base = derive_seed(spec.seed, c.stream_tag());
        let touched = match c {
            Component::Noise => {
                add_noise(&mut data, spec.noise_std, base);
                Touched::All
            }
            Component::Outliers => Touched::Entries(add_outliers(&mut data, spec, base)),
            Component::Corruptions => Touched::Entries(add_corruptions(&mut data, spec, base)),
        };
        components.push((c, touched));
    }

    let mut mask: Vec<usize> = components
        .iter()
        .filter_map(|(_, t)| match t {
            Touched::Entries(e) => Some(e.iter().copied()),
            Touched::All => None,
        })
        .flatten()
        .collect();
    mask.sort_unstable();
    mask.dedup();
    Ok(Perturbed { data, mask, components })
}

fn add_noise(data: &mut DataMatrix, std: f64, base: u64) {
    let (m, n) = data.shape();
    for j in 0..n {
        let mut rng = Stream::substream(base, j as u64);
        for i in 0..m {
            data[(i, j)] += std * rng.normal();
        }
    }
}

fn outlier_value(rng: &mut Stream, ranges: &[(f64, f64); 2]) -> f64 {
    let (lo, hi) = if rng.uniform() < 0.5 { ranges[0] } else { ranges[1] };
    rng.uniform_in(lo, hi)
}

fn add_outliers(data: &mut DataMatrix, spec: &ScenarioSpec, base: u64) -> Vec<usize> {
    let (m, n) = data.shape();
    let mut touched = Vec::new();
    if spec.outliers_per_frame {
        for j in 0..n {
            let mut rng = Stream::substream(base, j as u64);
            for i in rng.choose_sorted(m, spec.n_outliers) {
                data[(i, j)] = outlier_value(&mut rng, &spec.outlier_ranges);
                touched.push(i * n + j);
            }
        }
        touched.sort_unstable();
    } else {
        let mut rng = Stream::new(base);
        for idx in rng.choose_sorted(m * n, spec.n_outliers) {
            data.as_mut_slice()[idx] = outlier_value(&mut rng, &spec.outlier_ranges);
            touched.push(idx);
        }
    }
    touched
}

fn add_corruptions(data: &mut DataMatrix, spec: &ScenarioSpec, base: u64) -> Vec<usize> {
    let total = data.rows() * data.cols();
    let count = (spec.corruption_fraction * total as f64).round() as usize;
    let (lo, hi) = spec.corruption_interval;
    let mut rng = Stream::new(base);
    let picked = rng.choose_sorted(total, count);
    let values = data.as_mut_slice();
    for &idx in &picked {
        values[idx] += rng.uniform_in(lo, hi);
    }
    picked
}
