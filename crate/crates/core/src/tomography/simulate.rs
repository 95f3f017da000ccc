use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::counts::CountRecord;
use super::settings::{enumerate_settings, projection_probability};
use crate::error::{invalid, Result};
use crate::qstate::DensityMatrix;
use crate::rng::stream_rng;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseModel {
    /// Counts are the rounded expectation values.
    None,
    Poisson,
}

/// Forward model for one tomography run. Expected counts per setting are
/// `drift × (shots × p + background)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SimulationConfig<T: Real> {
    pub shots_per_setting: T,
    pub noise: NoiseModel,
    /// Expected accidental counts per setting, before drift.
    pub background_rate: T,
    /// Per-setting backgrounds in enumeration order, replacing `background_rate`.
    pub background_override: Option<Vec<T>>,
    /// Per-setting power-drift multipliers in enumeration order.
    pub drift: Option<Vec<T>>,
    pub seed: u64,
}

impl<T: Real> SimulationConfig<T> {
    pub fn new(shots_per_setting: T, noise: NoiseModel, seed: u64) -> Self {
        Self { shots_per_setting, noise, background_rate: T::zero(), background_override: None, drift: None, seed }
    }
}

/// Shots per setting that make the most probable setting's expected count equal `peak`.
pub fn shots_for_peak<T: Real>(rho: &DensityMatrix<T>, peak: T) -> Result<T> {
    let mut p_max = T::zero();
    for s in enumerate_settings(rho.n_qubits())? {
        p_max = p_max.max(projection_probability(rho, &s)?);
    }
    if !(p_max > T::zero()) {
        return invalid("state has zero probability for every setting");
    }
    Ok(peak / p_max)
}

/// Simulates the full `4^n` setting table for `rho`.
///
/// Each setting draws from its own random stream, so the output does not depend
/// on thread scheduling.
pub fn simulate_counts<T: Real>(rho: &DensityMatrix<T>, config: &SimulationConfig<T>) -> Result<Vec<CountRecord<T>>> {
    if !(config.shots_per_setting > T::zero()) || !config.shots_per_setting.is_finite() {
        return invalid("shots_per_setting must be positive");
    }
    if !(config.background_rate >= T::zero()) {
        return invalid("background_rate must be non-negative");
    }
    let settings = enumerate_settings(rho.n_qubits())?;
    let m = settings.len();
    for (name, v) in [("background_override", &config.background_override), ("drift", &config.drift)] {
        if let Some(v) = v {
            if v.len() != m {
                return invalid(format!("{name} has {} entries, expected {m}", v.len()));
            }
        }
    }
    if let Some(d) = &config.drift {
        if d.iter().any(|x| !(*x > T::zero())) {
            return invalid("drift multipliers must be positive");
        }
    }
    if let Some(b) = &config.background_override {
        if b.iter().any(|x| !(*x >= T::zero())) {
            return invalid("background overrides must be non-negative");
        }
    }

    settings
        .into_par_iter()
        .enumerate()
        .map(|(i, setting)| {
            let p = projection_probability(rho, &setting)?;
            let drift = config.drift.as_ref().map_or(T::one(), |d| d[i]);
            let bg = config.background_override.as_ref().map_or(config.background_rate, |b| b[i]);
            let expected = (drift * (config.shots_per_setting * p + bg)).to_f64_lossy();
            let raw = match config.noise {
                NoiseModel::None => expected.round() as u64,
                NoiseModel::Poisson => poisson_sample(expected, config.seed, i as u64),
            };
            Ok(CountRecord { setting, raw_counts: raw, background: drift * bg, drift_normalizer: drift })
        })
        .collect()
}

pub(crate) fn poisson_sample(mean: f64, seed: u64, stream: u64) -> u64 {
    if !(mean > 0.0) {
        return 0;
    }
    let mut rng = stream_rng(seed, stream);
    Poisson::new(mean).expect("positive finite mean").sample(&mut rng) as u64
}
