//! Monte Carlo error bars: Poisson resampling of the raw counts followed by
//! full reconstruction and re-evaluation of the statistic.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fidelity::fidelity_pure;
use super::local_opt::{fidelity_local_optimized, LocalOptOptions, TargetFamily};
use crate::error::{invalid, Error, Result};
use crate::qstate::DensityMatrix;
use crate::rng::derive_seed;
use crate::scalar::Real;
use crate::tomography::{poisson_sample, reconstruct_mle, CountRecord, MleOptions};

/// Scalar functions of a reconstructed state that can carry an error bar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    FidelityGhzCanonical,
    FidelityWCanonical,
    FidelityGhzLocalOpt,
    FidelityWLocalOpt,
}

impl Statistic {
    pub const ALL: [Statistic; 4] = [
        Statistic::FidelityGhzCanonical,
        Statistic::FidelityWCanonical,
        Statistic::FidelityGhzLocalOpt,
        Statistic::FidelityWLocalOpt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Statistic::FidelityGhzCanonical => "fidelity_ghz_canonical",
            Statistic::FidelityWCanonical => "fidelity_w_canonical",
            Statistic::FidelityGhzLocalOpt => "fidelity_ghz_local_opt",
            Statistic::FidelityWLocalOpt => "fidelity_w_local_opt",
        }
    }

    pub fn family(self) -> TargetFamily {
        match self {
            Statistic::FidelityGhzCanonical | Statistic::FidelityGhzLocalOpt => TargetFamily::GhzG,
            Statistic::FidelityWCanonical | Statistic::FidelityWLocalOpt => TargetFamily::WG,
        }
    }

    pub fn evaluate<T: Real>(self, rho: &DensityMatrix<T>, local_opt: &LocalOptOptions) -> Result<T> {
        match self {
            Statistic::FidelityGhzCanonical | Statistic::FidelityWCanonical => {
                fidelity_pure(rho, &self.family().canonical(rho.n_qubits())?)
            }
            Statistic::FidelityGhzLocalOpt | Statistic::FidelityWLocalOpt => {
                Ok(fidelity_local_optimized(rho, self.family(), local_opt)?.fidelity)
            }
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Statistic::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .map_or_else(|| invalid(format!("unknown statistic '{s}'")), Ok)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct MonteCarloOptions<T: Real> {
    pub n_trials: usize,
    pub seed: u64,
    pub mle: MleOptions<T>,
    pub local_opt: LocalOptOptions,
}

impl<T: Real> Default for MonteCarloOptions<T> {
    fn default() -> Self {
        Self { n_trials: 100, seed: 0, mle: MleOptions::default(), local_opt: LocalOptOptions::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct UncertaintyReport<T: Real> {
    pub statistic: Statistic,
    /// Statistic of the reconstruction from the observed counts.
    pub point_estimate: T,
    /// Mean over successful trials.
    pub mean: T,
    /// Sample standard deviation over successful trials.
    pub std_dev: T,
    pub n_trials: usize,
    pub n_failed: usize,
    /// Per-trial values in trial order; failed trials are omitted.
    pub values: Vec<T>,
}

/// Error bar for one statistic. See [`monte_carlo_uncertainties`].
pub fn monte_carlo_uncertainty<T: Real>(
    records: &[CountRecord<T>],
    n: usize,
    statistic: Statistic,
    options: &MonteCarloOptions<T>,
) -> Result<UncertaintyReport<T>> {
    Ok(monte_carlo_uncertainties(records, n, &[statistic], options)?.remove(0))
}

/// Resamples every raw count as `Poisson(observed)`, reconstructs each trial
/// and evaluates all `statistics` on it. Non-converged trials are dropped; more
/// than half failing is an error. Trials run in parallel but each draws from
/// its own seeded stream, so results do not depend on scheduling.
pub fn monte_carlo_uncertainties<T: Real>(
    records: &[CountRecord<T>],
    n: usize,
    statistics: &[Statistic],
    options: &MonteCarloOptions<T>,
) -> Result<Vec<UncertaintyReport<T>>> {
    if options.n_trials < 2 {
        return invalid("Monte Carlo needs at least 2 trials");
    }
    if statistics.is_empty() {
        return invalid("no statistics requested");
    }
    let base = reconstruct_mle(records, n, &options.mle)?;
    let point: Vec<T> = statistics.iter().map(|s| s.evaluate(&base.rho, &options.local_opt)).collect::<Result<_>>()?;

    let trials: Vec<Option<Vec<T>>> = (0..options.n_trials)
        .into_par_iter()
        .map(|trial| {
            let seed = derive_seed(options.seed, trial as u64);
            let resampled: Vec<CountRecord<T>> = records
                .iter()
                .enumerate()
                .map(|(j, r)| CountRecord {
                    raw_counts: poisson_sample(r.raw_counts as f64, seed, j as u64),
                    ..r.clone()
                })
                .collect();
            let rec = reconstruct_mle(&resampled, n, &options.mle).ok().filter(|r| r.converged)?;
            statistics.iter().map(|s| s.evaluate(&rec.rho, &options.local_opt).ok()).collect()
        })
        .collect();

    let ok: Vec<&Vec<T>> = trials.iter().flatten().collect();
    let n_failed = options.n_trials - ok.len();
    if 2 * n_failed > options.n_trials || ok.len() < 2 {
        return Err(Error::TooManyFailures { failed: n_failed, total: options.n_trials });
    }

    let m = T::from_usize(ok.len()).unwrap();
    Ok(statistics
        .iter()
        .enumerate()
        .map(|(k, &statistic)| {
            let values: Vec<T> = ok.iter().map(|v| v[k]).collect();
            let mean = values.iter().fold(T::zero(), |a, &b| a + b) / m;
            let var = values.iter().fold(T::zero(), |a, &b| a + (b - mean) * (b - mean)) / (m - T::one());
            UncertaintyReport {
                statistic,
                point_estimate: point[k],
                mean,
                std_dev: var.sqrt(),
                n_trials: options.n_trials,
                n_failed,
                values,
            }
        })
        .collect())
}
