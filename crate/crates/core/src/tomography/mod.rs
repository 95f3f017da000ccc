//! Polarization tomography over the `{H, V, D, R}^⊗n` product settings:
//! count simulation, ingestion and maximum-likelihood reconstruction.

mod counts;
mod ingest;
mod mle;
mod settings;
mod simulate;

pub use counts::{read_counts_csv, read_counts_json, write_counts_csv, write_counts_json, CountRecord};
pub use ingest::{ingest_counts, FrequencyTable};
pub use mle::{linear_inversion, reconstruct_mle, Initializer, MleOptions, ReconstructionResult};
pub use settings::{enumerate_settings, projection_probability, MeasurementSetting, TOMOGRAPHY_PROJECTIONS};
pub use simulate::{shots_for_peak, simulate_counts, NoiseModel, SimulationConfig};

pub(crate) use simulate::poisson_sample;
