//! Fidelity analysis of reconstructed states.

mod fidelity;
mod local_opt;
mod montecarlo;
mod plot;
mod report;

pub use fidelity::fidelity_pure;
pub use local_opt::{
    fidelity_local_optimized, rotate_density, LocalOptOptions, LocalOptResult, LocalRotationParams, TargetFamily,
};
pub use montecarlo::{
    monte_carlo_uncertainties, monte_carlo_uncertainty, MonteCarloOptions, Statistic, UncertaintyReport,
};
pub use plot::{plot_rows, write_plot_data, PlotBasis, PlotRow};
pub use report::{
    conversion_report, ConversionReport, CountPair, FidelitySummary, ReferenceValues, ReportOptions,
    EXPERIMENTAL_REFERENCE,
};
