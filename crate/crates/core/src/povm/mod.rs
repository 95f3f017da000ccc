//! Local two-outcome filter that turns `|GHZ_N⟩` into an approximate `|W′_N⟩`.

mod analytic;
mod convert;
mod filter;

pub use analytic::{
    fidelity_ghz3_analytic, fidelity_w3_analytic, fidelity_wn_analytic, normalization_ghz3,
    success_probability_analytic,
};
pub use convert::{amplitude_suppression_report, convert_ghz_to_w, relabelled_ghz, SuppressionRow};
pub use filter::{
    apply_branch, apply_filter_all, sample_filter_outcomes, FilterBasis, FilterOutcome, FilterStrength, KrausFilter,
    PovmOutcome,
};
