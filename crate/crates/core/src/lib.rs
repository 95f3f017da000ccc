//! Local POVM filtering of GHZ states into approximate W states, together with
//! the tomography tool chain used to characterize the result: Poissonian count
//! simulation, maximum-likelihood reconstruction, fidelity analysis with
//! local-unitary optimization and Monte Carlo error bars.
//!
//! All numerical types are generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below are the double-precision instantiations used by the CLI.

// Negated comparisons are used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod optim;
pub mod povm;
pub mod qstate;
pub mod rng;
pub mod scalar;
pub mod tomography;

pub use error::{Error, Result};
pub use scalar::Real;

pub type PureState64 = qstate::PureState<f64>;
pub type PureState32 = qstate::PureState<f32>;
pub type DensityMatrix64 = qstate::DensityMatrix<f64>;
pub type DensityMatrix32 = qstate::DensityMatrix<f32>;
pub type State64 = qstate::State<f64>;
pub type FilterStrength64 = povm::FilterStrength<f64>;
pub type FilterStrength32 = povm::FilterStrength<f32>;
pub type CountRecord64 = tomography::CountRecord<f64>;
pub type CountRecord32 = tomography::CountRecord<f32>;
pub type MleOptions64 = tomography::MleOptions<f64>;
pub type ReconstructionResult64 = tomography::ReconstructionResult<f64>;
pub type ConversionReport64 = analysis::ConversionReport<f64>;
