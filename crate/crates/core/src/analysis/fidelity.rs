use crate::error::Result;
use crate::qstate::{DensityMatrix, PureState};
use crate::scalar::Real;

/// `⟨ψ|ρ|ψ⟩`, clamped to `[0, 1]`.
pub fn fidelity_pure<T: Real>(rho: &DensityMatrix<T>, target: &PureState<T>) -> Result<T> {
    Ok(rho.expectation(target)?.max(T::zero()).min(T::one()))
}
