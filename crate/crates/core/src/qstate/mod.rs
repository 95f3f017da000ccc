//! Complex linear-algebra substrate: pure states, density matrices, local operators.

mod basis;
mod constructors;
mod density;
mod pure;
mod serial;
mod unitary;

pub use basis::{da_label, hv_label, Ket2, Polarization};
pub use constructors::{expand_in_da_basis, make_ghz, make_w_hv, make_w_prime, DaTerm, Sign};
pub use density::DensityMatrix;
pub use pure::PureState;
pub use serial::{State, StateKind};
pub use unitary::{unitarity_defect, LocalUnitary, Op2};

pub(crate) use unitary::{zyz_gradient, zyz_matrix};

use crate::error::Result;
use crate::scalar::Real;

/// Operations shared by pure states and density matrices.
pub trait QuantumState<T: Real>: Clone + Sized {
    fn n_qubits(&self) -> usize;

    /// Applies `op` to one qubit (as `Mψ` or `MρM†`) without renormalizing.
    fn apply_local(&self, op: &Op2<T>, target: usize) -> Result<Self>;

    fn apply_all(&self, op: &Op2<T>) -> Self;

    /// Squared norm (pure) or trace (density).
    fn weight(&self) -> T;

    fn normalized(&self) -> Result<Self>;

    fn tensor(&self, other: &Self) -> Self;

    fn to_density(&self) -> DensityMatrix<T>;
}

impl<T: Real> QuantumState<T> for PureState<T> {
    fn n_qubits(&self) -> usize {
        PureState::n_qubits(self)
    }
    fn apply_local(&self, op: &Op2<T>, target: usize) -> Result<Self> {
        PureState::apply_local(self, op, target)
    }
    fn apply_all(&self, op: &Op2<T>) -> Self {
        PureState::apply_all(self, op)
    }
    fn weight(&self) -> T {
        self.norm_sqr()
    }
    fn normalized(&self) -> Result<Self> {
        PureState::normalized(self)
    }
    fn tensor(&self, other: &Self) -> Self {
        PureState::tensor(self, other)
    }
    fn to_density(&self) -> DensityMatrix<T> {
        PureState::to_density(self)
    }
}

impl<T: Real> QuantumState<T> for DensityMatrix<T> {
    fn n_qubits(&self) -> usize {
        DensityMatrix::n_qubits(self)
    }
    fn apply_local(&self, op: &Op2<T>, target: usize) -> Result<Self> {
        DensityMatrix::apply_local(self, op, target)
    }
    fn apply_all(&self, op: &Op2<T>) -> Self {
        DensityMatrix::apply_all(self, op)
    }
    fn weight(&self) -> T {
        self.trace()
    }
    fn normalized(&self) -> Result<Self> {
        DensityMatrix::normalized(self)
    }
    fn tensor(&self, other: &Self) -> Self {
        DensityMatrix::tensor(self, other)
    }
    fn to_density(&self) -> DensityMatrix<T> {
        self.clone()
    }
}

/// Free-function form of [`QuantumState::apply_local`].
pub fn apply_local<T: Real, S: QuantumState<T>>(op: &Op2<T>, target: usize, state: &S) -> Result<S> {
    state.apply_local(op, target)
}

/// Kronecker product of two states of the same kind.
pub fn tensor<T: Real, S: QuantumState<T>>(a: &S, b: &S) -> S {
    a.tensor(b)
}
