use nalgebra::DVector;
use num_complex::Complex;

use super::basis::Polarization;
use super::density::DensityMatrix;
use super::unitary::Op2;
use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// Squared norm below which a state is treated as the zero vector.
pub(crate) const ZERO_NORM_SQR: f64 = 1e-30;

/// State vector over `2^n_qubits` amplitudes, qubit 0 being the most significant bit.
///
/// Constructors validate normalization. Local operator application does not
/// renormalize, so the result may be subnormalized; [`PureState::norm_sqr`]
/// then carries the branch probability.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState<T: Real> {
    n_qubits: usize,
    amplitudes: DVector<Complex<T>>,
}

pub(crate) fn check_qubits(n_qubits: usize) -> Result<usize> {
    if n_qubits == 0 {
        return invalid("n_qubits must be positive");
    }
    if n_qubits > 24 {
        return invalid(format!("{n_qubits} qubits exceeds the supported maximum of 24"));
    }
    Ok(1usize << n_qubits)
}

impl<T: Real> PureState<T> {
    pub fn new(n_qubits: usize, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let state = Self::new_unnormalized(n_qubits, amplitudes)?;
        let defect = (state.norm_sqr() - T::one()).abs();
        if !(defect <= T::tolerance()) {
            return invalid(format!("state is not normalized (|norm² − 1| = {defect})"));
        }
        Ok(state)
    }

    /// Builds a state without checking its norm.
    pub fn new_unnormalized(n_qubits: usize, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let dim = check_qubits(n_qubits)?;
        if amplitudes.len() != dim {
            return invalid(format!("expected {dim} amplitudes for {n_qubits} qubits, got {}", amplitudes.len()));
        }
        Ok(Self { n_qubits, amplitudes: DVector::from_vec(amplitudes) })
    }

    pub(crate) fn from_vector(n_qubits: usize, amplitudes: DVector<Complex<T>>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n_qubits);
        Self { n_qubits, amplitudes }
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = check_qubits(n_qubits)?;
        if index >= dim {
            return invalid(format!("basis index {index} out of range for {n_qubits} qubits"));
        }
        let mut amps = DVector::zeros(dim);
        amps[index] = Complex::new(T::one(), T::zero());
        Ok(Self::from_vector(n_qubits, amps))
    }

    /// Product state of named single-qubit kets, e.g. `[D, A, A]` for `|DAA⟩`.
    pub fn product(kets: &[Polarization]) -> Result<Self> {
        let mut iter = kets.iter();
        let first = iter.next().ok_or_else(|| Error::InvalidArgument("empty product".into()))?;
        let mut state = Self::from_vector(1, DVector::from_column_slice(first.ket::<T>().as_slice()));
        for k in iter {
            let next = Self::from_vector(1, DVector::from_column_slice(k.ket::<T>().as_slice()));
            state = state.tensor(&next);
        }
        check_qubits(state.n_qubits)?;
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex<T>> {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex<T> {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - T::one()).abs() <= T::tolerance()
    }

    /// Rescales to unit norm; fails if the norm is numerically zero.
    pub fn normalized(&self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if !(n2.to_f64_lossy() > ZERO_NORM_SQR) {
            return Err(Error::DegenerateInput(format!("state norm² {n2} is numerically zero")));
        }
        let inv = Complex::new(T::one() / n2.sqrt(), T::zero());
        Ok(Self::from_vector(self.n_qubits, self.amplitudes.map(|z| z * inv)))
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        self.check_same_size(other.n_qubits)?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Phase-insensitive overlap `|⟨self|other⟩|²`.
    pub fn overlap(&self, other: &Self) -> Result<T> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Kronecker product; `self` occupies the high-order qubits.
    pub fn tensor(&self, other: &Self) -> Self {
        Self::from_vector(self.n_qubits + other.n_qubits, self.amplitudes.kronecker(&other.amplitudes))
    }

    /// Applies `op` to qubit `target` (identity elsewhere) without renormalizing.
    pub fn apply_local(&self, op: &Op2<T>, target: usize) -> Result<Self> {
        let mut out = self.clone();
        out.apply_local_in_place(op, target)?;
        Ok(out)
    }

    /// Applies the same operator to every qubit.
    pub fn apply_all(&self, op: &Op2<T>) -> Self {
        let mut out = self.clone();
        for q in 0..self.n_qubits {
            out.apply_local_in_place(op, q).expect("qubit index in range");
        }
        out
    }

    pub(crate) fn apply_local_in_place(&mut self, op: &Op2<T>, target: usize) -> Result<()> {
        if target >= self.n_qubits {
            return invalid(format!("qubit {target} out of range for {} qubits", self.n_qubits));
        }
        let stride = 1usize << (self.n_qubits - 1 - target);
        let (m00, m01, m10, m11) = (op[(0, 0)], op[(0, 1)], op[(1, 0)], op[(1, 1)]);
        for i in (0..self.dim()).filter(|i| i & stride == 0) {
            let j = i | stride;
            let (x0, x1) = (self.amplitudes[i], self.amplitudes[j]);
            self.amplitudes[i] = m00 * x0 + m01 * x1;
            self.amplitudes[j] = m10 * x0 + m11 * x1;
        }
        Ok(())
    }

    /// `|ψ⟩⟨ψ|` (trace equals the squared norm).
    pub fn to_density(&self) -> DensityMatrix<T> {
        DensityMatrix::from_matrix_unchecked(self.n_qubits, &self.amplitudes * self.amplitudes.adjoint())
    }

    pub(crate) fn check_same_size(&self, n_qubits: usize) -> Result<()> {
        if self.n_qubits != n_qubits {
            return invalid(format!("dimension mismatch: {} qubits vs {n_qubits} qubits", self.n_qubits));
        }
        Ok(())
    }
}
