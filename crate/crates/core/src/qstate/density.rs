use nalgebra::DMatrix;
use num_complex::Complex;

use super::pure::{check_qubits, PureState, ZERO_NORM_SQR};
use super::unitary::Op2;
use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// Density operator on `n_qubits` qubits, same bit ordering as [`PureState`].
///
/// [`DensityMatrix::new`] checks Hermiticity, unit trace and positivity against
/// [`Real::tolerance`]. Kraus/local-operator application keeps Hermiticity and
/// positivity but not the trace, which is left as the branch probability.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T: Real> {
    n_qubits: usize,
    matrix: DMatrix<Complex<T>>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(n_qubits: usize, matrix: DMatrix<Complex<T>>) -> Result<Self> {
        let rho = Self::new_unnormalized(n_qubits, matrix)?;
        rho.validate()?;
        Ok(rho)
    }

    /// Checks only the shape.
    pub fn new_unnormalized(n_qubits: usize, matrix: DMatrix<Complex<T>>) -> Result<Self> {
        let dim = check_qubits(n_qubits)?;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return invalid(format!(
                "expected a {dim}×{dim} matrix for {n_qubits} qubits, got {}×{}",
                matrix.nrows(),
                matrix.ncols()
            ));
        }
        Ok(Self { n_qubits, matrix })
    }

    pub(crate) fn from_matrix_unchecked(n_qubits: usize, matrix: DMatrix<Complex<T>>) -> Self {
        debug_assert_eq!(matrix.nrows(), 1 << n_qubits);
        Self { n_qubits, matrix }
    }

    pub fn from_pure(state: &PureState<T>) -> Self {
        state.to_density()
    }

    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        let dim = check_qubits(n_qubits)?;
        let w = Complex::new(T::one() / T::from_usize(dim).unwrap(), T::zero());
        Ok(Self::from_matrix_unchecked(n_qubits, DMatrix::identity(dim, dim) * w))
    }

    /// `Σ w_k ρ_k`; weights are not required to sum to one.
    pub fn mixture(parts: &[(T, &DensityMatrix<T>)]) -> Result<Self> {
        let (_, first) = parts.first().ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?;
        let mut acc = DMatrix::zeros(first.dim(), first.dim());
        for (w, rho) in parts {
            first.check_same_size(rho.n_qubits)?;
            acc += &rho.matrix * Complex::new(*w, T::zero());
        }
        Ok(Self::from_matrix_unchecked(first.n_qubits, acc))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex<T>> {
        self.matrix
    }

    pub fn trace(&self) -> T {
        (0..self.dim()).fold(T::zero(), |acc, i| acc + self.matrix[(i, i)].re)
    }

    pub fn purity(&self) -> T {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Eigenvalues in ascending order (of the Hermitian part).
    pub fn eigenvalues(&self) -> Vec<T> {
        let herm = (&self.matrix + self.matrix.adjoint()) * Complex::new(T::lit(0.5), T::zero());
        let mut ev: Vec<T> = herm.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        ev
    }

    pub fn hermiticity_defect(&self) -> T {
        let d = &self.matrix - self.matrix.adjoint();
        d.iter().fold(T::zero(), |acc, z| acc.max(z.norm_sqr().sqrt()))
    }

    /// Checks Hermiticity, unit trace and positivity.
    pub fn validate(&self) -> Result<()> {
        let tol = T::tolerance();
        let herm = self.hermiticity_defect();
        if !(herm <= tol) {
            return invalid(format!("density matrix is not Hermitian (defect {herm})"));
        }
        let tr = self.trace();
        if !((tr - T::one()).abs() <= tol) {
            return invalid(format!("density matrix trace is {tr}, expected 1"));
        }
        let min_ev = self.eigenvalues()[0];
        if !(min_ev >= -tol) {
            return invalid(format!("density matrix has negative eigenvalue {min_ev}"));
        }
        Ok(())
    }

    pub fn normalized(&self) -> Result<Self> {
        let tr = self.trace();
        if !(tr.to_f64_lossy() > ZERO_NORM_SQR) {
            return Err(Error::DegenerateInput(format!("trace {tr} is numerically zero")));
        }
        let inv = Complex::new(T::one() / tr, T::zero());
        Ok(Self::from_matrix_unchecked(self.n_qubits, &self.matrix * inv))
    }

    /// `⟨ψ|ρ|ψ⟩` without clamping.
    pub fn expectation(&self, psi: &PureState<T>) -> Result<T> {
        self.check_same_size(psi.n_qubits())?;
        let v = psi.amplitudes();
        Ok(v.dotc(&(&self.matrix * v)).re)
    }

    /// Kronecker product; `self` occupies the high-order qubits.
    pub fn tensor(&self, other: &Self) -> Self {
        Self::from_matrix_unchecked(self.n_qubits + other.n_qubits, self.matrix.kronecker(&other.matrix))
    }

    /// `M ρ M†` with `M` acting on qubit `target`; no renormalization.
    pub fn apply_local(&self, op: &Op2<T>, target: usize) -> Result<Self> {
        let mut out = self.clone();
        out.apply_local_in_place(op, target)?;
        Ok(out)
    }

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
        let dim = self.dim();
        let stride = 1usize << (self.n_qubits - 1 - target);
        let (m00, m01, m10, m11) = (op[(0, 0)], op[(0, 1)], op[(1, 0)], op[(1, 1)]);
        let pairs: Vec<(usize, usize)> = (0..dim).filter(|i| i & stride == 0).map(|i| (i, i | stride)).collect();
        // rows: M ρ
        for col in 0..dim {
            for &(i, j) in &pairs {
                let (x0, x1) = (self.matrix[(i, col)], self.matrix[(j, col)]);
                self.matrix[(i, col)] = m00 * x0 + m01 * x1;
                self.matrix[(j, col)] = m10 * x0 + m11 * x1;
            }
        }
        // columns: (M ρ) M†
        let (c00, c01, c10, c11) = (m00.conj(), m01.conj(), m10.conj(), m11.conj());
        for row in 0..dim {
            for &(i, j) in &pairs {
                let (x0, x1) = (self.matrix[(row, i)], self.matrix[(row, j)]);
                self.matrix[(row, i)] = x0 * c00 + x1 * c01;
                self.matrix[(row, j)] = x0 * c10 + x1 * c11;
            }
        }
        Ok(())
    }

    pub(crate) fn check_same_size(&self, n_qubits: usize) -> Result<()> {
        if self.n_qubits != n_qubits {
            return invalid(format!("dimension mismatch: {} qubits vs {n_qubits} qubits", self.n_qubits));
        }
        Ok(())
    }
}
