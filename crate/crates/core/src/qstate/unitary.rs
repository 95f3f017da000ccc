//! Single-qubit operators: unitaries, waveplate Jones matrices and Euler rotations.

use nalgebra::Matrix2;
use num_complex::Complex;

use crate::error::{invalid, Result};
use crate::scalar::Real;

/// Arbitrary 2×2 complex operator in the H/V basis.
pub type Op2<T> = Matrix2<Complex<T>>;

pub(crate) fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

pub(crate) fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// Largest elementwise deviation of `m·m†` from the identity.
pub fn unitarity_defect<T: Real>(m: &Op2<T>) -> T {
    let prod = m * m.adjoint() - Op2::<T>::identity();
    prod.iter().fold(T::zero(), |acc, z| acc.max(z.norm_sqr().sqrt()))
}

/// A validated single-qubit unitary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalUnitary<T: Real> {
    matrix: Op2<T>,
}

impl<T: Real> LocalUnitary<T> {
    pub fn new(matrix: Op2<T>) -> Result<Self> {
        let defect = unitarity_defect(&matrix);
        if !(defect <= T::tolerance()) {
            return invalid(format!("matrix is not unitary (defect {defect})"));
        }
        Ok(Self { matrix })
    }

    fn trusted(matrix: Op2<T>) -> Self {
        Self { matrix }
    }

    pub fn identity() -> Self {
        Self::trusted(Op2::identity())
    }

    /// Maps `|H⟩ ↔ |D⟩` and `|V⟩ ↔ |A⟩`; equal to a half-wave plate at 22.5°.
    pub fn hadamard() -> Self {
        let s = T::lit(std::f64::consts::FRAC_1_SQRT_2);
        Self::trusted(Matrix2::new(re(s), re(s), re(s), re(-s)))
    }

    /// `diag(1, −1)`: swaps `|D⟩ ↔ |A⟩`.
    pub fn da_swap() -> Self {
        Self::trusted(Matrix2::new(re(T::one()), re(T::zero()), re(T::zero()), re(-T::one())))
    }

    /// Swaps `|H⟩ ↔ |V⟩`.
    pub fn hv_swap() -> Self {
        Self::trusted(Matrix2::new(re(T::zero()), re(T::one()), re(T::one()), re(T::zero())))
    }

    /// Half-wave plate with fast axis at `theta` radians from horizontal.
    pub fn half_wave_plate(theta: T) -> Self {
        let two = theta + theta;
        let (s, co) = (two.sin(), two.cos());
        Self::trusted(Matrix2::new(re(co), re(s), re(s), re(-co)))
    }

    /// Quarter-wave plate with fast axis at `theta` radians from horizontal (global phase dropped).
    pub fn quarter_wave_plate(theta: T) -> Self {
        let (s, co) = (theta.sin(), theta.cos());
        let off = c(s * co, -(s * co));
        Self::trusted(Matrix2::new(c(co * co, s * s), off, off, c(s * s, co * co)))
    }

    /// `Rz(alpha)·Ry(beta)·Rz(gamma)` with `Rz(φ) = diag(e^{−iφ/2}, e^{iφ/2})`.
    pub fn zyz(alpha: T, beta: T, gamma: T) -> Self {
        Self::trusted(zyz_matrix(alpha, beta, gamma))
    }

    pub fn matrix(&self) -> &Op2<T> {
        &self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self::trusted(self.matrix.adjoint())
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self::trusted(self.matrix * other.matrix)
    }
}

impl<T: Real> AsRef<Op2<T>> for LocalUnitary<T> {
    fn as_ref(&self) -> &Op2<T> {
        &self.matrix
    }
}

pub(crate) fn rz<T: Real>(phi: T) -> Op2<T> {
    let h = phi * T::lit(0.5);
    Matrix2::new(c(h.cos(), -h.sin()), re(T::zero()), re(T::zero()), c(h.cos(), h.sin()))
}

pub(crate) fn ry<T: Real>(beta: T) -> Op2<T> {
    let h = beta * T::lit(0.5);
    Matrix2::new(re(h.cos()), re(-h.sin()), re(h.sin()), re(h.cos()))
}

pub(crate) fn zyz_matrix<T: Real>(alpha: T, beta: T, gamma: T) -> Op2<T> {
    rz(alpha) * ry(beta) * rz(gamma)
}

/// Partial derivatives of the ZYZ matrix with respect to `(alpha, beta, gamma)`.
pub(crate) fn zyz_gradient<T: Real>(alpha: T, beta: T, gamma: T) -> [Op2<T>; 3] {
    let half = T::lit(0.5);
    // d/dφ Rz(φ) = Rz(φ)·diag(−i/2, i/2), d/dβ Ry(β) = Ry(β + π)/2
    let dz = Matrix2::new(c(T::zero(), -half), re(T::zero()), re(T::zero()), c(T::zero(), half));
    let (za, yb, zg) = (rz(alpha), ry(beta), rz(gamma));
    let dyb = ry(beta + T::pi()) * re(half);
    [za * dz * yb * zg, za * dyb * zg, za * yb * zg * dz]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::basis::Polarization;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn hwp_22_5_maps_h_to_d() {
        let hwp = LocalUnitary::<f64>::half_wave_plate(PI / 8.0);
        let out = hwp.matrix() * Polarization::H.ket::<f64>();
        let overlap = Polarization::D.ket::<f64>().dotc(&out).norm_sqr();
        assert!((overlap - 1.0).abs() < 1e-14);
        assert!((hwp.matrix() - LocalUnitary::<f64>::hadamard().matrix()).norm() < 1e-15);
    }

    #[test]
    fn qwp_45_maps_h_to_circular() {
        let qwp = LocalUnitary::<f64>::quarter_wave_plate(PI / 4.0);
        let out = qwp.matrix() * Polarization::H.ket::<f64>();
        let r = Polarization::R.ket::<f64>();
        let l = Polarization::R.ket::<f64>().map(|z| z.conj());
        let pr = r.dotc(&out).norm_sqr();
        let pl = l.dotc(&out).norm_sqr();
        assert!((pr + pl - 1.0).abs() < 1e-14);
        assert!(pr.max(pl) > 1.0 - 1e-14);
    }

    #[test]
    fn da_swap_exchanges_diagonal_kets() {
        let z = LocalUnitary::<f64>::da_swap();
        let out = z.matrix() * Polarization::D.ket::<f64>();
        assert!((out - Polarization::A.ket::<f64>()).norm() < 1e-15);
    }

    #[test]
    fn rejects_non_unitary() {
        let m = Matrix2::new(re(1.0), re(0.0), re(0.0), re(0.5));
        assert!(LocalUnitary::<f64>::new(m).is_err());
    }

    #[test]
    fn zyz_gradient_matches_finite_difference() {
        let (a, b, g) = (0.3, -1.1, 2.0);
        let grads = zyz_gradient(a, b, g);
        let h = 1e-6;
        let fd = [
            (zyz_matrix(a + h, b, g) - zyz_matrix(a - h, b, g)) / re(2.0 * h),
            (zyz_matrix(a, b + h, g) - zyz_matrix(a, b - h, g)) / re(2.0 * h),
            (zyz_matrix(a, b, g + h) - zyz_matrix(a, b, g - h)) / re(2.0 * h),
        ];
        for k in 0..3 {
            assert!((grads[k] - fd[k]).norm() < 1e-8, "component {k}");
        }
    }

    #[test]
    fn works_in_single_precision() {
        let u = LocalUnitary::<f32>::zyz(0.4, 1.2, -0.7);
        assert!(unitarity_defect(u.matrix()) < 1e-6);
    }

    proptest! {
        #[test]
        fn euler_and_waveplates_are_unitary(a in -7.0..7.0f64, b in -7.0..7.0f64, g in -7.0..7.0f64) {
            prop_assert!(unitarity_defect(LocalUnitary::zyz(a, b, g).matrix()) < 1e-12);
            prop_assert!(unitarity_defect(LocalUnitary::half_wave_plate(a).matrix()) < 1e-12);
            prop_assert!(unitarity_defect(LocalUnitary::quarter_wave_plate(b).matrix()) < 1e-12);
        }
    }
}
