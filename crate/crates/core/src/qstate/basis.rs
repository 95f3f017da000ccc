//! Single-qubit polarization kets.
//!
//! Computational basis is `|H⟩ = (1, 0)`, `|V⟩ = (0, 1)`. The diagonal kets are
//! `|D⟩ = (|H⟩ + |V⟩)/√2` and `|A⟩ = (|H⟩ − |V⟩)/√2`. Right-circular polarization
//! is fixed as `|R⟩ = (|H⟩ − i|V⟩)/√2`; any consistent sign gives a
//! tomographically complete set, this one is pinned so results are reproducible.

use std::fmt;
use std::str::FromStr;

use nalgebra::Vector2;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub type Ket2<T> = Vector2<Complex<T>>;

/// Named single-qubit polarization state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarization {
    H,
    V,
    D,
    A,
    R,
}

impl Polarization {
    pub const ALL: [Polarization; 5] = [Self::H, Self::V, Self::D, Self::A, Self::R];

    pub fn ket<T: Real>(self) -> Ket2<T> {
        let zero = Complex::new(T::zero(), T::zero());
        let one = Complex::new(T::one(), T::zero());
        let s = T::lit(std::f64::consts::FRAC_1_SQRT_2);
        match self {
            Self::H => Vector2::new(one, zero),
            Self::V => Vector2::new(zero, one),
            Self::D => Vector2::new(Complex::new(s, T::zero()), Complex::new(s, T::zero())),
            Self::A => Vector2::new(Complex::new(s, T::zero()), Complex::new(-s, T::zero())),
            Self::R => Vector2::new(Complex::new(s, T::zero()), Complex::new(T::zero(), -s)),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Self::H => 'H',
            Self::V => 'V',
            Self::D => 'D',
            Self::A => 'A',
            Self::R => 'R',
        }
    }

    pub fn from_char(c: char) -> Result<Self> {
        match c.to_ascii_uppercase() {
            'H' => Ok(Self::H),
            'V' => Ok(Self::V),
            'D' => Ok(Self::D),
            'A' => Ok(Self::A),
            'R' => Ok(Self::R),
            other => Err(Error::InvalidArgument(format!("unknown polarization label '{other}'"))),
        }
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl FromStr for Polarization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => Self::from_char(c),
            _ => Err(Error::InvalidArgument(format!("expected a single polarization label, got '{s}'"))),
        }
    }
}

/// Basis-string label for a computational (H/V) basis index with qubit 0 as the
/// most significant bit.
pub fn hv_label(index: usize, n_qubits: usize) -> String {
    (0..n_qubits).map(|q| if index >> (n_qubits - 1 - q) & 1 == 0 { 'H' } else { 'V' }).collect()
}

/// Same as [`hv_label`] for the D/A product basis (`0 → D`, `1 → A`).
pub fn da_label(index: usize, n_qubits: usize) -> String {
    (0..n_qubits).map(|q| if index >> (n_qubits - 1 - q) & 1 == 0 { 'D' } else { 'A' }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inner(a: &Ket2<f64>, b: &Ket2<f64>) -> Complex<f64> {
        a.dotc(b)
    }

    #[test]
    fn kets_are_unit_norm() {
        for p in Polarization::ALL {
            let k = p.ket::<f64>();
            assert!((inner(&k, &k).re - 1.0).abs() < 1e-15, "{p}");
        }
    }

    #[test]
    fn orthogonal_pairs() {
        let h = Polarization::H.ket::<f64>();
        let v = Polarization::V.ket::<f64>();
        let d = Polarization::D.ket::<f64>();
        let a = Polarization::A.ket::<f64>();
        assert!(inner(&h, &v).norm() < 1e-15);
        assert!(inner(&d, &a).norm() < 1e-15);
    }

    #[test]
    fn circular_convention_is_pinned() {
        let r = Polarization::R.ket::<f64>();
        assert!((r[1].im + std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(r[1].re, 0.0);
    }

    #[test]
    fn labels() {
        assert_eq!(hv_label(3, 3), "HVV");
        assert_eq!(hv_label(5, 3), "VHV");
        assert_eq!(da_label(0, 2), "DD");
        assert_eq!("r".parse::<Polarization>().unwrap(), Polarization::R);
        assert!("X".parse::<Polarization>().is_err());
        assert!("HV".parse::<Polarization>().is_err());
    }
}
