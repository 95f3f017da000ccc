use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use num_complex::Complex;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::qstate::{DensityMatrix, Polarization};
use crate::scalar::Real;

/// Single-photon projections used for tomography, in enumeration order.
pub const TOMOGRAPHY_PROJECTIONS: [Polarization; 4] =
    [Polarization::H, Polarization::V, Polarization::D, Polarization::R];

/// One product projector `|s₀⟩⊗|s₁⟩⊗…`, written as a string such as `HDR`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MeasurementSetting(Vec<Polarization>);

impl MeasurementSetting {
    pub fn new(labels: Vec<Polarization>) -> Result<Self> {
        if labels.is_empty() {
            return invalid("measurement setting needs at least one qubit");
        }
        if let Some(bad) = labels.iter().find(|p| !TOMOGRAPHY_PROJECTIONS.contains(p)) {
            return invalid(format!("projection {bad} is not one of H, V, D, R"));
        }
        Ok(Self(labels))
    }

    pub fn n_qubits(&self) -> usize {
        self.0.len()
    }

    pub fn labels(&self) -> &[Polarization] {
        &self.0
    }

    /// Product ket of the setting in the H/V basis.
    pub fn ket<T: Real>(&self) -> DVector<Complex<T>> {
        let mut v = DVector::from_element(1, Complex::new(T::one(), T::zero()));
        for p in &self.0 {
            let k = p.ket::<T>();
            v = v.kronecker(&DVector::from_column_slice(k.as_slice()));
        }
        v
    }

    /// Position of this setting in [`enumerate_settings`] order.
    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, p| acc * 4 + TOMOGRAPHY_PROJECTIONS.iter().position(|q| q == p).unwrap())
    }
}

impl fmt::Display for MeasurementSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for MeasurementSetting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let labels = s.trim().chars().map(Polarization::from_char).collect::<Result<Vec<_>>>()?;
        Self::new(labels)
    }
}

impl Serialize for MeasurementSetting {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MeasurementSetting {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All `4^n` settings, lexicographic in `(H, V, D, R)` with qubit 0 most significant.
pub fn enumerate_settings(n: usize) -> Result<Vec<MeasurementSetting>> {
    if n == 0 {
        return invalid("n must be ≥ 1");
    }
    if n > 10 {
        return invalid(format!("{n} qubits is beyond the supported tomography size"));
    }
    Ok((0..4usize.pow(n as u32))
        .map(|idx| {
            let labels = (0..n).map(|q| TOMOGRAPHY_PROJECTIONS[(idx >> (2 * (n - 1 - q))) & 3]).collect();
            MeasurementSetting(labels)
        })
        .collect())
}

/// Born-rule probability `⟨s|ρ|s⟩`, clamped to `[0, 1]`.
pub fn projection_probability<T: Real>(rho: &DensityMatrix<T>, setting: &MeasurementSetting) -> Result<T> {
    if setting.n_qubits() != rho.n_qubits() {
        return invalid(format!("setting {setting} has {} qubits, state has {}", setting.n_qubits(), rho.n_qubits()));
    }
    let v = setting.ket::<T>();
    let p = v.dotc(&(rho.matrix() * &v)).re;
    Ok(p.max(T::zero()).min(T::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{make_ghz, Sign};

    #[test]
    fn three_qubit_settings() {
        let s = enumerate_settings(3).unwrap();
        assert_eq!(s.len(), 64);
        assert_eq!(s[0].to_string(), "HHH");
        assert_eq!(s[1].to_string(), "HHV");
        assert_eq!(s[63].to_string(), "RRR");
        assert!(s.iter().enumerate().all(|(i, x)| x.index() == i));
        assert!(s.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn small_sizes() {
        let one: Vec<String> = enumerate_settings(1).unwrap().iter().map(|s| s.to_string()).collect();
        assert_eq!(one, ["H", "V", "D", "R"]);
        assert_eq!(enumerate_settings(2).unwrap().len(), 16);
        assert!(enumerate_settings(0).is_err());
    }

    #[test]
    fn parse_and_reject() {
        let s: MeasurementSetting = "hdr".parse().unwrap();
        assert_eq!(s.to_string(), "HDR");
        assert!("HDA".parse::<MeasurementSetting>().is_err());
        assert!("".parse::<MeasurementSetting>().is_err());
        assert!("HQ".parse::<MeasurementSetting>().is_err());
    }

    #[test]
    fn ghz_probabilities() {
        let rho = make_ghz::<f64>(3, Sign::Plus).unwrap().to_density();
        let p = |s: &str| projection_probability(&rho, &s.parse().unwrap()).unwrap();
        assert!((p("HHH") - 0.5).abs() < 1e-15);
        assert!((p("VVV") - 0.5).abs() < 1e-15);
        assert!(p("HHV").abs() < 1e-15);
        // ⟨DDD|GHZ⟩ = 1/2
        assert!((p("DDD") - 0.25).abs() < 1e-15);
        assert!(projection_probability(&rho, &"HH".parse().unwrap()).is_err());
    }

    #[test]
    fn mixed_state_is_uniform() {
        let rho = DensityMatrix::<f64>::maximally_mixed(3).unwrap();
        for s in enumerate_settings(3).unwrap() {
            assert!((projection_probability(&rho, &s).unwrap() - 0.125).abs() < 1e-15);
        }
    }
}
