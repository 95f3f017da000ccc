//! Shared JSON format: `{"n_qubits": n, "kind": "pure"|"density", "data": [[re, im], …]}`,
//! density matrices in row-major order.

use std::io::{Read, Write};

use nalgebra::DMatrix;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{DensityMatrix, PureState};
use crate::error::{invalid, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Density,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
struct StateJson<T: Real> {
    n_qubits: usize,
    kind: StateKind,
    data: Vec<[T; 2]>,
}

/// Either kind of state, as read from or written to the shared JSON format.
#[derive(Clone, Debug, PartialEq)]
pub enum State<T: Real> {
    Pure(PureState<T>),
    Density(DensityMatrix<T>),
}

impl<T: Real> State<T> {
    pub fn kind(&self) -> StateKind {
        match self {
            State::Pure(_) => StateKind::Pure,
            State::Density(_) => StateKind::Density,
        }
    }

    pub fn n_qubits(&self) -> usize {
        match self {
            State::Pure(p) => p.n_qubits(),
            State::Density(d) => d.n_qubits(),
        }
    }

    /// Density-matrix view (outer product for pure states).
    pub fn to_density(&self) -> DensityMatrix<T> {
        match self {
            State::Pure(p) => p.to_density(),
            State::Density(d) => d.clone(),
        }
    }

    /// Kronecker product of two states of the same kind.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (State::Pure(a), State::Pure(b)) => Ok(State::Pure(a.tensor(b))),
            (State::Density(a), State::Density(b)) => Ok(State::Density(a.tensor(b))),
            _ => invalid(format!("cannot tensor a {:?} state with a {:?} state", self.kind(), other.kind())),
        }
    }

    pub fn read_json<R: Read>(reader: R) -> Result<Self> {
        let raw: StateJson<T> = serde_json::from_reader(reader)?;
        Self::try_from(raw)
    }

    pub fn write_json<W: Write>(&self, writer: W) -> Result<()> {
        serde_json::to_writer_pretty(writer, &StateJson::from(self))?;
        Ok(())
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(StateJson::from(self)).expect("state serializes")
    }
}

impl<T: Real> From<PureState<T>> for State<T> {
    fn from(p: PureState<T>) -> Self {
        State::Pure(p)
    }
}

impl<T: Real> From<DensityMatrix<T>> for State<T> {
    fn from(d: DensityMatrix<T>) -> Self {
        State::Density(d)
    }
}

impl<T: Real> From<&State<T>> for StateJson<T> {
    fn from(state: &State<T>) -> Self {
        let pair = |z: &Complex<T>| [z.re, z.im];
        match state {
            State::Pure(p) => StateJson {
                n_qubits: p.n_qubits(),
                kind: StateKind::Pure,
                data: p.amplitudes().iter().map(pair).collect(),
            },
            State::Density(d) => {
                let m = d.matrix();
                let data = (0..m.nrows()).flat_map(|r| (0..m.ncols()).map(move |c| pair(&m[(r, c)]))).collect();
                StateJson { n_qubits: d.n_qubits(), kind: StateKind::Density, data }
            }
        }
    }
}

impl<T: Real> TryFrom<StateJson<T>> for State<T> {
    type Error = crate::error::Error;

    fn try_from(raw: StateJson<T>) -> Result<Self> {
        let values: Vec<Complex<T>> = raw.data.iter().map(|[r, i]| Complex::new(*r, *i)).collect();
        match raw.kind {
            StateKind::Pure => Ok(State::Pure(PureState::new(raw.n_qubits, values)?)),
            StateKind::Density => {
                let dim = 1usize.checked_shl(raw.n_qubits as u32).unwrap_or(0);
                if raw.n_qubits == 0 || values.len() != dim * dim {
                    return invalid(format!(
                        "density data has {} entries, expected {} for {} qubits",
                        values.len(),
                        dim * dim,
                        raw.n_qubits
                    ));
                }
                let m = DMatrix::from_row_slice(dim, dim, &values);
                Ok(State::Density(DensityMatrix::new(raw.n_qubits, m)?))
            }
        }
    }
}

impl<T: Real> Serialize for PureState<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StateJson::from(&State::Pure(self.clone())).serialize(s)
    }
}

impl<T: Real> Serialize for DensityMatrix<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StateJson::from(&State::Density(self.clone())).serialize(s)
    }
}

impl<T: Real> Serialize for State<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StateJson::from(self).serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for State<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = StateJson::<T>::deserialize(d)?;
        State::try_from(raw).map_err(serde::de::Error::custom)
    }
}

impl<'de, T: Real> Deserialize<'de> for DensityMatrix<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match State::<T>::deserialize(d)? {
            State::Density(rho) => Ok(rho),
            State::Pure(_) => Err(serde::de::Error::custom("expected a density matrix, found a pure state")),
        }
    }
}

impl<'de, T: Real> Deserialize<'de> for PureState<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match State::<T>::deserialize(d)? {
            State::Pure(p) => Ok(p),
            State::Density(_) => Err(serde::de::Error::custom("expected a pure state, found a density matrix")),
        }
    }
}
