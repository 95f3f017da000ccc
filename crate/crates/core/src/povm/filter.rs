use nalgebra::Matrix2;
use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::qstate::{Op2, QuantumState};
use crate::scalar::Real;

/// Filter attenuation, stored as the measurable transmission ratio `a²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct FilterStrength<T: Real> {
    a_squared: T,
}

impl<T: Real> FilterStrength<T> {
    pub fn from_a_squared(a_squared: T) -> Result<Self> {
        if !(a_squared > T::zero() && a_squared <= T::one()) {
            return invalid(format!("a² must lie in (0, 1], got {a_squared}"));
        }
        Ok(Self { a_squared })
    }

    pub fn from_a(a: T) -> Result<Self> {
        if !(a > T::zero() && a <= T::one()) {
            return invalid(format!("a must lie in (0, 1], got {a}"));
        }
        Ok(Self { a_squared: a * a })
    }

    /// Transmission ratio of the filtered over the unfiltered polarization.
    pub fn from_transmissions(favoured: T, suppressed: T) -> Result<Self> {
        if !(favoured > T::zero()) {
            return invalid("favoured transmission must be positive");
        }
        Self::from_a_squared(suppressed / favoured)
    }

    pub fn a(&self) -> T {
        self.a_squared.sqrt()
    }

    pub fn a_squared(&self) -> T {
        self.a_squared
    }

    pub fn is_identity(&self) -> bool {
        self.a_squared == T::one()
    }
}

/// Polarization basis the filter acts in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterBasis {
    /// Attenuates `|D⟩` relative to `|A⟩`.
    Da,
    /// Attenuates `|H⟩` relative to `|V⟩`; the analysis basis rotated by a 45° waveplate.
    Hv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PovmOutcome {
    /// `ε₁ = |A⟩⟨A| + a²|D⟩⟨D|`, the post-selected outcome.
    Pass,
    /// `ε₂ = (1 − a²)|D⟩⟨D|`.
    Block,
}

/// Single-qubit two-outcome filter with Kraus operators
/// `M₁ = |A⟩⟨A| + a|D⟩⟨D|` and `M₂ = √(1−a²)|D⟩⟨D|` (or the H/V analogue).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KrausFilter<T: Real> {
    pub strength: FilterStrength<T>,
    pub basis: FilterBasis,
}

impl<T: Real> KrausFilter<T> {
    pub fn new(strength: FilterStrength<T>, basis: FilterBasis) -> Self {
        Self { strength, basis }
    }

    /// Projectors `(attenuated, transmitted)` in the H/V matrix representation.
    fn projectors(&self) -> (Op2<T>, Op2<T>) {
        let z = Complex::new(T::zero(), T::zero());
        let one = Complex::new(T::one(), T::zero());
        match self.basis {
            FilterBasis::Hv => (Matrix2::new(one, z, z, z), Matrix2::new(z, z, z, one)),
            FilterBasis::Da => {
                let h = Complex::new(T::lit(0.5), T::zero());
                (Matrix2::new(h, h, h, h), Matrix2::new(h, -h, -h, h))
            }
        }
    }

    pub fn kraus(&self, outcome: PovmOutcome) -> Op2<T> {
        let (att, pass) = self.projectors();
        match outcome {
            PovmOutcome::Pass => pass + att * Complex::new(self.strength.a(), T::zero()),
            PovmOutcome::Block => {
                att * Complex::new((T::one() - self.strength.a_squared()).max(T::zero()).sqrt(), T::zero())
            }
        }
    }

    /// POVM element `M†M` for the given outcome.
    pub fn element(&self, outcome: PovmOutcome) -> Op2<T> {
        let m = self.kraus(outcome);
        m.adjoint() * m
    }
}

/// A filter branch: normalized output, its probability and the outcome pattern.
#[derive(Clone, Debug, PartialEq)]
pub struct FilterOutcome<T: Real, S> {
    pub output_state: S,
    pub success_probability: T,
    pub per_qubit_outcome: Vec<PovmOutcome>,
}

/// Norm² below which a branch is reported as degenerate.
const DEGENERATE_NORM: f64 = 1e-15;

/// Applies the Kraus operators for `outcomes[q]` to every qubit `q` and renormalizes.
pub fn apply_branch<T: Real, S: QuantumState<T>>(
    state: &S,
    filter: &KrausFilter<T>,
    outcomes: &[PovmOutcome],
) -> Result<FilterOutcome<T, S>> {
    if outcomes.len() != state.n_qubits() {
        return invalid(format!("{} outcomes given for {} qubits", outcomes.len(), state.n_qubits()));
    }
    let mut out = state.clone();
    for (q, &o) in outcomes.iter().enumerate() {
        out = out.apply_local(&filter.kraus(o), q)?;
    }
    let p = out.weight();
    if !(p.to_f64_lossy() >= DEGENERATE_NORM) {
        return Err(Error::DegenerateInput(format!(
            "filtered state has norm² {p}; the input has no support on this branch"
        )));
    }
    Ok(FilterOutcome { output_state: out.normalized()?, success_probability: p, per_qubit_outcome: outcomes.to_vec() })
}

/// The post-selected branch where every qubit finds `ε₁`.
pub fn apply_filter_all<T: Real, S: QuantumState<T>>(
    state: &S,
    strength: FilterStrength<T>,
    basis: FilterBasis,
) -> Result<FilterOutcome<T, S>> {
    let outcomes = vec![PovmOutcome::Pass; state.n_qubits()];
    apply_branch(state, &KrausFilter::new(strength, basis), &outcomes)
}

/// Measures the filter on each qubit in turn, drawing outcomes from `rng`.
///
/// `success_probability` is the probability of the realized outcome pattern.
pub fn sample_filter_outcomes<T: Real, S: QuantumState<T>, R: Rng + ?Sized>(
    state: &S,
    strength: FilterStrength<T>,
    basis: FilterBasis,
    rng: &mut R,
) -> Result<FilterOutcome<T, S>> {
    let filter = KrausFilter::new(strength, basis);
    let mut current = state.normalized()?;
    let mut outcomes = Vec::with_capacity(state.n_qubits());
    let mut prob = T::one();
    for q in 0..state.n_qubits() {
        let passed = current.apply_local(&filter.kraus(PovmOutcome::Pass), q)?;
        let p_pass = passed.weight().min(T::one()).max(T::zero());
        let u: f64 = rng.random();
        let (outcome, branch, p) = if u < p_pass.to_f64_lossy() {
            (PovmOutcome::Pass, passed, p_pass)
        } else {
            let blocked = current.apply_local(&filter.kraus(PovmOutcome::Block), q)?;
            (PovmOutcome::Block, blocked, T::one() - p_pass)
        };
        outcomes.push(outcome);
        prob *= p;
        current = branch.normalized()?;
    }
    Ok(FilterOutcome { output_state: current, success_probability: prob, per_qubit_outcome: outcomes })
}
