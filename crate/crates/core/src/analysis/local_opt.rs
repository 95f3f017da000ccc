//! Fidelity with the best state in a local-unitary orbit.

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fidelity::fidelity_pure;
use crate::error::{invalid, Error, Result};
use crate::optim::{maximize, AscentOptions};
use crate::qstate::{
    make_ghz, make_w_prime, zyz_gradient, zyz_matrix, DensityMatrix, LocalUnitary, Op2, PureState, Sign,
};
use crate::rng::stream_rng;
use crate::scalar::Real;

/// Target orbit: states related to `|GHZ⟩` or `|W⟩` by one unitary per qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TargetFamily {
    #[serde(rename = "ghz_g")]
    GhzG,
    #[serde(rename = "w_g")]
    WG,
}

impl TargetFamily {
    /// Representative member: `|N+⟩` or `|W′_N⟩`.
    pub fn canonical<T: Real>(self, n: usize) -> Result<PureState<T>> {
        match self {
            TargetFamily::GhzG => make_ghz(n, Sign::Plus),
            TargetFamily::WG => make_w_prime(n),
        }
    }
}

impl fmt::Display for TargetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TargetFamily::GhzG => "ghz_g",
            TargetFamily::WG => "w_g",
        })
    }
}

impl FromStr for TargetFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ghz" | "ghz_g" => Ok(TargetFamily::GhzG),
            "w" | "w_g" => Ok(TargetFamily::WG),
            other => invalid(format!("unknown target family '{other}'")),
        }
    }
}

/// ZYZ Euler angles `(α, β, γ)` per qubit; `U = Rz(α)·Ry(β)·Rz(γ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct LocalRotationParams<T: Real> {
    pub angles: Vec<[T; 3]>,
}

impl<T: Real> LocalRotationParams<T> {
    pub fn identity(n: usize) -> Self {
        Self { angles: vec![[T::zero(); 3]; n] }
    }

    /// Hadamard on every qubit (up to global phase): maps `|W′⟩` to the H/V `|W⟩`.
    pub fn hadamard(n: usize) -> Self {
        Self { angles: vec![[T::zero(), T::frac_pi_2(), T::pi()]; n] }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut draw = || T::lit(rng.random_range(-std::f64::consts::PI..std::f64::consts::PI));
        Self { angles: (0..n).map(|_| [draw(), draw(), draw()]).collect() }
    }

    pub fn n_qubits(&self) -> usize {
        self.angles.len()
    }

    pub fn unitaries(&self) -> Vec<LocalUnitary<T>> {
        self.angles.iter().map(|[a, b, g]| LocalUnitary::zyz(*a, *b, *g)).collect()
    }

    /// `(U₁ ⊗ … ⊗ U_n)|state⟩`.
    pub fn rotate(&self, state: &PureState<T>) -> Result<PureState<T>> {
        let mut out = state.clone();
        for (q, u) in self.unitaries().iter().enumerate() {
            out = out.apply_local(u.matrix(), q)?;
        }
        Ok(out)
    }

    fn to_vector(&self) -> DVector<T> {
        DVector::from_iterator(3 * self.angles.len(), self.angles.iter().flatten().copied())
    }

    fn from_vector(x: &DVector<T>) -> Self {
        Self { angles: x.as_slice().chunks(3).map(|c| [c[0], c[1], c[2]]).collect() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalOptOptions {
    /// Random starts in addition to the deterministic ones.
    pub starts: usize,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for LocalOptOptions {
    fn default() -> Self {
        Self { starts: 32, max_iterations: 500, tolerance: 1e-12, seed: 0 }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound = "T: Real")]
pub struct LocalOptResult<T: Real> {
    pub fidelity: T,
    pub params: LocalRotationParams<T>,
    /// Fidelity with the family's canonical member (the identity start).
    pub canonical_fidelity: T,
    pub starts_run: usize,
}

/// Value and angle-gradient of `⟨φ|ρ|φ⟩` with `φ = (⊗U_k)|target⟩`.
fn orbit_objective<T: Real>(rho: &DensityMatrix<T>, target: &PureState<T>, x: &DVector<T>) -> (T, DVector<T>) {
    let n = target.n_qubits();
    let us: Vec<Op2<T>> = x.as_slice().chunks(3).map(|c| zyz_matrix(c[0], c[1], c[2])).collect();
    let mut phi = target.clone();
    for (q, u) in us.iter().enumerate() {
        phi = phi.apply_local(u, q).expect("qubit in range");
    }
    let rho_phi = rho.matrix() * phi.amplitudes();
    let value = phi.amplitudes().dotc(&rho_phi).re;
    let mut grad = DVector::zeros(x.len());
    let two = T::one() + T::one();
    for k in 0..n {
        let mut partial = target.clone();
        for (q, u) in us.iter().enumerate() {
            if q != k {
                partial = partial.apply_local(u, q).expect("qubit in range");
            }
        }
        let c = &x.as_slice()[3 * k..3 * k + 3];
        for (j, du) in zyz_gradient(c[0], c[1], c[2]).iter().enumerate() {
            let dphi = partial.apply_local(du, k).expect("qubit in range");
            // d⟨φ|ρ|φ⟩ = 2 Re⟨dφ|ρ|φ⟩
            grad[3 * k + j] = two * dphi.amplitudes().dotc(&rho_phi).re;
        }
    }
    (value, grad)
}

/// Maximizes `⟨target|U†ρU|target⟩` over product unitaries by multi-start ascent.
///
/// Starts are the identity, the all-Hadamard rotation and `options.starts`
/// seeded random angle sets. The search is local, so the result is the best
/// value found over those starts.
pub fn fidelity_local_optimized<T: Real>(
    rho: &DensityMatrix<T>,
    family: TargetFamily,
    options: &LocalOptOptions,
) -> Result<LocalOptResult<T>> {
    let n = rho.n_qubits();
    let target = family.canonical::<T>(n)?;
    let canonical_fidelity = fidelity_pure(rho, &target)?;

    let mut starts = vec![LocalRotationParams::identity(n), LocalRotationParams::hadamard(n)];
    starts.extend((0..options.starts).map(|i| {
        let mut rng = stream_rng(options.seed, i as u64);
        LocalRotationParams::random(n, &mut rng)
    }));
    let ascent = AscentOptions {
        max_iterations: options.max_iterations,
        relative_tolerance: T::lit(options.tolerance),
        gradient_tolerance: T::lit(1e-10),
        ..AscentOptions::default()
    };

    let runs: Vec<(T, DVector<T>)> = starts
        .par_iter()
        .map(|start| {
            let rep = maximize(|x| orbit_objective(rho, &target, x), start.to_vector(), &ascent);
            (rep.value, rep.x)
        })
        .collect();

    let mut best: Option<(T, &DVector<T>)> = None;
    for (value, x) in &runs {
        if value.is_finite() && best.is_none_or(|(b, _)| *value > b) {
            best = Some((*value, x));
        }
    }
    let (value, x) = best.ok_or_else(|| {
        Error::OptimizerFailure(format!("all {} local-unitary starts returned non-finite values", runs.len()))
    })?;
    let fidelity = value.max(canonical_fidelity).max(T::zero()).min(T::one());
    Ok(LocalOptResult {
        fidelity,
        params: LocalRotationParams::from_vector(x),
        canonical_fidelity,
        starts_run: runs.len(),
    })
}

/// `(⊗U_k) ρ (⊗U_k)†`.
pub fn rotate_density<T: Real>(rho: &DensityMatrix<T>, params: &LocalRotationParams<T>) -> Result<DensityMatrix<T>> {
    if params.n_qubits() != rho.n_qubits() {
        return invalid("rotation and state sizes differ");
    }
    let mut out = rho.clone();
    for (q, u) in params.unitaries().iter().enumerate() {
        out = out.apply_local(u.matrix(), q)?;
    }
    Ok(out)
}
