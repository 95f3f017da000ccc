//! Maximum-likelihood density-matrix reconstruction.
//!
//! Counts are modeled as Poisson with means `λ_i = s·⟨s_i|ρ|s_i⟩`. The global
//! scale `s` has the closed-form optimum `s = Σc / Σp`, which leaves the profile
//! objective `Σ f_i ln p_i − ln Σ p_i` over normalized frequencies `f_i`.
//! The state is parameterized as `ρ = T†T / tr(T†T)` with `T` lower triangular
//! (real diagonal), so every iterate is physical.

use std::collections::HashSet;

use nalgebra::{Cholesky, DMatrix, DVector};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::counts::CountRecord;
use super::ingest::ingest_counts;
use super::settings::{enumerate_settings, MeasurementSetting, TOMOGRAPHY_PROJECTIONS};
use crate::error::{invalid, Result};
use crate::optim::{maximize, AscentOptions, Termination};
use crate::qstate::DensityMatrix;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Initializer {
    /// Linear inversion projected onto the physical states, maximally mixed if that fails.
    LinearInversion,
    MaximallyMixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct MleOptions<T: Real> {
    pub max_iterations: usize,
    /// Relative change of the log-likelihood below which the ascent stops.
    pub tolerance: T,
    pub gradient_tolerance: T,
    pub initializer: Initializer,
    /// Keep the objective value after every accepted step.
    pub record_history: bool,
}

impl<T: Real> Default for MleOptions<T> {
    fn default() -> Self {
        Self {
            max_iterations: 5000,
            tolerance: T::lit(1e-10),
            gradient_tolerance: T::lit(1e-8),
            initializer: Initializer::LinearInversion,
            record_history: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound = "T: Real")]
pub struct ReconstructionResult<T: Real> {
    pub rho: DensityMatrix<T>,
    /// Poisson log-likelihood `Σ c_i ln λ_i − Σ λ_i` of the corrected counts at the fitted scale.
    pub log_likelihood: T,
    /// Fitted scale `s` (expected corrected counts per unit probability).
    pub scale: T,
    pub iterations: usize,
    pub converged: bool,
    pub termination: Termination,
    /// Gradient norm of the profile objective at the returned point.
    pub residual: T,
    /// Profile objective per accepted step, when requested.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub history: Vec<T>,
}

/// Profile likelihood over the Cholesky parameters.
pub(crate) struct Likelihood<T: Real> {
    dim: usize,
    /// Columns are the setting kets.
    kets: DMatrix<Complex<T>>,
    freqs: Vec<T>,
}

impl<T: Real> Likelihood<T> {
    pub(crate) fn new(settings: &[MeasurementSetting], freqs: Vec<T>, n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let mut kets = DMatrix::zeros(dim, settings.len());
        for (i, s) in settings.iter().enumerate() {
            kets.set_column(i, &s.ket::<T>());
        }
        Self { dim, kets, freqs }
    }

    /// Probabilities `⟨s_i|ρ|s_i⟩` for an arbitrary (possibly unnormalized) operator.
    fn probabilities(&self, rho: &DMatrix<Complex<T>>) -> Vec<T> {
        let y = rho * &self.kets;
        (0..self.kets.ncols()).map(|i| self.kets.column(i).dotc(&y.column(i)).re).collect()
    }

    fn value_and_weights(&self, rho: &DMatrix<Complex<T>>) -> (T, Vec<T>, Vec<T>) {
        let p = self.probabilities(rho);
        let total_p = p.iter().fold(T::zero(), |a, &b| a + b);
        let floor = T::zero();
        let mut value = -total_p.ln();
        for (&f, &pi) in self.freqs.iter().zip(&p) {
            if f > T::zero() {
                if !(pi > floor) {
                    return (T::from_f64(f64::NEG_INFINITY).unwrap(), p, Vec::new());
                }
                value += f * pi.ln();
            }
        }
        let inv_total = T::one() / total_p;
        let weights = self
            .freqs
            .iter()
            .zip(&p)
            .map(|(&f, &pi)| if f > T::zero() { f / pi - inv_total } else { -inv_total })
            .collect();
        (value, p, weights)
    }

    /// Value and gradient with respect to the Cholesky parameters.
    pub(crate) fn evaluate(&self, x: &DVector<T>) -> (T, DVector<T>) {
        let t = params_to_cholesky(x, self.dim);
        let a = t.adjoint() * &t;
        let tr = a.trace().re;
        if !(tr > T::zero()) {
            return (T::from_f64(f64::NEG_INFINITY).unwrap(), DVector::zeros(x.len()));
        }
        let rho = &a * Complex::new(T::one() / tr, T::zero());
        let (value, p, weights) = self.value_and_weights(&rho);
        if !value.is_finite() {
            return (value, DVector::zeros(x.len()));
        }
        // G = Σ w_i |s_i⟩⟨s_i|
        let mut scaled = self.kets.clone();
        for (i, &w) in weights.iter().enumerate() {
            scaled.column_mut(i).scale_mut(w);
        }
        let g = scaled * self.kets.adjoint();
        let g_rho = weights.iter().zip(&p).fold(T::zero(), |acc, (&w, &pi)| acc + w * pi);
        let mut h = g;
        for k in 0..self.dim {
            h[(k, k)] -= Complex::new(g_rho, T::zero());
        }
        let m = (&t * h) * Complex::new((T::one() + T::one()) / tr, T::zero());
        (value, cholesky_gradient(&m))
    }
}

/// Lower-triangular `T` from `d` diagonal reals followed by `(re, im)` pairs row by row.
pub(crate) fn params_to_cholesky<T: Real>(x: &DVector<T>, dim: usize) -> DMatrix<Complex<T>> {
    let mut t = DMatrix::zeros(dim, dim);
    for j in 0..dim {
        t[(j, j)] = Complex::new(x[j], T::zero());
    }
    let mut k = dim;
    for j in 1..dim {
        for c in 0..j {
            t[(j, c)] = Complex::new(x[k], x[k + 1]);
            k += 2;
        }
    }
    t
}

pub(crate) fn cholesky_to_params<T: Real>(t: &DMatrix<Complex<T>>) -> DVector<T> {
    let dim = t.nrows();
    let mut x = DVector::zeros(dim * dim);
    for j in 0..dim {
        x[j] = t[(j, j)].re;
    }
    let mut k = dim;
    for j in 1..dim {
        for c in 0..j {
            x[k] = t[(j, c)].re;
            x[k + 1] = t[(j, c)].im;
            k += 2;
        }
    }
    x
}

fn cholesky_gradient<T: Real>(m: &DMatrix<Complex<T>>) -> DVector<T> {
    // ∂/∂Re T_jk = Re M_jk, ∂/∂Im T_jk = Im M_jk, with M = 2 T H / tr
    cholesky_to_params(m)
}

/// Lower-triangular `T` with `T†T = rho` (for full-rank `rho`).
pub(crate) fn cholesky_of<T: Real>(rho: &DMatrix<Complex<T>>) -> Option<DMatrix<Complex<T>>> {
    let d = rho.nrows();
    // reversing the index order turns the T†T factorization into an ordinary Cholesky
    let flipped = DMatrix::from_fn(d, d, |r, c| rho[(d - 1 - r, d - 1 - c)]);
    let l = Cholesky::new(flipped)?.unpack();
    Some(DMatrix::from_fn(d, d, |r, c| l[(d - 1 - c, d - 1 - r)].conj()))
}

/// Single-qubit dual frame of the `H, V, D, R` projectors: `tr(Π_j Δ_k) = δ_jk`.
fn dual_frame<T: Real>() -> Vec<DMatrix<Complex<T>>> {
    let projectors: Vec<DMatrix<Complex<T>>> = TOMOGRAPHY_PROJECTIONS
        .iter()
        .map(|p| {
            let k = DVector::from_column_slice(p.ket::<T>().as_slice());
            &k * k.adjoint()
        })
        .collect();
    let gram = DMatrix::from_fn(4, 4, |j, l| (&projectors[j] * &projectors[l]).trace().re);
    let inv = gram.try_inverse().expect("H, V, D, R projectors are linearly independent");
    (0..4)
        .map(|k| {
            (0..4).fold(DMatrix::zeros(2, 2), |acc, l| acc + &projectors[l] * Complex::new(inv[(k, l)], T::zero()))
        })
        .collect()
}

/// Linear-inversion estimate clipped to the physical states.
pub fn linear_inversion<T: Real>(
    settings: &[MeasurementSetting],
    counts: &[T],
    n_qubits: usize,
) -> Option<DensityMatrix<T>> {
    let duals = dual_frame::<T>();
    let dim = 1usize << n_qubits;
    let mut est = DMatrix::<Complex<T>>::zeros(dim, dim);
    for (s, &c) in settings.iter().zip(counts) {
        if c == T::zero() {
            continue;
        }
        let mut op = DMatrix::from_element(1, 1, Complex::new(T::one(), T::zero()));
        for p in s.labels() {
            let k = TOMOGRAPHY_PROJECTIONS.iter().position(|q| q == p).unwrap();
            op = op.kronecker(&duals[k]);
        }
        est += op * Complex::new(c, T::zero());
    }
    let herm = (&est + est.adjoint()) * Complex::new(T::lit(0.5), T::zero());
    let eig = herm.symmetric_eigen();
    let clipped: Vec<T> = eig.eigenvalues.iter().map(|&l| l.max(T::zero())).collect();
    let total = clipped.iter().fold(T::zero(), |a, &b| a + b);
    if !(total > T::zero()) || !total.is_finite() {
        return None;
    }
    let mut rho = DMatrix::zeros(dim, dim);
    for (k, &l) in clipped.iter().enumerate() {
        if l > T::zero() {
            let v = eig.eigenvectors.column(k);
            rho += (v * v.adjoint()) * Complex::new(l / total, T::zero());
        }
    }
    DensityMatrix::new_unnormalized(n_qubits, rho).ok()
}

fn check_complete<T: Real>(records: &[CountRecord<T>], n: usize) -> Result<()> {
    if let Some(r) = records.iter().find(|r| r.setting.n_qubits() != n) {
        return invalid(format!("setting {} does not have {n} qubits", r.setting));
    }
    let present: HashSet<&MeasurementSetting> = records.iter().map(|r| &r.setting).collect();
    let missing: Vec<String> =
        enumerate_settings(n)?.into_iter().filter(|s| !present.contains(s)).map(|s| s.to_string()).collect();
    if !missing.is_empty() {
        let shown = missing.iter().take(8).cloned().collect::<Vec<_>>().join(", ");
        return invalid(format!(
            "incomplete setting set: {} of {} settings missing ({shown}{})",
            missing.len(),
            4usize.pow(n as u32),
            if missing.len() > 8 { ", …" } else { "" }
        ));
    }
    Ok(())
}

/// Fraction of identity mixed into the starting point so it lies strictly inside the state space.
const START_MIXING: f64 = 1e-3;

pub fn reconstruct_mle<T: Real>(
    records: &[CountRecord<T>],
    n: usize,
    options: &MleOptions<T>,
) -> Result<ReconstructionResult<T>> {
    if n == 0 {
        return invalid("n must be ≥ 1");
    }
    check_complete(records, n)?;
    let table = ingest_counts(records)?;
    let dim = 1usize << n;
    let likelihood = Likelihood::new(&table.settings, table.frequencies.clone(), n);

    let start = match options.initializer {
        Initializer::LinearInversion => linear_inversion(&table.settings, &table.corrected, n),
        Initializer::MaximallyMixed => None,
    };
    let mixed =
        DMatrix::<Complex<T>>::identity(dim, dim) * Complex::new(T::one() / T::from_usize(dim).unwrap(), T::zero());
    let eps = Complex::new(T::lit(START_MIXING), T::zero());
    let rho0 = match start {
        Some(r) => r.into_matrix() * (Complex::new(T::one(), T::zero()) - eps) + &mixed * eps,
        None => mixed.clone(),
    };
    let t0 = cholesky_of(&rho0).or_else(|| cholesky_of(&mixed)).expect("identity has a Cholesky factor");

    let ascent = AscentOptions {
        max_iterations: options.max_iterations,
        relative_tolerance: options.tolerance,
        gradient_tolerance: options.gradient_tolerance,
        record_history: options.record_history,
        ..AscentOptions::default()
    };
    let report = maximize(|x| likelihood.evaluate(x), cholesky_to_params(&t0), &ascent);

    let t = params_to_cholesky(&report.x, dim);
    let a = t.adjoint() * &t;
    let tr = a.trace().re;
    let rho = &a * Complex::new(T::one() / tr, T::zero());
    let rho = (&rho + rho.adjoint()) * Complex::new(T::lit(0.5), T::zero());

    let p = likelihood.probabilities(&rho);
    let total_p = p.iter().fold(T::zero(), |a, &b| a + b);
    let scale = table.total / total_p;
    let mut log_likelihood = -table.total;
    for (&c, &pi) in table.corrected.iter().zip(&p) {
        if c > T::zero() {
            log_likelihood += c * (scale * pi).ln();
        }
    }

    Ok(ReconstructionResult {
        rho: DensityMatrix::new_unnormalized(n, rho)?,
        log_likelihood,
        scale,
        iterations: report.iterations,
        converged: report.converged(),
        termination: report.termination,
        residual: report.gradient_norm,
        history: report.history,
    })
}
