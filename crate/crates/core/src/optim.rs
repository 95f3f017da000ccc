//! Limited-memory quasi-Newton ascent with Armijo backtracking.
//!
//! Used for the likelihood maximization in tomography and for the local-unitary
//! fidelity search. Accepted steps never decrease the objective.

use std::collections::VecDeque;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct AscentOptions<T: Real> {
    pub max_iterations: usize,
    /// Stop once `|Δf| ≤ relative_tolerance · max(|f|, 1e-300)`.
    pub relative_tolerance: T,
    /// Stop once the gradient norm falls below this.
    pub gradient_tolerance: T,
    /// Number of curvature pairs kept.
    pub memory: usize,
    pub record_history: bool,
}

impl<T: Real> Default for AscentOptions<T> {
    fn default() -> Self {
        Self {
            max_iterations: 5000,
            relative_tolerance: T::lit(1e-10),
            gradient_tolerance: T::lit(1e-8),
            memory: 10,
            record_history: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    RelativeChange,
    GradientNorm,
    /// No ascent step found even along the gradient; a numerical stationary point.
    Stalled,
    MaxIterations,
}

#[derive(Clone, Debug)]
pub struct AscentReport<T: Real> {
    pub x: DVector<T>,
    pub value: T,
    pub iterations: usize,
    pub termination: Termination,
    pub gradient_norm: T,
    /// Objective after each accepted step (when requested), starting with the initial value.
    pub history: Vec<T>,
}

impl<T: Real> AscentReport<T> {
    pub fn converged(&self) -> bool {
        self.termination != Termination::MaxIterations
    }
}

const ARMIJO: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 60;

/// Maximizes `objective`, which returns the value and gradient at a point.
/// Infeasible points may return a non-finite value; the line search rejects them.
pub fn maximize<T, F>(mut objective: F, x0: DVector<T>, opts: &AscentOptions<T>) -> AscentReport<T>
where
    T: Real,
    F: FnMut(&DVector<T>) -> (T, DVector<T>),
{
    let mut x = x0;
    let (mut f, mut g) = objective(&x);
    let mut history = if opts.record_history { vec![f] } else { Vec::new() };
    let mut pairs: VecDeque<(DVector<T>, DVector<T>, T)> = VecDeque::new();
    let mut iterations = 0;
    let mut termination = Termination::MaxIterations;

    while iterations < opts.max_iterations {
        let gnorm = g.norm();
        if gnorm <= opts.gradient_tolerance {
            termination = Termination::GradientNorm;
            break;
        }
        let mut dir = two_loop(&g, &pairs);
        if !(dir.dot(&g) > T::zero()) {
            pairs.clear();
            dir = &g / gnorm;
        }
        let step = match line_search(&mut objective, &x, f, &g, &dir) {
            Some(s) => s,
            None if !pairs.is_empty() => {
                pairs.clear();
                let steepest = &g / gnorm;
                match line_search(&mut objective, &x, f, &g, &steepest) {
                    Some(s) => s,
                    None => {
                        termination = Termination::Stalled;
                        break;
                    }
                }
            }
            None => {
                termination = Termination::Stalled;
                break;
            }
        };
        let (x_new, f_new, g_new) = step;
        debug_assert!(f_new >= f, "accepted step decreased the objective");
        iterations += 1;
        if opts.record_history {
            history.push(f_new);
        }

        let s = &x_new - &x;
        // curvature of −f
        let y = &g - &g_new;
        let sy = s.dot(&y);
        if sy > T::lit(1e-300) {
            pairs.push_back((s, y, sy));
            if pairs.len() > opts.memory {
                pairs.pop_front();
            }
        }
        let change = (f_new - f).abs();
        let scale = f.abs().max(T::lit(1e-300));
        x = x_new;
        f = f_new;
        g = g_new;
        if change <= opts.relative_tolerance * scale {
            termination = Termination::RelativeChange;
            break;
        }
    }

    let gradient_norm = g.norm();
    AscentReport { x, value: f, iterations, termination, gradient_norm, history }
}

/// L-BFGS two-loop recursion for the ascent direction (inverse Hessian of −f applied to ∇f).
fn two_loop<T: Real>(g: &DVector<T>, pairs: &VecDeque<(DVector<T>, DVector<T>, T)>) -> DVector<T> {
    let mut q = g.clone();
    let mut alphas = Vec::with_capacity(pairs.len());
    for (s, y, sy) in pairs.iter().rev() {
        let alpha = s.dot(&q) / *sy;
        q.axpy(-alpha, y, T::one());
        alphas.push(alpha);
    }
    if let Some((_, y, sy)) = pairs.back() {
        q *= *sy / y.dot(y);
    }
    for ((s, y, sy), alpha) in pairs.iter().zip(alphas.into_iter().rev()) {
        let beta = y.dot(&q) / *sy;
        q.axpy(alpha - beta, s, T::one());
    }
    q
}

type Step<T> = (DVector<T>, T, DVector<T>);

fn line_search<T, F>(objective: &mut F, x: &DVector<T>, f: T, g: &DVector<T>, dir: &DVector<T>) -> Option<Step<T>>
where
    T: Real,
    F: FnMut(&DVector<T>) -> (T, DVector<T>),
{
    let slope = g.dot(dir);
    if !(slope > T::zero()) {
        return None;
    }
    let mut alpha = T::one();
    let half = T::lit(0.5);
    for _ in 0..MAX_BACKTRACKS {
        let candidate = x + dir * alpha;
        let (fc, gc) = objective(&candidate);
        if fc.is_finite() && fc >= f + T::lit(ARMIJO) * alpha * slope && fc > f {
            return Some((candidate, fc, gc));
        }
        alpha *= half;
    }
    None
}
