//! Closed-form fidelities and success probabilities of the GHZ filter.

use super::filter::FilterStrength;
use crate::error::{invalid, Result};
use crate::scalar::Real;

/// `Σ_{k odd} C(n,k) x^{k−1}`, i.e. `((1+x)^n − (1−x)^n) / (2x)` without the cancellation at small `x`.
fn odd_binomial_series<T: Real>(n: usize, x: T) -> T {
    let mut total = T::zero();
    let mut binom = T::from_usize(n).unwrap(); // C(n, 1)
    let mut power = T::one(); // x^(k-1)
    let mut k = 1;
    while k <= n {
        total += binom * power;
        if k + 2 > n {
            break;
        }
        // C(n, k+2) = C(n, k)·(n−k)(n−k−1)/((k+1)(k+2))
        let num = T::from_usize((n - k) * (n - k - 1)).unwrap();
        let den = T::from_usize((k + 1) * (k + 2)).unwrap();
        binom = binom * num / den;
        power *= x * x;
        k += 2;
    }
    total
}

/// `F_W′ = 3/(a⁴ + 3)` for three qubits.
pub fn fidelity_w3_analytic<T: Real>(strength: FilterStrength<T>) -> T {
    let x = strength.a_squared();
    T::lit(3.0) / (x * x + T::lit(3.0))
}

/// `F_GHZ = (a⁴ + 6a² + 9)/(4a⁴ + 12)` for three qubits.
pub fn fidelity_ghz3_analytic<T: Real>(strength: FilterStrength<T>) -> T {
    let x = strength.a_squared();
    (x * x + T::lit(6.0) * x + T::lit(9.0)) / (T::lit(4.0) * x * x + T::lit(12.0))
}

/// `F_W′^N = 2a²N / ((1 + a²)^N − (1 − a²)^N)`, valid for even and odd `N`.
pub fn fidelity_wn_analytic<T: Real>(n: usize, strength: FilterStrength<T>) -> Result<T> {
    if n < 2 {
        return invalid(format!("n must be ≥ 2 (got {n})"));
    }
    let x = strength.a_squared();
    Ok(T::from_usize(n).unwrap() / odd_binomial_series(n, x))
}

/// Probability that all `N` filters return `ε₁` on the (relabelled) GHZ input:
/// `((1 + a²)^N − (1 − a²)^N) / 2^N`. For `N = 3` this is `(a⁶ + 3a²)/4`.
pub fn success_probability_analytic<T: Real>(n: usize, strength: FilterStrength<T>) -> Result<T> {
    if n < 2 {
        return invalid(format!("n must be ≥ 2 (got {n})"));
    }
    let x = strength.a_squared();
    let two_n = T::lit(2.0).powi(n as i32);
    Ok((x + x) * odd_binomial_series(n, x) / two_n)
}

/// Normalization `𝒩 = 2/√(a⁶ + 3a²)` of the three-qubit post-selected state.
pub fn normalization_ghz3<T: Real>(strength: FilterStrength<T>) -> T {
    let a2 = strength.a_squared();
    T::lit(2.0) / (a2 * a2 * a2 + T::lit(3.0) * a2).sqrt()
}
