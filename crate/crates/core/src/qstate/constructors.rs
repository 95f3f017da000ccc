//! Canonical GHZ and W states and the diagonal-basis expansion.

use std::fmt;

use nalgebra::DVector;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::basis::da_label;
use super::pure::PureState;
use super::unitary::LocalUnitary;
use crate::error::{invalid, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

fn check_multi(n: usize) -> Result<()> {
    if n < 2 {
        return invalid(format!("n must be ≥ 2 (got {n})"));
    }
    if n > 24 {
        return invalid(format!("n = {n} exceeds the supported maximum of 24"));
    }
    Ok(())
}

/// `(|H⟩^⊗n ± |V⟩^⊗n)/√2`.
pub fn make_ghz<T: Real>(n: usize, sign: Sign) -> Result<PureState<T>> {
    check_multi(n)?;
    let dim = 1usize << n;
    let s = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    let mut amps = DVector::zeros(dim);
    amps[0] = Complex::new(s, T::zero());
    amps[dim - 1] = Complex::new(if sign == Sign::Plus { s } else { -s }, T::zero());
    Ok(PureState::from_vector(n, amps))
}

/// Equal superposition of the `n` product strings with exactly one bit clear.
fn single_zero_superposition<T: Real>(n: usize) -> PureState<T> {
    let dim = 1usize << n;
    let w = Complex::new(T::one() / T::from_usize(n).unwrap().sqrt(), T::zero());
    let mut amps = DVector::zeros(dim);
    for q in 0..n {
        amps[(dim - 1) & !(1 << q)] = w;
    }
    PureState::from_vector(n, amps)
}

/// `|W′_n⟩ = (|DA…A⟩ + |AD…A⟩ + … + |AA…D⟩)/√n`, returned in the H/V basis.
pub fn make_w_prime<T: Real>(n: usize) -> Result<PureState<T>> {
    check_multi(n)?;
    // H^⊗n takes the H/V coordinates of a string to the same D/A string
    Ok(single_zero_superposition::<T>(n).apply_all(LocalUnitary::<T>::hadamard().matrix()))
}

/// `|W_n⟩`: equal superposition of the `n` strings with a single `H`, e.g. `(|HVV⟩+|VHV⟩+|VVH⟩)/√3`.
pub fn make_w_hv<T: Real>(n: usize) -> Result<PureState<T>> {
    check_multi(n)?;
    Ok(single_zero_superposition(n))
}

/// One product term of a state written in the D/A basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct DaTerm<T: Real> {
    /// String over `{D, A}`, qubit 0 first.
    pub label: String,
    pub amplitude: Complex<T>,
}

impl<T: Real> DaTerm<T> {
    pub fn a_count(&self) -> usize {
        self.label.chars().filter(|&c| c == 'A').count()
    }

    pub fn d_count(&self) -> usize {
        self.label.len() - self.a_count()
    }
}

/// Amplitudes `⟨s|ψ⟩` for all `2^n` D/A product strings `s`, in index order (`D = 0`, `A = 1`).
pub fn expand_in_da_basis<T: Real>(state: &PureState<T>) -> Vec<DaTerm<T>> {
    let n = state.n_qubits();
    // ⟨D| and ⟨A| are the rows of the Hadamard matrix
    let rotated = state.apply_all(LocalUnitary::<T>::hadamard().matrix());
    rotated.amplitudes().iter().enumerate().map(|(i, &amplitude)| DaTerm { label: da_label(i, n), amplitude }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::basis::Polarization::{self, *};
    use crate::qstate::DensityMatrix;

    const S2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn by_hand(terms: &[&[Polarization]]) -> PureState<f64> {
        let mut acc = PureState::product(terms[0]).unwrap().amplitudes().clone();
        for t in &terms[1..] {
            acc += PureState::product(t).unwrap().amplitudes();
        }
        let n = terms[0].len();
        PureState::new_unnormalized(n, acc.iter().copied().collect()).unwrap().normalized().unwrap()
    }

    #[test]
    fn ghz3_amplitudes() {
        let g = make_ghz::<f64>(3, Sign::Plus).unwrap();
        for i in 0..8 {
            let expected = if i == 0 || i == 7 { S2 } else { 0.0 };
            assert!((g.amplitude(i).re - expected).abs() < 1e-15);
            assert_eq!(g.amplitude(i).im, 0.0);
        }
        let gm = make_ghz::<f64>(3, Sign::Minus).unwrap();
        assert!((gm.amplitude(7).re + S2).abs() < 1e-15);
    }

    #[test]
    fn ghz2_is_phi_plus() {
        let g = make_ghz::<f64>(2, Sign::Plus).unwrap();
        let want = [S2, 0.0, 0.0, S2];
        for (z, w) in g.amplitudes().iter().zip(want) {
            assert!((z.re - w).abs() < 1e-15);
        }
    }

    #[test]
    fn small_n_rejected() {
        assert!(make_ghz::<f64>(1, Sign::Plus).is_err());
        assert!(make_w_prime::<f64>(1).is_err());
        assert!(make_w_hv::<f64>(0).is_err());
    }

    #[test]
    fn w_prime_matches_hand_expansion() {
        let w = make_w_prime::<f64>(3).unwrap();
        assert!((w.norm_sqr() - 1.0).abs() < 1e-14);
        let hand = by_hand(&[&[D, A, A], &[A, D, A], &[A, A, D]]);
        assert!((w.overlap(&hand).unwrap() - 1.0).abs() < 1e-14);
        // pinned phase: first nonzero amplitude is real positive
        let first = w.amplitudes().iter().find(|z| z.norm() > 1e-12).unwrap();
        assert!(first.re > 0.0 && first.im.abs() < 1e-15);

        let w2 = make_w_prime::<f64>(2).unwrap();
        let hand2 = by_hand(&[&[D, A], &[A, D]]);
        assert!((w2.overlap(&hand2).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ghz_overlap_with_w_prime_is_three_quarters() {
        let g = make_ghz::<f64>(3, Sign::Plus).unwrap();
        let w = make_w_prime::<f64>(3).unwrap();
        assert!((g.overlap(&w).unwrap() - 0.75).abs() < 1e-14);
    }

    #[test]
    fn w_hv_indices() {
        let w = make_w_hv::<f64>(3).unwrap();
        let s = 1.0 / 3f64.sqrt();
        for i in 0..8 {
            let want = if [3, 5, 6].contains(&i) { s } else { 0.0 };
            assert!((w.amplitude(i).re - want).abs() < 1e-15, "index {i}");
        }
        let w2 = make_w_hv::<f64>(2).unwrap();
        assert!((w2.amplitude(1).re - S2).abs() < 1e-15);
        assert!((w2.amplitude(2).re - S2).abs() < 1e-15);
    }

    #[test]
    fn w_hv_and_w_prime_related_by_hadamards() {
        let h = LocalUnitary::<f64>::hadamard();
        for n in 2..=6 {
            let rotated = make_w_hv::<f64>(n).unwrap().apply_all(h.matrix());
            let wp = make_w_prime::<f64>(n).unwrap();
            assert!((rotated.amplitudes() - wp.amplitudes()).norm() < 1e-13);
        }
    }

    #[test]
    fn da_swap_maps_single_d_terms_to_single_a_terms() {
        let z = LocalUnitary::<f64>::da_swap();
        let swapped = make_w_prime::<f64>(3).unwrap().apply_all(z.matrix());
        let hand = by_hand(&[&[A, D, D], &[D, A, D], &[D, D, A]]);
        assert!((swapped.overlap(&hand).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ghz3_da_expansion() {
        let terms = expand_in_da_basis(&make_ghz::<f64>(3, Sign::Plus).unwrap());
        for t in &terms {
            let want = if ["DDD", "DAA", "ADA", "AAD"].contains(&t.label.as_str()) { 0.5 } else { 0.0 };
            assert!((t.amplitude.re - want).abs() < 1e-15, "{}", t.label);
            assert!(t.amplitude.im.abs() < 1e-15);
        }
    }

    #[test]
    fn single_d_expansion() {
        let d = PureState::<f64>::product(&[D]).unwrap();
        let terms = expand_in_da_basis(&d);
        assert_eq!(terms[0].label, "D");
        assert!((terms[0].amplitude.re - 1.0).abs() < 1e-15);
        assert!(terms[1].amplitude.norm() < 1e-15);
    }

    #[test]
    fn w_state_density_is_physical() {
        DensityMatrix::from_pure(&make_w_hv::<f64>(4).unwrap()).validate().unwrap();
    }
}
