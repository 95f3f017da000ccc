use num_complex::Complex;
use serde::Serialize;

use super::filter::{apply_filter_all, FilterBasis, FilterOutcome, FilterStrength, KrausFilter, PovmOutcome};
use crate::error::Result;
use crate::qstate::{expand_in_da_basis, make_ghz, LocalUnitary, PureState, Sign};
use crate::scalar::Real;

/// `|N+⟩` prepared for filtering: for even `n`, qubit 0 has `|D⟩ ↔ |A⟩` exchanged so
/// the single-`D` strings appear in the D/A expansion.
pub fn relabelled_ghz<T: Real>(n: usize) -> Result<PureState<T>> {
    let ghz = make_ghz::<T>(n, Sign::Plus)?;
    if n.is_multiple_of(2) {
        ghz.apply_local(LocalUnitary::<T>::da_swap().matrix(), 0)
    } else {
        Ok(ghz)
    }
}

/// Full GHZ → approximate-W′ conversion: relabel (even `n`), filter every qubit
/// in the D/A basis, post-select on all `ε₁`.
pub fn convert_ghz_to_w<T: Real>(n: usize, strength: FilterStrength<T>) -> Result<FilterOutcome<T, PureState<T>>> {
    apply_filter_all(&relabelled_ghz::<T>(n)?, strength, FilterBasis::Da)
}

/// Amplitudes of the terms with a given number of `D` factors, before and after filtering.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct SuppressionRow<T: Real> {
    pub d_count: usize,
    /// Number of D/A strings with this `D` count and nonzero amplitude.
    pub n_terms: usize,
    /// Amplitude magnitude of those terms in the input (they are all equal).
    pub pre_amplitude: T,
    /// Magnitude after the unnormalized `M₁^⊗n`.
    pub post_amplitude: T,
    /// `post / pre`; equals `a^d_count`.
    pub scale: T,
    pub expected_scale: T,
    /// Every term in the group was scaled by exactly `a^d_count`.
    pub consistent: bool,
}

/// Groups the relabelled GHZ state's D/A amplitudes by `D` count and reports how
/// the unnormalized filter scales each group.
pub fn amplitude_suppression_report<T: Real>(n: usize, strength: FilterStrength<T>) -> Result<Vec<SuppressionRow<T>>> {
    let input = relabelled_ghz::<T>(n)?;
    let m1 = KrausFilter::new(strength, FilterBasis::Da).kraus(PovmOutcome::Pass);
    let filtered = input.apply_all(&m1);
    let pre = expand_in_da_basis(&input);
    let post = expand_in_da_basis(&filtered);
    let a = strength.a();
    let tol = T::tolerance();
    let support = T::lit(1e-12).max(tol);

    let mut rows = Vec::new();
    for d_count in (0..=n).rev() {
        let terms: Vec<(Complex<T>, Complex<T>)> = pre
            .iter()
            .zip(&post)
            .filter(|(p, _)| p.d_count() == d_count && p.amplitude.norm_sqr().sqrt() > support)
            .map(|(p, q)| (p.amplitude, q.amplitude))
            .collect();
        if terms.is_empty() {
            continue;
        }
        let expected_scale = a.powi(d_count as i32);
        let consistent =
            terms.iter().all(|(p, q)| (*q - *p * Complex::new(expected_scale, T::zero())).norm_sqr().sqrt() <= tol);
        let pre_amplitude = terms[0].0.norm_sqr().sqrt();
        let post_amplitude = terms[0].1.norm_sqr().sqrt();
        rows.push(SuppressionRow {
            d_count,
            n_terms: terms.len(),
            pre_amplitude,
            post_amplitude,
            scale: post_amplitude / pre_amplitude,
            expected_scale,
            consistent,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::povm::analytic::{fidelity_ghz3_analytic, fidelity_w3_analytic, fidelity_wn_analytic};
    use crate::qstate::{make_w_prime, Polarization};

    fn s(a2: f64) -> FilterStrength<f64> {
        FilterStrength::from_a_squared(a2).unwrap()
    }

    /// Independent oracle: apply the 2×2 pass matrix qubit by qubit to the raw
    /// amplitude vector with explicit index arithmetic.
    fn brute_force_filter(n: usize, a2: f64) -> (Vec<Complex<f64>>, f64) {
        let a = a2.sqrt();
        let dim = 1 << n;
        let mut v = vec![Complex::new(0.0, 0.0); dim];
        let r = std::f64::consts::FRAC_1_SQRT_2;
        v[0] = Complex::new(r, 0.0);
        v[dim - 1] = Complex::new(r, 0.0);
        if n.is_multiple_of(2) {
            v[dim - 1] = -v[dim - 1]; // Z on qubit 0 flips the sign of |V…V⟩
        }
        // M₁ = |A⟩⟨A| + a|D⟩⟨D| = ½[[1+a, a−1], [a−1, 1+a]]
        let (p, q) = ((1.0 + a) / 2.0, (a - 1.0) / 2.0);
        for bit in 0..n {
            let mask = 1 << bit;
            let mut next = v.clone();
            for i in 0..dim {
                let j = i ^ mask;
                next[i] = if i & mask == 0 { v[i] * p + v[j] * q } else { v[j] * q + v[i] * p };
            }
            v = next;
        }
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        (v, norm)
    }

    #[test]
    fn ghz3_success_probability_matches_brute_force() {
        let out = convert_ghz_to_w(3, s(0.38)).unwrap();
        let (_, norm) = brute_force_filter(3, 0.38);
        assert!((out.success_probability - norm).abs() < 1e-14);
        assert!((out.success_probability - 0.298718).abs() < 1e-12);
    }

    #[test]
    fn ghz3_output_fidelities() {
        let out = convert_ghz_to_w(3, s(0.38)).unwrap();
        let w = make_w_prime::<f64>(3).unwrap();
        let g = make_ghz::<f64>(3, Sign::Plus).unwrap();
        assert!((out.output_state.overlap(&w).unwrap() - fidelity_w3_analytic(s(0.38))).abs() < 1e-13);
        assert!((out.output_state.overlap(&g).unwrap() - fidelity_ghz3_analytic(s(0.38))).abs() < 1e-13);
        assert!((out.output_state.overlap(&g).unwrap() - 0.908313).abs() < 1e-6);
    }

    #[test]
    fn ghz3_output_state_has_stated_form() {
        // 𝒩 [a³/2 |DDD⟩ + a√3/2 |W′⟩]
        let a2: f64 = 0.38;
        let a = a2.sqrt();
        let norm = 2.0 / (a2.powi(3) + 3.0 * a2).sqrt();
        let ddd = PureState::<f64>::product(&[Polarization::D; 3]).unwrap();
        let w = make_w_prime::<f64>(3).unwrap();
        let expected: Vec<_> = ddd
            .amplitudes()
            .iter()
            .zip(w.amplitudes().iter())
            .map(|(d, wv)| (*d * (a.powi(3) / 2.0) + *wv * (a * 3f64.sqrt() / 2.0)) * norm)
            .collect();
        let out = convert_ghz_to_w(3, s(a2)).unwrap().output_state;
        for (x, y) in out.amplitudes().iter().zip(&expected) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn brute_force_agrees_with_library_state() {
        for n in 2..=6 {
            let (v, norm) = brute_force_filter(n, 0.27);
            let out = convert_ghz_to_w(n, s(0.27)).unwrap();
            assert!((out.success_probability - norm).abs() < 1e-13);
            let scale = 1.0 / norm.sqrt();
            for (x, y) in out.output_state.amplitudes().iter().zip(&v) {
                assert!((x - y * scale).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn two_qubit_conversion_is_exact() {
        for a2 in [0.05, 0.5, 0.99] {
            let out = convert_ghz_to_w(2, s(a2)).unwrap();
            let w = make_w_prime::<f64>(2).unwrap();
            assert!((out.output_state.overlap(&w).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn four_and_five_qubits_match_formula() {
        let w4 = make_w_prime::<f64>(4).unwrap();
        let f4 = convert_ghz_to_w(4, s(0.38)).unwrap().output_state.overlap(&w4).unwrap();
        assert!((f4 - fidelity_wn_analytic(4, s(0.38)).unwrap()).abs() < 1e-10);
        assert!((f4 - 0.8738203).abs() < 1e-6);
        let w5 = make_w_prime::<f64>(5).unwrap();
        let f5 = convert_ghz_to_w(5, s(0.2)).unwrap().output_state.overlap(&w5).unwrap();
        assert!((f5 - fidelity_wn_analytic(5, s(0.2)).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn suppression_three_qubits() {
        let rows = amplitude_suppression_report(3, s(0.38)).unwrap();
        let a = 0.38f64.sqrt();
        assert_eq!(rows.len(), 2);
        assert_eq!((rows[0].d_count, rows[0].n_terms), (3, 1));
        assert_eq!((rows[1].d_count, rows[1].n_terms), (1, 3));
        assert!((rows[0].scale - a.powi(3)).abs() < 1e-13);
        assert!((rows[1].scale - a).abs() < 1e-13);
        assert!(rows.iter().all(|r| r.consistent));
    }

    #[test]
    fn suppression_five_qubits() {
        let a2 = 0.3f64;
        let rows = amplitude_suppression_report(5, s(a2)).unwrap();
        let counts: Vec<_> = rows.iter().map(|r| (r.d_count, r.n_terms)).collect();
        assert_eq!(counts, vec![(5, 1), (3, 10), (1, 5)]);
        for r in &rows {
            assert!(r.consistent);
            assert!((r.scale - a2.sqrt().powi(r.d_count as i32)).abs() < 1e-13);
        }
        // unwanted terms have ≥ 3 D factors
        assert!(rows.iter().filter(|r| r.d_count != 1).all(|r| r.d_count >= 3));
    }

    #[test]
    fn suppression_even_and_unfiltered() {
        for r in amplitude_suppression_report(4, s(1.0)).unwrap() {
            assert!((r.scale - 1.0).abs() < 1e-13);
        }
        let rows = amplitude_suppression_report(4, s(0.5)).unwrap();
        assert!(rows.iter().all(|r| r.d_count % 2 == 1 && r.consistent));
    }
}
