//! Property tests for the algebraic invariants.

use gravprobe::hilbert::{self, BasisDescriptor, StateVector};
use gravprobe::metrology::{qfi_commuting_superposition, qfi_pure};
use num_complex::Complex64;
use proptest::prelude::*;

fn amplitudes(dim: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
}

fn state(basis: &BasisDescriptor, raw: &[(f64, f64)]) -> Option<StateVector> {
    let amps: Vec<Complex64> = raw.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
    StateVector::new(basis.clone(), amps)
        .ok()?
        .normalized()
        .ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn inner_is_conjugate_symmetric(a in amplitudes(6), b in amplitudes(6)) {
        let basis = BasisDescriptor::spectral_range(6).unwrap();
        let (Some(sa), Some(sb)) = (state(&basis, &a), state(&basis, &b)) else {
            return Ok(());
        };
        let ab = hilbert::inner(&sa, &sb).unwrap();
        let ba = hilbert::inner(&sb, &sa).unwrap();
        prop_assert!((ab - ba.conj()).norm() < 1e-12);
    }

    #[test]
    fn diagonal_evolution_preserves_moduli(
        a in amplitudes(6),
        energies in prop::collection::vec(-10.0f64..10.0, 6),
        t in -5.0f64..5.0,
    ) {
        let basis = BasisDescriptor::spectral_range(6).unwrap();
        let Some(psi) = state(&basis, &a) else { return Ok(()); };
        let out = hilbert::evolve_diagonal(&psi, &energies, t, 1.0).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
        for (x, y) in out.amplitudes().iter().zip(psi.amplitudes()) {
            prop_assert!((x.norm() - y.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn qfi_pure_is_nonnegative_and_gauge_free(a in amplitudes(6), d in amplitudes(6), phase in 0.0f64..6.28) {
        let basis = BasisDescriptor::spectral_range(6).unwrap();
        let Some(psi) = state(&basis, &a) else { return Ok(()); };
        let damps: Vec<Complex64> = d.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        let dpsi = StateVector::new(basis.clone(), damps).unwrap();
        let q = qfi_pure(&psi, &dpsi).unwrap().value;
        prop_assert!(q >= 0.0);
        // adding i c psi (a global-phase drift) never changes the QFI
        let c = Complex64::new(0.0, phase);
        let shifted: Vec<Complex64> = dpsi
            .amplitudes()
            .iter()
            .zip(psi.amplitudes())
            .map(|(x, y)| x + c * y)
            .collect();
        let dpsi2 = StateVector::new(basis, shifted).unwrap();
        let q2 = qfi_pure(&psi, &dpsi2).unwrap().value;
        prop_assert!((q - q2).abs() <= 1e-9 * q.max(1.0));
    }

    #[test]
    fn commuting_qfi_scales_quadratically_in_time(
        e in prop::collection::vec(-3.0f64..3.0, 4),
        t in 0.01f64..10.0,
    ) {
        let w = [0.25; 4];
        let q1 = qfi_commuting_superposition(&w, &e, t, 1.0).unwrap().value;
        let q2 = qfi_commuting_superposition(&w, &e, 2.0 * t, 1.0).unwrap().value;
        prop_assert!((q2 - 4.0 * q1).abs() <= 1e-9 * q2.max(1e-12));
    }
}
