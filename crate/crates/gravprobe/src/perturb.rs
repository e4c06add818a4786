//! First-order Rayleigh-Schrödinger perturbation theory.
//!
//! Given an unperturbed spectrum `{E0_n}` and the matrix of a perturbation
//! `H1` on the same spectral basis, this module produces the first-order
//! energy corrections `E1_n = <n|H1|n>`, the perturbation kets
//!
//! ```text
//! |psi1_n> = sum_{m != n} <m|H1|n> / (E0_n - E0_m) |m>
//! ```
//!
//! and the normalized first-order states `|n> + gamma |psi1_n>`. Degenerate
//! subspaces must first be rotated to the good basis (the eigenbasis of the
//! restricted `H1` block); `degenerate_good_basis` does that rotation.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{BasisDescriptor, HermitianOperator, StateVector};
use crate::tol;
use crate::units::UnitSystem;

/// Unperturbed spectrum plus perturbation matrix, in one consistent energy
/// unit.
#[derive(Debug, Clone)]
pub struct PerturbationProblem {
    energies: Vec<f64>,
    h1: HermitianOperator,
    units: UnitSystem,
}

impl PerturbationProblem {
    pub fn new(energies: Vec<f64>, h1: HermitianOperator, units: UnitSystem) -> Result<Self> {
        if !matches!(h1.basis(), BasisDescriptor::Spectral { .. }) {
            return Err(Error::InvalidBasis(
                "perturbation problems live on spectral bases".into(),
            ));
        }
        if energies.len() != h1.dim() {
            return Err(Error::BasisMismatch(format!(
                "{} energies for H1 of dimension {}",
                energies.len(),
                h1.dim()
            )));
        }
        if !energies.windows(2).all(|w| w[0] <= w[1]) {
            return Err(Error::InvalidParameter(
                "unperturbed energies must be sorted ascending".into(),
            ));
        }
        Ok(PerturbationProblem {
            energies,
            h1,
            units,
        })
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn h1(&self) -> &HermitianOperator {
        &self.h1
    }

    pub fn units(&self) -> &UnitSystem {
        &self.units
    }

    pub fn basis(&self) -> &BasisDescriptor {
        self.h1.basis()
    }

    /// Machine-precision-scaled default: 1e-9 times the spectral range.
    pub fn default_degeneracy_tol(&self) -> f64 {
        let lo = self.energies.first().copied().unwrap_or(0.0);
        let hi = self.energies.last().copied().unwrap_or(0.0);
        let range = hi - lo;
        if range > 0.0 {
            1e-9 * range
        } else {
            1e-9
        }
    }

    /// Indices m != n with |E0_m - E0_n| below the tolerance.
    pub fn degenerate_partners(&self, n: usize, degeneracy_tol: f64) -> Vec<usize> {
        let en = self.energies[n];
        self.energies
            .iter()
            .enumerate()
            .filter(|&(m, &em)| m != n && (em - en).abs() <= degeneracy_tol)
            .map(|(m, _)| m)
            .collect()
    }
}

/// One perturbed level: its unperturbed energy, first-order correction and
/// perturbation-ket coefficients (zero at the level itself and at any
/// degenerate partner).
#[derive(Debug, Clone)]
pub struct PerturbedLevel {
    pub index: usize,
    pub e0: f64,
    pub e1: f64,
    pub ket_coefficients: Vec<Complex64>,
    pub degenerate_partners: BTreeSet<usize>,
    basis: BasisDescriptor,
}

impl PerturbedLevel {
    pub fn basis(&self) -> &BasisDescriptor {
        &self.basis
    }

    /// ||psi1_n||^2, the quantity 4x of which is the first-order QFI.
    pub fn ket_norm_sq(&self) -> f64 {
        self.ket_coefficients.iter().map(|c| c.norm_sqr()).sum()
    }

    /// The (unnormalized) perturbation ket as a state vector.
    pub fn ket_state(&self) -> StateVector {
        StateVector::new(self.basis.clone(), self.ket_coefficients.clone())
            .expect("coefficients match basis by construction")
    }
}

/// `E1_n = <n|H1|n>`; the diagonal element must be real.
pub fn first_order_energy(problem: &PerturbationProblem, n: usize) -> Result<f64> {
    if n >= problem.dim() {
        return Err(Error::IndexOutOfRange {
            index: n,
            dim: problem.dim(),
        });
    }
    let d = problem.h1.element(n, n);
    debug_assert!(d.im.abs() <= tol::HERMITICITY * problem.h1.max_abs().max(1.0));
    Ok(d.re)
}

/// First-order perturbation ket of level `n`.
///
/// Degenerate partners (within `degeneracy_tol`) are excluded from the sum;
/// if the perturbation still couples `n` to a partner the problem has not
/// been rotated to the good basis, which is an error.
pub fn perturbation_ket(
    problem: &PerturbationProblem,
    n: usize,
    degeneracy_tol: f64,
) -> Result<PerturbedLevel> {
    let dim = problem.dim();
    if n >= dim {
        return Err(Error::IndexOutOfRange { index: n, dim });
    }
    let partners: BTreeSet<usize> = problem
        .degenerate_partners(n, degeneracy_tol)
        .into_iter()
        .collect();
    let coupling_scale = problem.h1.max_abs().max(1.0);
    for &m in &partners {
        let coupling = problem.h1.element(m, n).norm();
        if coupling > tol::DEGENERATE_COUPLING * coupling_scale {
            return Err(Error::DegenerateCoupling {
                n,
                partner: m,
                coupling,
            });
        }
    }
    let en = problem.energies[n];
    let mut coeffs = vec![Complex64::ZERO; dim];
    for m in 0..dim {
        if m == n || partners.contains(&m) {
            continue;
        }
        coeffs[m] = problem.h1.element(m, n) / (en - problem.energies[m]);
    }
    Ok(PerturbedLevel {
        index: n,
        e0: en,
        e1: first_order_energy(problem, n)?,
        ket_coefficients: coeffs,
        degenerate_partners: partners,
        basis: problem.basis().clone(),
    })
}

/// Normalized first-order perturbed state, with a non-fatal flag when the
/// perturbative-regime guard |gamma| ||psi1|| >= 0.1 is violated.
#[derive(Debug, Clone)]
pub struct PerturbedState {
    pub state: StateVector,
    pub non_perturbative: bool,
}

pub fn perturbed_state(level: &PerturbedLevel, gamma: f64) -> PerturbedState {
    let ket_norm = level.ket_norm_sq().sqrt();
    let non_perturbative = gamma.abs() * ket_norm >= tol::PERTURBATIVE_GUARD;
    let mut amplitudes = level.ket_coefficients.clone();
    for a in &mut amplitudes {
        *a *= Complex64::new(gamma, 0.0);
    }
    amplitudes[level.index] += Complex64::ONE;
    let state = StateVector::new(level.basis().clone(), amplitudes)
        .expect("dimension preserved")
        .normalized()
        .expect("norm >= 1");
    PerturbedState {
        state,
        non_perturbative,
    }
}

/// Rotate a degenerate subspace to the eigenbasis of the restricted `H1`
/// block. Unperturbed energies are unchanged; the returned problem has a
/// diagonal block on the listed indices.
pub fn degenerate_good_basis(
    problem: &PerturbationProblem,
    level_indices: &[usize],
    degeneracy_tol: f64,
) -> Result<PerturbationProblem> {
    let dim = problem.dim();
    let k = level_indices.len();
    if k < 2 {
        return Ok(problem.clone());
    }
    for &i in level_indices {
        if i >= dim {
            return Err(Error::IndexOutOfRange { index: i, dim });
        }
    }
    let e0 = problem.energies[level_indices[0]];
    if level_indices
        .iter()
        .any(|&i| (problem.energies[i] - e0).abs() > degeneracy_tol)
    {
        return Err(Error::NotDegenerate(level_indices.to_vec()));
    }

    // Diagonalize the restricted block.
    let mut block = DMatrix::<Complex64>::zeros(k, k);
    for (bi, &i) in level_indices.iter().enumerate() {
        for (bj, &j) in level_indices.iter().enumerate() {
            block[(bi, bj)] = problem.h1.element(i, j);
        }
    }
    let eig = block.symmetric_eigen();
    // Reorder eigenvectors so the rotation is as close to the identity as
    // possible (keeps level labels stable when the block is already
    // diagonal), then fix phases so diagonal entries are real positive.
    let mut v = eig.eigenvectors.clone();
    let mut order: Vec<usize> = Vec::with_capacity(k);
    let mut used = vec![false; k];
    for row in 0..k {
        let mut best = None;
        let mut best_mag = -1.0;
        for col in 0..k {
            if used[col] {
                continue;
            }
            let mag = v[(row, col)].norm();
            if mag > best_mag {
                best_mag = mag;
                best = Some(col);
            }
        }
        let col = best.expect("one unused column per row");
        used[col] = true;
        order.push(col);
    }
    let mut rot = DMatrix::<Complex64>::zeros(k, k);
    for (new_col, &old_col) in order.iter().enumerate() {
        let pivot = v[(new_col, old_col)];
        let phase = if pivot.norm() > 0.0 {
            pivot.conj() / pivot.norm()
        } else {
            Complex64::ONE
        };
        for row in 0..k {
            rot[(row, new_col)] = v[(row, old_col)] * phase;
        }
    }
    v = rot;

    // Embed into the full space and rotate H1.
    let mut q = DMatrix::<Complex64>::identity(dim, dim);
    for (bi, &i) in level_indices.iter().enumerate() {
        for (bj, &j) in level_indices.iter().enumerate() {
            q[(i, j)] = v[(bi, bj)];
        }
    }
    let rotated = q.adjoint() * problem.h1.matrix() * &q;
    let h1 = HermitianOperator::symmetrized(problem.basis().clone(), rotated)?;
    PerturbationProblem::new(problem.energies.clone(), h1, problem.units)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::UnitSystem;

    fn problem(energies: Vec<f64>, h1: Vec<Vec<f64>>) -> PerturbationProblem {
        let dim = energies.len();
        let basis = BasisDescriptor::spectral_range(dim).unwrap();
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = Complex64::new(h1[i][j], 0.0);
            }
        }
        PerturbationProblem::new(
            energies,
            HermitianOperator::from_matrix(basis, m).unwrap(),
            UnitSystem::natural(),
        )
        .unwrap()
    }

    #[test]
    fn zero_operator_gives_zero_correction() {
        let p = problem(vec![0.0, 1.0], vec![vec![0.0, 0.0], vec![0.0, 0.0]]);
        assert_eq!(first_order_energy(&p, 0).unwrap(), 0.0);
        assert_eq!(first_order_energy(&p, 1).unwrap(), 0.0);
    }

    #[test]
    fn index_out_of_range() {
        let p = problem(vec![0.0, 1.0], vec![vec![0.0, 0.0], vec![0.0, 0.0]]);
        assert!(matches!(
            first_order_energy(&p, 2),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn two_level_ket_by_direct_substitution() {
        // E0 = (0, 1), H1 = [[0, v], [v, 0]]  =>  c_1 = v / (0 - 1) = -v.
        let v = 0.37;
        let p = problem(vec![0.0, 1.0], vec![vec![0.0, v], vec![v, 0.0]]);
        let level = perturbation_ket(&p, 0, p.default_degeneracy_tol()).unwrap();
        assert_eq!(level.ket_coefficients[0], Complex64::ZERO);
        assert!((level.ket_coefficients[1].re + v).abs() < 1e-15);
    }

    #[test]
    fn diagonal_perturbation_gives_zero_ket() {
        let p = problem(
            vec![0.0, 1.0, 2.0],
            vec![
                vec![0.3, 0.0, 0.0],
                vec![0.0, 0.7, 0.0],
                vec![0.0, 0.0, 1.1],
            ],
        );
        let level = perturbation_ket(&p, 1, p.default_degeneracy_tol()).unwrap();
        assert_eq!(level.ket_norm_sq(), 0.0);
        assert!((level.e1 - 0.7).abs() < 1e-15);
    }

    #[test]
    fn eq12_consistency_for_random_problem() {
        // c_m (E0_n - E0_m) == h1[m][n] for every m != n.
        let p = problem(
            vec![0.0, 1.0, 2.5, 4.0],
            vec![
                vec![0.2, 0.1, -0.3, 0.05],
                vec![0.1, -0.4, 0.2, 0.6],
                vec![-0.3, 0.2, 0.0, -0.1],
                vec![0.05, 0.6, -0.1, 0.9],
            ],
        );
        for n in 0..4 {
            let level = perturbation_ket(&p, n, p.default_degeneracy_tol()).unwrap();
            for m in 0..4 {
                if m == n {
                    continue;
                }
                let lhs =
                    level.ket_coefficients[m] * Complex64::new(level.e0 - p.energies()[m], 0.0);
                let rhs = p.h1().element(m, n);
                assert!((lhs - rhs).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn degenerate_coupling_is_detected() {
        let p = problem(
            vec![0.0, 0.0, 1.0],
            vec![
                vec![0.0, 0.5, 0.0],
                vec![0.5, 0.0, 0.0],
                vec![0.0, 0.0, 0.0],
            ],
        );
        assert!(matches!(
            perturbation_ket(&p, 0, p.default_degeneracy_tol()),
            Err(Error::DegenerateCoupling { .. })
        ));
    }

    #[test]
    fn good_basis_for_symmetric_2x2_block() {
        // Degenerate block with h1 = [[0, 1], [1, 0]] rotates to diag(1, -1)
        // on (e0 ± e1)/sqrt(2).
        let p = problem(
            vec![1.0, 1.0, 3.0],
            vec![
                vec![0.0, 1.0, 0.0],
                vec![1.0, 0.0, 0.0],
                vec![0.0, 0.0, 0.2],
            ],
        );
        let tol = 1e-9;
        let rotated = degenerate_good_basis(&p, &[0, 1], tol).unwrap();
        assert!(rotated.h1().element(0, 1).norm() < 1e-12);
        let d0 = rotated.h1().element(0, 0).re;
        let d1 = rotated.h1().element(1, 1).re;
        let mut diag = [d0, d1];
        diag.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((diag[0] + 1.0).abs() < 1e-12);
        assert!((diag[1] - 1.0).abs() < 1e-12);
        // energies untouched
        assert_eq!(rotated.energies(), p.energies());
        // kets are now well defined
        assert!(perturbation_ket(&rotated, 0, tol).is_ok());
    }

    #[test]
    fn good_basis_rejects_non_degenerate_indices() {
        let p = problem(vec![0.0, 1.0], vec![vec![0.0, 0.0], vec![0.0, 0.0]]);
        assert!(matches!(
            degenerate_good_basis(&p, &[0, 1], 1e-9),
            Err(Error::NotDegenerate(_))
        ));
    }

    #[test]
    fn nondegenerate_problem_passes_through() {
        let p = problem(
            vec![0.0, 1.0, 2.0],
            vec![
                vec![0.0, 0.3, 0.0],
                vec![0.3, 0.0, 0.3],
                vec![0.0, 0.3, 0.0],
            ],
        );
        // single index: nothing to rotate
        let same = degenerate_good_basis(&p, &[1], 1e-9).unwrap();
        assert_eq!(same.h1().element(0, 1), p.h1().element(0, 1));
    }

    #[test]
    fn perturbed_state_limits() {
        let p = problem(
            vec![0.0, 1.0, 2.0],
            vec![
                vec![0.0, 0.3, 0.0],
                vec![0.3, 0.0, 0.3],
                vec![0.0, 0.3, 0.0],
            ],
        );
        let level = perturbation_ket(&p, 0, p.default_degeneracy_tol()).unwrap();
        // gamma = 0 reproduces the basis state
        let s = perturbed_state(&level, 0.0);
        assert!(!s.non_perturbative);
        assert!((s.state.amplitudes()[0] - Complex64::ONE).norm() < 1e-15);
        // overlap with the unperturbed state is real and -> 1 as gamma -> 0
        let e0 = StateVector::basis_state(level.basis().clone(), 0).unwrap();
        for gamma in [1e-3, 1e-5] {
            let s = perturbed_state(&level, gamma);
            let ov = crate::hilbert::inner(&e0, &s.state).unwrap();
            assert!(ov.im.abs() < 1e-14);
            assert!((ov.re - 1.0).abs() < 1e-5);
        }
        // the regime guard trips for huge gamma but is not fatal
        let s = perturbed_state(&level, 1e3);
        assert!(s.non_perturbative);
    }
}
