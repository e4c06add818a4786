//! Finite representations of states and Hermitian operators.
//!
//! Two kinds of bases appear: truncated spectral bases (energy eigenstates,
//! Fock states) and uniform spatial grids. Grid amplitudes carry the
//! `sqrt(dx)` quadrature weight, so `sum |psi_i|^2` is the norm everywhere
//! with no explicit measure factor.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

/// Basis of a finite state representation.
///
/// Spectral labels are unique and strictly increasing. Grid points are the
/// interior nodes of a Dirichlet box: `x_i = x_min + (i+1) dx` with
/// `dx = (x_max - x_min) / (n + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub enum BasisDescriptor {
    Spectral {
        labels: Vec<u64>,
    },
    Grid1d {
        x_min: f64,
        x_max: f64,
        num_points: usize,
    },
    Grid2d {
        x: (f64, f64, usize),
        y: (f64, f64, usize),
    },
}

impl BasisDescriptor {
    /// Spectral basis with explicit labels (must be strictly increasing).
    pub fn spectral(labels: Vec<u64>) -> Result<Self> {
        if labels.len() < 2 {
            return Err(Error::InvalidBasis(format!(
                "spectral dimension {} < 2",
                labels.len()
            )));
        }
        if !labels.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidBasis(
                "spectral labels must be unique and increasing".into(),
            ));
        }
        Ok(BasisDescriptor::Spectral { labels })
    }

    /// Spectral basis labeled `0..dim`.
    pub fn spectral_range(dim: usize) -> Result<Self> {
        Self::spectral((0..dim as u64).collect())
    }

    pub fn grid1d(x_min: f64, x_max: f64, num_points: usize) -> Result<Self> {
        if num_points < 8 {
            return Err(Error::InvalidBasis(format!(
                "grid point count {num_points} < 8"
            )));
        }
        if !(x_max > x_min) || !(x_max - x_min).is_finite() {
            return Err(Error::InvalidBasis(format!(
                "grid range [{x_min}, {x_max}] has non-positive spacing"
            )));
        }
        Ok(BasisDescriptor::Grid1d {
            x_min,
            x_max,
            num_points,
        })
    }

    pub fn grid2d(x: (f64, f64, usize), y: (f64, f64, usize)) -> Result<Self> {
        for (lo, hi, n) in [x, y] {
            if n < 8 {
                return Err(Error::InvalidBasis(format!("grid point count {n} < 8")));
            }
            if !(hi > lo) {
                return Err(Error::InvalidBasis(format!(
                    "grid range [{lo}, {hi}] has non-positive spacing"
                )));
            }
        }
        Ok(BasisDescriptor::Grid2d { x, y })
    }

    pub fn dim(&self) -> usize {
        match self {
            BasisDescriptor::Spectral { labels } => labels.len(),
            BasisDescriptor::Grid1d { num_points, .. } => *num_points,
            BasisDescriptor::Grid2d { x, y } => x.2 * y.2,
        }
    }

    /// Spacing of a 1D grid.
    pub fn grid_spacing(&self) -> Option<f64> {
        match self {
            BasisDescriptor::Grid1d {
                x_min,
                x_max,
                num_points,
            } => Some((x_max - x_min) / (*num_points as f64 + 1.0)),
            _ => None,
        }
    }

    /// Interior node positions of a 1D grid.
    pub fn grid_points(&self) -> Option<Vec<f64>> {
        match self {
            BasisDescriptor::Grid1d {
                x_min, num_points, ..
            } => {
                let dx = self.grid_spacing()?;
                Some(
                    (0..*num_points)
                        .map(|i| x_min + (i as f64 + 1.0) * dx)
                        .collect(),
                )
            }
            _ => None,
        }
    }

    fn require_same(&self, other: &Self) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::BasisMismatch(format!("{self:?} vs {other:?}")))
        }
    }
}

/// Pure state: complex amplitudes over a basis.
#[derive(Debug, Clone)]
pub struct StateVector {
    basis: BasisDescriptor,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(basis: BasisDescriptor, amplitudes: Vec<Complex64>) -> Result<Self> {
        if basis.dim() != amplitudes.len() {
            return Err(Error::BasisMismatch(format!(
                "basis dim {} != amplitude count {}",
                basis.dim(),
                amplitudes.len()
            )));
        }
        Ok(StateVector { basis, amplitudes })
    }

    /// Unit vector on the given basis index.
    pub fn basis_state(basis: BasisDescriptor, index: usize) -> Result<Self> {
        let dim = basis.dim();
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, dim });
        }
        let mut amplitudes = vec![Complex64::ZERO; dim];
        amplitudes[index] = Complex64::ONE;
        Ok(StateVector { basis, amplitudes })
    }

    /// Sample a wavefunction on a 1D grid, attaching the sqrt(dx) weight.
    /// The result is *not* normalized.
    pub fn from_grid_fn(basis: BasisDescriptor, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let points = basis
            .grid_points()
            .ok_or_else(|| Error::InvalidBasis("from_grid_fn needs a 1D grid".into()))?;
        let w = basis.grid_spacing().unwrap().sqrt();
        let amplitudes = points.iter().map(|&x| f(x) * w).collect();
        Ok(StateVector { basis, amplitudes })
    }

    pub fn basis(&self) -> &BasisDescriptor {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Rescale to unit norm. Errors on the zero vector.
    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm();
        if n <= 0.0 || !n.is_finite() {
            return Err(Error::DegenerateSuperposition);
        }
        for a in &mut self.amplitudes {
            *a /= n;
        }
        Ok(self)
    }

    /// Multiply every amplitude by a scalar.
    pub fn scaled(mut self, c: Complex64) -> Self {
        for a in &mut self.amplitudes {
            *a *= c;
        }
        self
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sq() - 1.0).abs() <= tol::NORM
    }
}

/// `<a|b>`.
pub fn inner(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    a.basis.require_same(&b.basis)?;
    Ok(a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// Normalized linear combination of states sharing one basis.
pub fn superpose(terms: &[(Complex64, &StateVector)]) -> Result<StateVector> {
    let (_, first) = terms.first().ok_or(Error::DegenerateSuperposition)?;
    let basis = first.basis.clone();
    let mut amplitudes = vec![Complex64::ZERO; basis.dim()];
    for (coeff, state) in terms {
        basis.require_same(&state.basis)?;
        for (acc, a) in amplitudes.iter_mut().zip(&state.amplitudes) {
            *acc += coeff * a;
        }
    }
    StateVector { basis, amplitudes }.normalized()
}

/// Evolve a spectral-basis state under a diagonal Hamiltonian:
/// amplitude `n` picks up `exp(-i E_n t / hbar)`.
pub fn evolve_diagonal(
    state: &StateVector,
    energies: &[f64],
    t: f64,
    hbar: f64,
) -> Result<StateVector> {
    if !matches!(state.basis, BasisDescriptor::Spectral { .. }) {
        return Err(Error::BasisMismatch(
            "evolve_diagonal needs a spectral basis".into(),
        ));
    }
    if energies.len() != state.dim() {
        return Err(Error::BasisMismatch(format!(
            "{} energies for dimension {}",
            energies.len(),
            state.dim()
        )));
    }
    let amplitudes = state
        .amplitudes
        .iter()
        .zip(energies)
        .map(|(a, &e)| a * Complex64::from_polar(1.0, -e * t / hbar))
        .collect();
    Ok(StateVector {
        basis: state.basis.clone(),
        amplitudes,
    })
}

/// Hermitian operator as a dense matrix over a basis.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    basis: BasisDescriptor,
    elements: DMatrix<Complex64>,
}

impl HermitianOperator {
    /// Validates hermiticity relative to the largest element magnitude.
    pub fn from_matrix(basis: BasisDescriptor, elements: DMatrix<Complex64>) -> Result<Self> {
        let dim = basis.dim();
        if elements.nrows() != dim || elements.ncols() != dim {
            return Err(Error::BasisMismatch(format!(
                "matrix {}x{} on basis of dim {}",
                elements.nrows(),
                elements.ncols(),
                dim
            )));
        }
        let scale = elements
            .iter()
            .map(|z| z.norm())
            .fold(0.0f64, f64::max)
            .max(1.0);
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in i..dim {
                let d = (elements[(i, j)] - elements[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        if worst > tol::HERMITICITY * scale {
            return Err(Error::NotHermitian(worst));
        }
        Ok(HermitianOperator { basis, elements })
    }

    /// Build from `(A + A^†)/2`; for constructors whose entries carry
    /// quadrature noise.
    pub fn symmetrized(basis: BasisDescriptor, elements: DMatrix<Complex64>) -> Result<Self> {
        let h = (&elements + elements.adjoint()) * Complex64::new(0.5, 0.0);
        Self::from_matrix(basis, h)
    }

    /// Real diagonal operator.
    pub fn diagonal(basis: BasisDescriptor, diag: &[f64]) -> Result<Self> {
        let dim = basis.dim();
        if diag.len() != dim {
            return Err(Error::BasisMismatch(format!(
                "{} diagonal entries for dimension {}",
                diag.len(),
                dim
            )));
        }
        let mut m = DMatrix::zeros(dim, dim);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        Ok(HermitianOperator { basis, elements: m })
    }

    pub fn identity(basis: BasisDescriptor) -> Self {
        let dim = basis.dim();
        HermitianOperator {
            basis,
            elements: DMatrix::identity(dim, dim),
        }
    }

    pub fn zero(basis: BasisDescriptor) -> Self {
        let dim = basis.dim();
        HermitianOperator {
            basis,
            elements: DMatrix::zeros(dim, dim),
        }
    }

    pub fn basis(&self) -> &BasisDescriptor {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.elements.nrows()
    }

    pub fn element(&self, i: usize, j: usize) -> Complex64 {
        self.elements[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.elements
    }

    /// `self + c * other` on the same basis.
    pub fn add_scaled(&self, c: f64, other: &HermitianOperator) -> Result<HermitianOperator> {
        self.basis.require_same(&other.basis)?;
        Ok(HermitianOperator {
            basis: self.basis.clone(),
            elements: &self.elements + &other.elements * Complex64::new(c, 0.0),
        })
    }

    /// Largest element magnitude.
    pub fn max_abs(&self) -> f64 {
        self.elements.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Matrix-vector product `op |state>`; the result is unnormalized.
pub fn apply(op: &HermitianOperator, state: &StateVector) -> Result<StateVector> {
    op.basis.require_same(&state.basis)?;
    let v = nalgebra::DVector::from_column_slice(&state.amplitudes);
    let out = &op.elements * v;
    Ok(StateVector {
        basis: state.basis.clone(),
        amplitudes: out.iter().copied().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn basis4() -> BasisDescriptor {
        BasisDescriptor::spectral_range(4).unwrap()
    }

    #[test]
    fn inner_of_normalized_state_is_one() {
        let psi = StateVector::new(
            basis4(),
            vec![c(0.5, 0.0), c(0.0, 0.5), c(0.5, 0.0), c(0.0, -0.5)],
        )
        .unwrap();
        assert!(psi.is_normalized());
        let ip = inner(&psi, &psi).unwrap();
        assert!((ip - Complex64::ONE).norm() < 1e-14);
    }

    #[test]
    fn inner_orthogonal_unit_vectors() {
        let e0 = StateVector::basis_state(basis4(), 0).unwrap();
        let e1 = StateVector::basis_state(basis4(), 1).unwrap();
        assert_eq!(inner(&e0, &e1).unwrap(), Complex64::ZERO);
    }

    #[test]
    fn inner_projection_of_equal_superposition() {
        let e0 = StateVector::basis_state(basis4(), 0).unwrap();
        let e1 = StateVector::basis_state(basis4(), 1).unwrap();
        let plus = superpose(&[(Complex64::ONE, &e0), (Complex64::ONE, &e1)]).unwrap();
        let ip = inner(&plus, &e0).unwrap();
        assert!((ip.re - 1.0 / 2f64.sqrt()).abs() < 1e-14);
        assert!(ip.im.abs() < 1e-15);
    }

    #[test]
    fn inner_is_conjugate_symmetric() {
        let a = StateVector::new(
            basis4(),
            vec![c(0.3, 0.1), c(0.2, -0.4), c(0.0, 0.5), c(0.1, 0.0)],
        )
        .unwrap();
        let b = StateVector::new(
            basis4(),
            vec![c(0.1, 0.9), c(0.3, 0.2), c(0.4, 0.0), c(0.0, 0.2)],
        )
        .unwrap();
        let ab = inner(&a, &b).unwrap();
        let ba = inner(&b, &a).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-15);
    }

    #[test]
    fn inner_rejects_basis_mismatch() {
        let a = StateVector::basis_state(basis4(), 0).unwrap();
        let b = StateVector::basis_state(BasisDescriptor::spectral_range(5).unwrap(), 0).unwrap();
        assert!(matches!(inner(&a, &b), Err(Error::BasisMismatch(_))));
    }

    #[test]
    fn superpose_equal_pair() {
        let e0 = StateVector::basis_state(basis4(), 0).unwrap();
        let e1 = StateVector::basis_state(basis4(), 1).unwrap();
        let s = superpose(&[(Complex64::ONE, &e0), (Complex64::ONE, &e1)]).unwrap();
        let r = 1.0 / 2f64.sqrt();
        assert!((s.amplitudes()[0].re - r).abs() < 1e-15);
        assert!((s.amplitudes()[1].re - r).abs() < 1e-15);
        assert_eq!(s.amplitudes()[2], Complex64::ZERO);
    }

    #[test]
    fn superpose_renormalizes_single_term() {
        let e0 = StateVector::basis_state(basis4(), 0).unwrap();
        let s = superpose(&[(c(2.0, 0.0), &e0)]).unwrap();
        assert!((s.amplitudes()[0] - Complex64::ONE).norm() < 1e-15);
    }

    #[test]
    fn superpose_all_zero_is_degenerate() {
        let e0 = StateVector::basis_state(basis4(), 0).unwrap();
        let r = superpose(&[(Complex64::ZERO, &e0)]);
        assert!(matches!(r, Err(Error::DegenerateSuperposition)));
    }

    #[test]
    fn evolve_identity_at_t_zero() {
        let e = [1.0, 2.0, 3.0, 4.0];
        let psi = StateVector::new(basis4(), vec![c(0.5, 0.0); 4]).unwrap();
        let out = evolve_diagonal(&psi, &e, 0.0, 1.0).unwrap();
        for (a, b) in out.amplitudes().iter().zip(psi.amplitudes()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn evolve_single_eigenstate_is_global_phase() {
        let e = [1.0, 2.0, 3.0, 4.0];
        let psi = StateVector::basis_state(basis4(), 2).unwrap();
        let out = evolve_diagonal(&psi, &e, 0.7, 1.0).unwrap();
        let expected = Complex64::from_polar(1.0, -3.0 * 0.7);
        assert!((out.amplitudes()[2] - expected).norm() < 1e-15);
        assert!((out.norm() - 1.0).abs() < tol::NORM);
    }

    #[test]
    fn evolve_two_level_relative_phase() {
        // Equal superposition of two levels with gap dE picks up the
        // relative phase exp(-i dE t / hbar); direct complex arithmetic.
        let e = [0.0, 1.5, 0.0, 0.0];
        let e0 = StateVector::basis_state(basis4(), 0).unwrap();
        let e1 = StateVector::basis_state(basis4(), 1).unwrap();
        let s = superpose(&[(Complex64::ONE, &e0), (Complex64::ONE, &e1)]).unwrap();
        let t = 0.42;
        let out = evolve_diagonal(&s, &e, t, 1.0).unwrap();
        let rel = out.amplitudes()[1] / out.amplitudes()[0];
        let expected = Complex64::from_polar(1.0, -1.5 * t);
        assert!((rel - expected).norm() < 1e-14);
        // moduli are time-invariant under diagonal evolution
        for (a, b) in out.amplitudes().iter().zip(s.amplitudes()) {
            assert!((a.norm() - b.norm()).abs() < 1e-15);
        }
    }

    #[test]
    fn apply_identity_and_diagonal() {
        let id = HermitianOperator::identity(basis4());
        let psi = StateVector::new(
            basis4(),
            vec![c(0.1, 0.2), c(0.3, 0.0), c(0.0, 0.4), c(0.5, 0.0)],
        )
        .unwrap();
        let out = apply(&id, &psi).unwrap();
        for (a, b) in out.amplitudes().iter().zip(psi.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
        let d = HermitianOperator::diagonal(basis4(), &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let e2 = StateVector::basis_state(basis4(), 2).unwrap();
        let out = apply(&d, &e2).unwrap();
        assert!((out.amplitudes()[2] - c(3.0, 0.0)).norm() < 1e-15);
        assert_eq!(out.amplitudes()[0], Complex64::ZERO);
    }

    #[test]
    fn from_matrix_rejects_non_hermitian() {
        let mut m = DMatrix::<Complex64>::zeros(4, 4);
        m[(0, 1)] = c(1.0, 0.0);
        m[(1, 0)] = c(0.5, 0.0);
        assert!(matches!(
            HermitianOperator::from_matrix(basis4(), m),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn grid_points_and_weights() {
        let g = BasisDescriptor::grid1d(0.0, 1.0, 9).unwrap();
        let pts = g.grid_points().unwrap();
        assert_eq!(pts.len(), 9);
        assert!((pts[0] - 0.1).abs() < 1e-15);
        assert!((pts[8] - 0.9).abs() < 1e-15);
        // gaussian-ish profile normalizes through the sqrt(dx) convention
        let psi = StateVector::from_grid_fn(g, |x| c((-(x - 0.5_f64).powi(2) * 40.0).exp(), 0.0))
            .unwrap()
            .normalized()
            .unwrap();
        assert!(psi.is_normalized());
    }

    #[test]
    fn basis_invariants_rejected() {
        assert!(BasisDescriptor::spectral(vec![0]).is_err());
        assert!(BasisDescriptor::spectral(vec![0, 0]).is_err());
        assert!(BasisDescriptor::grid1d(0.0, 1.0, 4).is_err());
        assert!(BasisDescriptor::grid1d(1.0, 1.0, 16).is_err());
    }
}
