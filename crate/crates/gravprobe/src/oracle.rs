//! Brute-force validators.
//!
//! Everything here cross-checks the closed forms and the perturbative
//! pipeline by independent numerics: dense exact diagonalization of
//! `H0 + gamma H1` on truncated spectral bases and Dirichlet-box sine
//! bases, exact unitary evolution through the spectral decomposition, and
//! quadrature references. All comparisons against closed forms route
//! through the fidelity (global-phase invariant); eigenvector columns are
//! still gauge-fixed so superpositions of separately diagonalized states
//! are well defined.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{BasisDescriptor, HermitianOperator, StateVector};
use crate::metrology::StateFamily;
use crate::models::free::FreeGaussianProbe;
use crate::models::fsw::{fsw_bound_states, FiniteWellProbe};
use crate::models::ho::HarmonicProbe;
use crate::models::isw::InfiniteWellProbe;
use crate::tol;

/// Any probe the oracle can discretize.
#[derive(Debug, Clone)]
pub enum ProbeModel {
    Free(FreeGaussianProbe),
    InfiniteWell(InfiniteWellProbe),
    FiniteWell(FiniteWellProbe),
    Harmonic(HarmonicProbe),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    HardWall,
    Periodic,
}

/// `H0` and `H1` on a common basis, in the model's dimensionless units.
#[derive(Debug, Clone)]
pub struct DiscretizedHamiltonian {
    pub basis: BasisDescriptor,
    pub h0: HermitianOperator,
    pub h1: HermitianOperator,
    pub boundary: Boundary,
}

impl DiscretizedHamiltonian {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Dense matrix of `H0 + gamma H1`.
    pub fn assemble(&self, gamma: f64) -> DMatrix<Complex64> {
        self.h0.matrix() + self.h1.matrix() * Complex64::new(gamma, 0.0)
    }
}

/// Lowest eigenpairs of a discretized Hamiltonian.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<StateVector>,
    /// Per-level relative drift under grid doubling, when computed.
    pub convergence: Option<Vec<f64>>,
}

/// Hermitian eigendecomposition, eigenvalues ascending, each column
/// gauge-fixed so its largest-magnitude entry is real positive. Real
/// matrices take the ~4x faster real-symmetric path.
pub fn eigh(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let n = m.nrows();
    let scale = m.iter().map(|z| z.norm()).fold(0.0f64, f64::max).max(1.0);
    let is_real = m.iter().all(|z| z.im.abs() <= 1e-14 * scale);
    let (vals, vecs): (Vec<f64>, DMatrix<Complex64>) = if is_real {
        let re = m.map(|z| z.re);
        let eig = re.symmetric_eigen();
        (
            eig.eigenvalues.iter().copied().collect(),
            eig.eigenvectors.map(|v| Complex64::new(v, 0.0)),
        )
    } else {
        let eig = m.clone().symmetric_eigen();
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
    };
    // sort ascending and gauge-fix each column
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap());
    let sorted_vals: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
    let mut sorted_vecs = DMatrix::<Complex64>::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        let mut pivot = Complex64::ZERO;
        let mut best = -1.0;
        for r in 0..n {
            let mag = vecs[(r, old)].norm();
            if mag > best {
                best = mag;
                pivot = vecs[(r, old)];
            }
        }
        let phase = if best > 0.0 {
            pivot.conj() / best
        } else {
            Complex64::ONE
        };
        for r in 0..n {
            sorted_vecs[(r, new)] = vecs[(r, old)] * phase;
        }
    }
    (sorted_vals, sorted_vecs)
}

/// Evolve `psi` by `exp(-i H tau)` given the spectral decomposition of H.
pub fn evolve_spectral(
    eigenvalues: &[f64],
    eigenvectors: &DMatrix<Complex64>,
    psi: &StateVector,
    tau: f64,
    basis: BasisDescriptor,
) -> StateVector {
    let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
    let coeffs = eigenvectors.adjoint() * v;
    let mut evolved = nalgebra::DVector::<Complex64>::zeros(coeffs.len());
    for (k, &e) in eigenvalues.iter().enumerate() {
        evolved[k] = coeffs[k] * Complex64::from_polar(1.0, -e * tau);
    }
    let out = eigenvectors * evolved;
    StateVector::new(basis, out.iter().copied().collect()).expect("dimension preserved")
}

/// Build the dimensionless grid/spectral Hamiltonians for a probe.
///
/// Hard-wall models use the sine (Dirichlet) eigenbasis of an enclosing
/// box: the kinetic term and `p^4 = (p^2)^2` are diagonal there and the
/// potential rotates in from its position-diagonal form. The free packet
/// works directly in momentum space. Resolution must be a power of two
/// between 2^7 and 2^12 for grid models.
pub fn discretize(model: &ProbeModel, resolution: usize) -> Result<DiscretizedHamiltonian> {
    match model {
        ProbeModel::Free(p) => discretize_free(p, resolution),
        ProbeModel::InfiniteWell(p) => discretize_isw(p, resolution),
        ProbeModel::FiniteWell(p) => discretize_fsw(p, resolution),
        ProbeModel::Harmonic(p) => match p.dims {
            1 => fock_hamiltonian_1d(p),
            _ => fock_hamiltonian_2d(p),
        },
    }
}

fn check_resolution(resolution: usize) -> Result<()> {
    if !resolution.is_power_of_two() || !(128..=4096).contains(&resolution) {
        return Err(Error::InvalidParameter(format!(
            "resolution {resolution} must be a power of two in [2^7, 2^12]"
        )));
    }
    Ok(())
}

/// Infinite well, 1D: the box sine basis is the eigenbasis; both terms are
/// diagonal. Units: energies n^2 in `pi^2 hbar^2 / (2 m a^2)`, H1 diagonal
/// `kappa n^4`.
pub fn discretize_isw(
    probe: &InfiniteWellProbe,
    resolution: usize,
) -> Result<DiscretizedHamiltonian> {
    check_resolution(resolution)?;
    if probe.dims() != 1 {
        return Err(Error::UnsupportedDiscretization(
            "grid oracle covers the 1D well; 2D/3D wells are separable closed forms".into(),
        ));
    }
    let basis = BasisDescriptor::spectral((1..=resolution as u64).collect())?;
    let kappa = probe.correction_scale();
    let e0: Vec<f64> = (1..=resolution).map(|n| (n as f64).powi(2)).collect();
    let e1: Vec<f64> = (1..=resolution)
        .map(|n| kappa * (n as f64).powi(4))
        .collect();
    Ok(DiscretizedHamiltonian {
        h0: HermitianOperator::diagonal(basis.clone(), &e0)?,
        h1: HermitianOperator::diagonal(basis.clone(), &e1)?,
        basis,
        boundary: Boundary::HardWall,
    })
}

/// DST-I matrix: S[j-1][i] = sqrt(2/(N+1)) sin(j pi (i+1) / (N+1)),
/// orthogonal, maps position samples to sine coefficients.
fn dst_matrix(n: usize) -> DMatrix<f64> {
    let norm = (2.0 / (n as f64 + 1.0)).sqrt();
    DMatrix::from_fn(n, n, |j, i| {
        norm * ((j as f64 + 1.0) * PI * (i as f64 + 1.0) / (n as f64 + 1.0)).sin()
    })
}

/// Hard-wall sine-basis Hamiltonians for a position-diagonal potential on
/// the dimensionless box `[x_min, x_max]`.
fn sine_box_hamiltonians(
    x_min: f64,
    x_max: f64,
    n: usize,
    kinetic_factor: f64,
    potential: impl Fn(f64) -> f64,
    h1_scale: f64,
) -> Result<DiscretizedHamiltonian> {
    let basis = BasisDescriptor::spectral((1..=n as u64).collect())?;
    let span = x_max - x_min;
    let ks: Vec<f64> = (1..=n).map(|j| j as f64 * PI / span).collect();

    let s = dst_matrix(n);
    let dx = span / (n as f64 + 1.0);
    let mut v_pos = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        v_pos[(i, i)] = potential(x_min + (i as f64 + 1.0) * dx);
    }
    let v_sine = &s * v_pos * s.transpose();

    let mut h0 = v_sine.map(|v| Complex64::new(v, 0.0));
    for j in 0..n {
        h0[(j, j)] += Complex64::new(kinetic_factor * ks[j] * ks[j], 0.0);
    }
    let h1_diag: Vec<f64> = ks.iter().map(|&k| h1_scale * k.powi(4)).collect();
    Ok(DiscretizedHamiltonian {
        h0: HermitianOperator::symmetrized(basis.clone(), h0)?,
        h1: HermitianOperator::diagonal(basis.clone(), &h1_diag)?,
        basis,
        boundary: Boundary::HardWall,
    })
}

/// Finite well on an enclosing box, in units hbar^2/(2 m a^2) with
/// xi = x/a: `H0 = p^2 + z0^2 theta(|xi|-1)`, `H1 = scale p^4`.
/// The box half-length adapts to the weakest bound state's decay length.
/// The step potential's sine-basis elements are analytic (pointwise
/// sampling of the discontinuity would cap the eigenvalue accuracy).
pub fn discretize_fsw(
    probe: &FiniteWellProbe,
    resolution: usize,
) -> Result<DiscretizedHamiltonian> {
    check_resolution(resolution)?;
    let spectrum = fsw_bound_states(probe);
    let kappa_min = spectrum
        .levels
        .iter()
        .map(|l| l.kappa)
        .fold(f64::INFINITY, f64::min)
        .max(0.3);
    let half_box = (1.0 + 21.0 / kappa_min).clamp(6.0, 60.0);
    let z0sq = probe.z0() * probe.z0();

    let n = resolution;
    let basis = BasisDescriptor::spectral((1..=n as u64).collect())?;
    let span = 2.0 * half_box;
    let c = PI / span;
    let ks: Vec<f64> = (1..=n).map(|j| j as f64 * c).collect();

    // V = z0^2 (1 - indicator(|xi| < 1)):
    // <j|V|k> = z0^2 (delta_jk - I_jk), with
    // I_jk = (1/2L) int_{-1}^{1} [cos((j-k)c(xi+L)) - cos((j+k)c(xi+L))] dxi
    let well_integral = |m: i64| -> f64 {
        if m == 0 {
            2.0
        } else {
            let mc = m as f64 * c;
            ((mc * (half_box + 1.0)).sin() - (mc * (half_box - 1.0)).sin()) / mc
        }
    };
    let mut h0 = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..n {
        for k in j..n {
            let (jj, kk) = (j as i64 + 1, k as i64 + 1);
            let overlap = (well_integral(jj - kk) - well_integral(jj + kk)) / span;
            let mut v = -z0sq * overlap;
            if j == k {
                v += z0sq + ks[j] * ks[j];
            }
            h0[(j, k)] = Complex64::new(v, 0.0);
            h0[(k, j)] = h0[(j, k)];
        }
    }
    let scale = probe.correction_scale();
    let h1_diag: Vec<f64> = ks.iter().map(|&k| scale * k.powi(4)).collect();
    Ok(DiscretizedHamiltonian {
        h0: HermitianOperator::from_matrix(basis.clone(), h0)?,
        h1: HermitianOperator::diagonal(basis.clone(), &h1_diag)?,
        basis,
        boundary: Boundary::HardWall,
    })
}

/// 1D oscillator on a grid, in hbar-omega units with
/// xi = x sqrt(m omega / hbar): `H0 = (p^2 + xi^2)/2`, `H1 = lambda p^4`.
pub fn discretize_ho1(probe: &HarmonicProbe, resolution: usize) -> Result<DiscretizedHamiltonian> {
    check_resolution(resolution)?;
    if probe.dims != 1 {
        return Err(Error::UnsupportedDiscretization(
            "grid oracle covers the 1D oscillator; use the Fock oracle in 2D".into(),
        ));
    }
    let half_box = 12.0;
    sine_box_hamiltonians(
        -half_box,
        half_box,
        resolution,
        0.5,
        |xi| 0.5 * xi * xi,
        probe.lambda(),
    )
}

/// 1D oscillator in the truncated Fock basis (same dimensionless form as
/// `models::ho::ho_problem`).
pub fn fock_hamiltonian_1d(probe: &HarmonicProbe) -> Result<DiscretizedHamiltonian> {
    let problem = crate::models::ho::ho_problem(probe)?;
    let basis = problem.basis().clone();
    Ok(DiscretizedHamiltonian {
        h0: HermitianOperator::diagonal(basis.clone(), problem.energies())?,
        h1: problem.h1().clone(),
        basis,
        boundary: Boundary::HardWall,
    })
}

/// 2D oscillator in the energy-sorted product Fock basis.
pub fn fock_hamiltonian_2d(probe: &HarmonicProbe) -> Result<DiscretizedHamiltonian> {
    let (problem, _) = crate::models::ho::ho2_problem(probe)?;
    let basis = problem.basis().clone();
    Ok(DiscretizedHamiltonian {
        h0: HermitianOperator::diagonal(basis.clone(), problem.energies())?,
        h1: problem.h1().clone(),
        basis,
        boundary: Boundary::HardWall,
    })
}

/// Finite well restricted to its bound-state basis: exact diagonalization
/// of `H0 + gamma H1` on the same truncated spectral basis the
/// perturbative problem uses. This isolates the bound-state model (the
/// scattering continuum is outside its scope by construction); the grid
/// oracle, in contrast, includes the box continuum, which responds to p^4
/// at first order and is *not* a small correction.
pub fn bound_basis_fsw(probe: &FiniteWellProbe) -> Result<DiscretizedHamiltonian> {
    let problem = crate::models::fsw::fsw_problem(probe)?;
    let basis = problem.basis().clone();
    Ok(DiscretizedHamiltonian {
        h0: HermitianOperator::diagonal(basis.clone(), problem.energies())?,
        h1: problem.h1().clone(),
        basis,
        boundary: Boundary::HardWall,
    })
}

/// Free packet in momentum space: both terms diagonal. Natural units; the
/// grid spans p0 +/- 12 sigma.
pub fn discretize_free(
    probe: &FreeGaussianProbe,
    resolution: usize,
) -> Result<DiscretizedHamiltonian> {
    check_resolution(resolution)?;
    if !probe.units.is_natural() {
        return Err(Error::UnsupportedDiscretization(
            "momentum-space oracle runs in natural units".into(),
        ));
    }
    let p_lo = probe.p0 - 12.0 * probe.sigma;
    let p_hi = probe.p0 + 12.0 * probe.sigma;
    let basis = BasisDescriptor::grid1d(p_lo, p_hi, resolution)?;
    let points = basis.grid_points().unwrap();
    let e0: Vec<f64> = points.iter().map(|&p| p * p / 2.0).collect();
    let e1: Vec<f64> = points.iter().map(|&p| p.powi(4)).collect();
    Ok(DiscretizedHamiltonian {
        h0: HermitianOperator::diagonal(basis.clone(), &e0)?,
        h1: HermitianOperator::diagonal(basis.clone(), &e1)?,
        basis,
        boundary: Boundary::Periodic,
    })
}

/// Lowest `levels` eigenpairs of `H0 + gamma H1`.
pub fn diagonalize(
    h: &DiscretizedHamiltonian,
    gamma: f64,
    levels: usize,
) -> Result<SpectrumResult> {
    let dim = h.dim();
    if levels > dim / 4 {
        return Err(Error::InvalidParameter(format!(
            "{levels} levels requested from dimension {dim}; keep levels <= dim/4 \
             for spectral accuracy"
        )));
    }
    let (vals, vecs) = eigh(&h.assemble(gamma));
    let eigenvectors = (0..levels)
        .map(|k| {
            StateVector::new(h.basis.clone(), vecs.column(k).iter().copied().collect())
                .expect("dimension preserved")
        })
        .collect();
    Ok(SpectrumResult {
        eigenvalues: vals[..levels].to_vec(),
        eigenvectors,
        convergence: None,
    })
}

/// Diagonalize at `resolution` and `2 * resolution` and record per-level
/// drifts; drift above 1e-6 relative is a resolution error.
pub fn diagonalize_converged(
    model: &ProbeModel,
    resolution: usize,
    gamma: f64,
    levels: usize,
) -> Result<SpectrumResult> {
    let coarse = diagonalize(&discretize(model, resolution)?, gamma, levels)?;
    let fine_h = discretize(model, (2 * resolution).min(4096))?;
    let mut fine = diagonalize(&fine_h, gamma, levels)?;
    let deltas: Vec<f64> = coarse
        .eigenvalues
        .iter()
        .zip(&fine.eigenvalues)
        .map(|(&a, &b)| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE))
        .collect();
    if let Some(&worst) = deltas.iter().max_by(|a, b| a.partial_cmp(b).unwrap()) {
        if worst > tol::ORACLE_DOUBLING {
            return Err(Error::GridResolution(format!(
                "eigenvalue drift {worst:.2e} under grid doubling"
            )));
        }
    }
    fine.convergence = Some(deltas);
    Ok(fine)
}

/// Exact evolution `exp(-i (H0 + gamma H1) tau) |psi0>` with tau in the
/// model's dimensionless time unit.
pub fn evolve_exact(
    h: &DiscretizedHamiltonian,
    gamma: f64,
    psi0: &StateVector,
    tau: f64,
) -> Result<StateVector> {
    if psi0.basis() != &h.basis {
        return Err(Error::BasisMismatch("evolve_exact".into()));
    }
    let (vals, vecs) = eigh(&h.assemble(gamma));
    Ok(evolve_spectral(&vals, &vecs, psi0, tau, h.basis.clone()))
}

/// Preparation recipes for oracle state families.
#[derive(Debug, Clone)]
pub enum PrepRecipe {
    /// The n-th exact eigenstate of H(gamma).
    Eigenstate(usize),
    /// Equal superposition of two H(0) eigenstates evolved under H(gamma)
    /// for dimensionless time tau.
    EvolvedSuperposition { pair: (usize, usize), tau: f64 },
}

/// Exact prepared-and-evolved family `gamma -> state`, suitable for
/// `qfi_from_fidelity`. Each evaluation diagonalizes H(gamma).
pub fn oracle_state_family(h: DiscretizedHamiltonian, recipe: PrepRecipe) -> StateFamily {
    StateFamily::new(move |gamma: f64| match recipe {
        PrepRecipe::Eigenstate(n) => {
            let (_, vecs) = eigh(&h.assemble(gamma));
            StateVector::new(h.basis.clone(), vecs.column(n).iter().copied().collect())
                .expect("dimension preserved")
        }
        PrepRecipe::EvolvedSuperposition { pair, tau } => {
            let (_, vecs0) = eigh(&h.assemble(0.0));
            let a = vecs0.column(pair.0);
            let b = vecs0.column(pair.1);
            let inv = Complex64::new(1.0 / 2f64.sqrt(), 0.0);
            let amps: Vec<Complex64> = a
                .iter()
                .zip(b.iter())
                .map(|(&x, &y)| inv * (x + y))
                .collect();
            let prep = StateVector::new(h.basis.clone(), amps).expect("dimension preserved");
            let (vals, vecs) = eigh(&h.assemble(gamma));
            evolve_spectral(&vals, &vecs, &prep, tau, h.basis.clone())
        }
    })
}

/// Gaussian-moment quadrature reference for the free-packet QFI:
/// `F_q = 4 t^2 (<p^8> - <p^4>^2)` with moments integrated by Simpson.
/// Natural units.
pub fn free_moment_qfi(probe: &FreeGaussianProbe, points: usize) -> f64 {
    let n = points.max(1001) | 1;
    let lo = probe.p0 - 15.0 * probe.sigma;
    let hi = probe.p0 + 15.0 * probe.sigma;
    let h = (hi - lo) / (n - 1) as f64;
    let norm = 1.0 / (2.0 * PI * probe.sigma * probe.sigma).sqrt();
    let mut m4 = 0.0;
    let mut m8 = 0.0;
    for k in 0..n {
        let p = lo + k as f64 * h;
        let w = if k == 0 || k == n - 1 {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let rho = norm * (-(p - probe.p0).powi(2) / (2.0 * probe.sigma * probe.sigma)).exp();
        m4 += w * rho * p.powi(4);
        m8 += w * rho * p.powi(8);
    }
    m4 *= h / 3.0;
    m8 *= h / 3.0;
    4.0 * probe.t * probe.t * (m8 - m4 * m4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrology::{fidelity, qfi_from_fidelity};
    use crate::units::UnitSystem;

    #[test]
    fn isw_oracle_matches_spectrum() {
        let probe = InfiniteWellProbe::new(1.0, vec![1], UnitSystem::natural()).unwrap();
        let h = discretize_isw(&probe, 256).unwrap();
        let s = diagonalize(&h, 0.0, 10).unwrap();
        for (i, &e) in s.eigenvalues.iter().enumerate() {
            let expected = ((i + 1) as f64).powi(2);
            assert!((e - expected).abs() / expected < 1e-12);
        }
    }

    #[test]
    fn ho_grid_oracle_reproduces_ladder_spectrum() {
        let probe = HarmonicProbe::new(1.0, 1, 32, UnitSystem::natural()).unwrap();
        let h = discretize_ho1(&probe, 512).unwrap();
        let s = diagonalize(&h, 0.0, 11).unwrap();
        for (n, &e) in s.eigenvalues.iter().enumerate() {
            let expected = n as f64 + 0.5;
            assert!(
                (e - expected).abs() / expected < 1e-8,
                "n = {n}: {e} vs {expected}"
            );
        }
    }

    #[test]
    fn ho_grid_first_order_slope_matches_correction() {
        // (E_n(gamma) - E_n(0))/gamma ~ E1_n with the true p^4 operator
        let probe = HarmonicProbe::new(1.0, 1, 32, UnitSystem::natural()).unwrap();
        let h = discretize_ho1(&probe, 512).unwrap();
        let gamma = 1e-6;
        let s0 = diagonalize(&h, 0.0, 6).unwrap();
        let s1 = diagonalize(&h, gamma, 6).unwrap();
        for n in 0..6 {
            let slope = (s1.eigenvalues[n] - s0.eigenvalues[n]) / gamma;
            let expected = probe.first_order_energy_hw(n);
            assert!(
                (slope - expected).abs() / expected < 1e-4,
                "n = {n}: {slope} vs {expected}"
            );
        }
    }

    #[test]
    fn fsw_oracle_matches_transcendental_roots() {
        // two independent methods: sine-basis diagonalization vs bisection
        // roots; the psi'' wall kink limits the box basis to O(N^-3), so
        // 1024 modes are needed for 1e-6 agreement
        let probe = FiniteWellProbe::new(1.0, 10.0, UnitSystem::natural()).unwrap();
        let spectrum = fsw_bound_states(&probe);
        let h = discretize_fsw(&probe, 1024).unwrap();
        let s = diagonalize(&h, 0.0, spectrum.count()).unwrap();
        for (l, &e) in spectrum.levels.iter().zip(&s.eigenvalues) {
            let expected = l.u * l.u;
            assert!(
                (e - expected).abs() / expected < 1e-6,
                "u^2 = {expected}, grid {e}"
            );
        }
    }

    #[test]
    fn eigenvectors_orthonormal_and_values_ascending() {
        let probe = FiniteWellProbe::new(1.0, 10.0, UnitSystem::natural()).unwrap();
        let h = discretize_fsw(&probe, 256).unwrap();
        let s = diagonalize(&h, 1e-6, 5).unwrap();
        assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        for i in 0..s.eigenvectors.len() {
            for j in 0..s.eigenvectors.len() {
                let ip = crate::hilbert::inner(&s.eigenvectors[i], &s.eigenvectors[j]).unwrap();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((ip.norm() - expected).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn evolve_preserves_norm_energy_and_fixed_points() {
        let probe = FiniteWellProbe::new(1.0, 10.0, UnitSystem::natural()).unwrap();
        let h = discretize_fsw(&probe, 256).unwrap();
        let s = diagonalize(&h, 0.0, 3).unwrap();
        let psi = &s.eigenvectors[1];
        // t = 0 is the identity
        let same = evolve_exact(&h, 0.0, psi, 0.0).unwrap();
        assert!((fidelity(psi, &same).unwrap() - 1.0).abs() < 1e-12);
        // an eigenstate only picks up a phase
        let later = evolve_exact(&h, 0.0, psi, 3.7).unwrap();
        assert!((fidelity(psi, &later).unwrap() - 1.0).abs() < 1e-10);
        // norm and energy expectation conserved for a superposition
        let sup = crate::hilbert::superpose(&[
            (Complex64::ONE, &s.eigenvectors[0]),
            (Complex64::ONE, &s.eigenvectors[2]),
        ])
        .unwrap();
        let evolved = evolve_exact(&h, 0.0, &sup, 2.2).unwrap();
        assert!((evolved.norm() - 1.0).abs() < 1e-10);
        let e_before = crate::hilbert::inner(&sup, &crate::hilbert::apply(&h.h0, &sup).unwrap())
            .unwrap()
            .re;
        let e_after =
            crate::hilbert::inner(&evolved, &crate::hilbert::apply(&h.h0, &evolved).unwrap())
                .unwrap()
                .re;
        assert!((e_before - e_after).abs() < 1e-10 * e_before.abs().max(1.0));
    }

    #[test]
    fn isw_eigenstate_family_carries_no_information() {
        let probe = InfiniteWellProbe::new(1.0, vec![1], UnitSystem::natural()).unwrap();
        let h = discretize_isw(&probe, 256).unwrap();
        let fam = oracle_state_family(h, PrepRecipe::Eigenstate(0));
        let q = qfi_from_fidelity(&fam, 1e-6, 1e-3).unwrap();
        assert!(q.value.abs() < 1e-9);
    }

    #[test]
    fn isw_evolved_superposition_matches_closed_form() {
        // two-level (1, N) superposition at gamma = 1e-6 against
        // t^2 pi^8 (N^4-1)^2 in natural units (a = t = 1)
        let n_big = 4u32;
        let probe = InfiniteWellProbe::new(1.0, vec![1], UnitSystem::natural()).unwrap();
        let h = discretize_isw(&probe, 256).unwrap();
        // dimensionless tau = E_unit t / hbar = pi^2 / 2 for t = 1
        let tau = PI * PI / 2.0;
        let fam = oracle_state_family(
            h,
            PrepRecipe::EvolvedSuperposition {
                pair: (0, (n_big - 1) as usize),
                tau,
            },
        );
        let q = qfi_from_fidelity(&fam, 1e-6, 1e-7).unwrap();
        let closed = crate::models::isw::isw_closed_forms(&probe, 1.0, &[n_big])
            .unwrap()
            .value;
        assert!(
            (q.value - closed).abs() / closed < 1e-4,
            "oracle {} vs closed {closed}",
            q.value
        );
    }

    #[test]
    fn free_moment_quadrature_matches_closed_form() {
        for (p0, sigma) in [(0.0, 1.0), (1.3, 0.8), (0.5, 2.0)] {
            let probe = FreeGaussianProbe::new(p0, sigma, 1.0, UnitSystem::natural()).unwrap();
            let closed = crate::models::free::free_gaussian_qfi(&probe).value;
            let quad = free_moment_qfi(&probe, 4001);
            assert!(
                (closed - quad).abs() / closed.max(1e-300) < 1e-8,
                "p0={p0} sigma={sigma}: {closed} vs {quad}"
            );
        }
    }

    #[test]
    fn free_momentum_oracle_evolution_preserves_density() {
        let probe = FreeGaussianProbe::new(0.7, 1.1, 1.0, UnitSystem::natural()).unwrap();
        let h = discretize_free(&probe, 512).unwrap();
        let psi0 = StateVector::from_grid_fn(h.basis.clone(), |p| {
            Complex64::new(
                (-(p - probe.p0).powi(2) / (4.0 * probe.sigma * probe.sigma)).exp(),
                0.0,
            )
        })
        .unwrap()
        .normalized()
        .unwrap();
        let evolved = evolve_exact(&h, 1e-6, &psi0, 2.0).unwrap();
        for (a, b) in psi0.amplitudes().iter().zip(evolved.amplitudes()) {
            assert!((a.norm_sqr() - b.norm_sqr()).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_resolution_and_levels() {
        let probe = InfiniteWellProbe::new(1.0, vec![1], UnitSystem::natural()).unwrap();
        assert!(discretize_isw(&probe, 100).is_err());
        assert!(discretize_isw(&probe, 8192).is_err());
        let h = discretize_isw(&probe, 256).unwrap();
        assert!(diagonalize(&h, 0.0, 200).is_err());
        let probe2 = InfiniteWellProbe::new(1.0, vec![1, 1], UnitSystem::natural()).unwrap();
        assert!(matches!(
            discretize_isw(&probe2, 256),
            Err(Error::UnsupportedDiscretization(_))
        ));
    }

    #[test]
    fn fsw_grid_family_sees_the_continuum() {
        // the exact grid family responds through the box continuum as well;
        // its QFI sits well above the bound-basis value (measured ~2.15x at
        // this depth), while the bound-basis family reproduces the
        // perturbative ket to O(gamma^2)
        let probe = FiniteWellProbe::new(1.0, 250f64.sqrt(), UnitSystem::natural()).unwrap();
        let pert = crate::models::fsw::fsw_ground_qfi(&probe).unwrap().value;
        let grid = discretize_fsw(&probe, 256).unwrap();
        let grid_q = qfi_from_fidelity(
            &oracle_state_family(grid, PrepRecipe::Eigenstate(0)),
            1e-6,
            1e-2,
        )
        .unwrap()
        .value;
        assert!(grid_q > 1.5 * pert, "grid {grid_q} vs bound {pert}");
        let bound = bound_basis_fsw(&probe).unwrap();
        let bound_q = qfi_from_fidelity(
            &oracle_state_family(bound, PrepRecipe::Eigenstate(0)),
            1e-6,
            1e-4,
        )
        .unwrap()
        .value;
        // the exact family differs from the first-order value by
        // O(gamma * ||H1|| / gap) ~ 1e-4 at this depth
        assert!((bound_q - pert).abs() / pert < 1e-3, "{bound_q} vs {pert}");
    }

    #[test]
    fn small_gamma_eigenvector_overlap_matches_ket_coefficient() {
        // |<psi_2 | psi^gamma_0>| approaches gamma |c_2| as gamma -> 0
        let probe = HarmonicProbe::new(1.0, 1, 32, UnitSystem::natural()).unwrap();
        let level = crate::models::ho::ho_level(&probe, 0).unwrap();
        let c2 = level.ket_coefficients[2].norm();
        let h = fock_hamiltonian_1d(&probe).unwrap();
        let gamma = 1e-6;
        let s = diagonalize(&h, gamma, 1).unwrap();
        let e2 = StateVector::basis_state(h.basis.clone(), 2).unwrap();
        let overlap = crate::hilbert::inner(&e2, &s.eigenvectors[0])
            .unwrap()
            .norm();
        assert!(
            (overlap - gamma * c2).abs() < 1e-8,
            "overlap {overlap} vs gamma*|c2| {}",
            gamma * c2
        );
    }

    #[test]
    fn optimal_probe_for_the_model_spectra() {
        use crate::metrology::optimal_two_level_probe;
        // well levels 1..N: corrections grow as n^4, so the pair is (1, N)
        let probe = InfiniteWellProbe::new(1.0, vec![1], UnitSystem::natural()).unwrap();
        let e1: Vec<f64> = (1..=9u32).map(|n| probe.first_order_energy(n)).collect();
        let best = optimal_two_level_probe(&e1).unwrap();
        assert_eq!((best.low, best.high), (0, 8));
        // oscillator levels 0..n: the pair is (0, n)
        let ho = HarmonicProbe::new(1.0, 1, 16, UnitSystem::natural()).unwrap();
        let e1: Vec<f64> = (0..8).map(|n| ho.first_order_energy_hw(n)).collect();
        let best = optimal_two_level_probe(&e1).unwrap();
        assert_eq!((best.low, best.high), (0, 7));
    }

    #[test]
    fn grid_doubling_convergence() {
        // smooth potentials converge spectrally: doubling moves the low
        // spectrum by far less than 1e-8 relative
        let probe = HarmonicProbe::new(1.0, 1, 32, UnitSystem::natural()).unwrap();
        let s = diagonalize_converged(&ProbeModel::Harmonic(probe), 256, 1e-6, 8).unwrap();
        let deltas = s.convergence.unwrap();
        assert!(deltas.iter().all(|&d| d < 1e-8), "{deltas:?}");
    }
}
