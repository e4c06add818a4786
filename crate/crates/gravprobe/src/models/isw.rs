//! Infinite square well in 1, 2 and 3 dimensions.
//!
//! The eigenstates of the box are eigenstates of p^4 as well, so the full
//! Hamiltonian is diagonal and only evolving superpositions probe the
//! coupling. Internally energies are measured in `pi^2 hbar^2 / (2 m a^2)`
//! (so `E_n = n^2`) and the first-order corrections are
//! `kappa n^4` per axis pair, with the dimensionless
//! `kappa = 2 pi^2 hbar^2 / (a^2 (M_P c)^2)`.

use crate::error::{Error, Result};
use crate::hilbert::{BasisDescriptor, HermitianOperator};
use crate::metrology::{QfiMethod, QfiResult};
use crate::perturb::PerturbationProblem;
use crate::units::UnitSystem;

#[derive(Debug, Clone)]
pub struct InfiniteWellProbe {
    /// Well width (side length in 2D/3D).
    pub width: f64,
    /// Per-axis quantum numbers (length 1, 2 or 3); all >= 1.
    pub quantum_numbers: Vec<u32>,
    pub units: UnitSystem,
}

impl InfiniteWellProbe {
    pub fn new(width: f64, quantum_numbers: Vec<u32>, units: UnitSystem) -> Result<Self> {
        if width <= 0.0 {
            return Err(Error::InvalidParameter(format!("width = {width} <= 0")));
        }
        if quantum_numbers.is_empty() || quantum_numbers.len() > 3 {
            return Err(Error::InvalidParameter(
                "1 to 3 quantum numbers expected".into(),
            ));
        }
        if quantum_numbers.iter().any(|&n| n < 1) {
            return Err(Error::InvalidParameter("quantum numbers start at 1".into()));
        }
        Ok(InfiniteWellProbe {
            width,
            quantum_numbers,
            units,
        })
    }

    pub fn dims(&self) -> usize {
        self.quantum_numbers.len()
    }

    /// Energy unit pi^2 hbar^2 / (2 m a^2).
    pub fn energy_unit(&self) -> f64 {
        let u = &self.units;
        let x = u.hbar / self.width; // momentum scale hbar/a
        std::f64::consts::PI.powi(2) * x * x / (2.0 * u.probe_mass)
    }

    /// Dimensionless correction scale: E1_n = kappa n^4 in energy units.
    pub fn correction_scale(&self) -> f64 {
        let u = &self.units;
        let x = u.hbar / (self.width * u.planck_momentum());
        2.0 * std::f64::consts::PI.powi(2) * x * x
    }

    /// First-order correction of level n (1D), in active units:
    /// `(n pi hbar / a)^4 / (m (M_P c)^2)`.
    pub fn first_order_energy(&self, n: u32) -> f64 {
        self.energy_unit() * self.correction_scale() * (n as f64).powi(4)
    }
}

/// Superposition-probe QFI for (ground, partner) at time t, with the mean
/// energy and (in 1D) the energy-form rewrite recorded in the metadata.
///
/// 1D: `t^2 pi^8 hbar^6 (N^4-1)^2 / (m^2 a^8 (M_P c)^4)`;
/// 2D: the same prefactor with `((nx^2+ny^2)^2 - 4)^2`;
/// 3D: `((nx^2+ny^2+nz^2)^2 - 9)^2`.
pub fn isw_closed_forms(probe: &InfiniteWellProbe, t: f64, partner: &[u32]) -> Result<QfiResult> {
    if partner.len() != probe.dims() {
        return Err(Error::InvalidParameter(format!(
            "partner has {} quantum numbers, probe has {}",
            partner.len(),
            probe.dims()
        )));
    }
    if partner.iter().any(|&n| n < 1) {
        return Err(Error::InvalidParameter("quantum numbers start at 1".into()));
    }
    let u = &probe.units;
    let d = probe.dims() as f64;
    let sum_sq: f64 = partner.iter().map(|&n| (n as f64).powi(2)).sum();
    let gap = sum_sq * sum_sq - d * d; // (sum n_i^2)^2 - d^2, zero for the ground state
                                       // rate = t * dE1 / hbar assembled from grouped small ratios
    let x = u.hbar / (probe.width * u.planck_momentum()); // dimensionless in natural
    let per_energy = u.hbar / (u.probe_mass * probe.width * probe.width); // 1/time scale
    let rate = std::f64::consts::PI.powi(4) * x * x * per_energy * t;
    let value = (rate * gap).powi(2);

    let mean_energy = probe.energy_unit() * (d + sum_sq) / 2.0;
    let mut result =
        QfiResult::new(value, QfiMethod::ClosedForm).with_extra("mean_energy", mean_energy);
    if probe.dims() == 1 {
        let n = partner[0] as f64;
        // 256 t^2 m^2 Ebar^4 / (hbar^2 (M_P c)^4) * (N^4-1)^2/(N^2+1)^4
        let ebar_rate = mean_energy * t / u.hbar; // dimensionless phase
        let mp = mean_energy / (u.planck_momentum_sq() / (2.0 * u.probe_mass)); // E / (p_P^2/2m)
        let energy_form =
            64.0 * (ebar_rate * mp).powi(2) * (n.powi(4) - 1.0).powi(2) / (n * n + 1.0).powi(4);
        result = result.with_extra("energy_form", energy_form);
    }
    Ok(result)
}

fn pow4(n: u32) -> u128 {
    let n = n as u128;
    n * n * n * n
}

/// Weighted ratio R(nx, ny) between the 2D and summed 1D superposition QFIs,
/// in exact integer arithmetic:
/// `((nx^2+ny^2)^2 - 4)^2 / ((nx^4-1)^2 + (ny^4-1)^2)`.
pub fn isw_weighted_ratio(nx: u32, ny: u32) -> Result<f64> {
    if nx < 1 || ny < 1 {
        return Err(Error::InvalidParameter("quantum numbers start at 1".into()));
    }
    if nx == 1 && ny == 1 {
        return Err(Error::NoInformation(
            "(1,1) probe coincides with the ground state; zero over zero".into(),
        ));
    }
    let s = (nx as u128) * (nx as u128) + (ny as u128) * (ny as u128);
    let num = (s * s - 4) * (s * s - 4);
    let den = (pow4(nx) - 1) * (pow4(nx) - 1) + (pow4(ny) - 1) * (pow4(ny) - 1);
    Ok(num as f64 / den as f64)
}

/// 3D analog: `((nx^2+ny^2+nz^2)^2 - 9)^2 / sum_i (n_i^4 - 1)^2`.
pub fn isw_weighted_ratio_3d(nx: u32, ny: u32, nz: u32) -> Result<f64> {
    if nx < 1 || ny < 1 || nz < 1 {
        return Err(Error::InvalidParameter("quantum numbers start at 1".into()));
    }
    if nx == 1 && ny == 1 && nz == 1 {
        return Err(Error::NoInformation(
            "(1,1,1) probe coincides with the ground state; zero over zero".into(),
        ));
    }
    let s: u128 = [nx, ny, nz]
        .iter()
        .map(|&n| (n as u128) * (n as u128))
        .sum();
    let num = (s * s - 9) * (s * s - 9);
    let den: u128 = [nx, ny, nz]
        .iter()
        .map(|&n| (pow4(n) - 1) * (pow4(n) - 1))
        .sum();
    Ok(num as f64 / den as f64)
}

/// Spectral perturbation problem for the 1D well over levels 1..=n_levels:
/// energies n^2, H1 diagonal kappa n^4 (both in the well's energy unit).
pub fn isw_problem(probe: &InfiniteWellProbe, n_levels: usize) -> Result<PerturbationProblem> {
    if probe.dims() != 1 {
        return Err(Error::UnsupportedProbe(
            "spectral problem implemented for the 1D well".into(),
        ));
    }
    let kappa = probe.correction_scale();
    let basis = BasisDescriptor::spectral((1..=n_levels as u64).collect())?;
    let energies: Vec<f64> = (1..=n_levels).map(|n| (n as f64).powi(2)).collect();
    let diag: Vec<f64> = (1..=n_levels).map(|n| kappa * (n as f64).powi(4)).collect();
    let h1 = HermitianOperator::diagonal(basis, &diag)?;
    PerturbationProblem::new(energies, h1, probe.units)
}

/// H1 matrix over the analytic eigenfunctions via quadrature of the
/// symmetric form `int psi_m'' psi_n'' dx` (used to verify diagonality).
pub fn isw_h1_by_quadrature(
    probe: &InfiniteWellProbe,
    n_levels: usize,
    points: usize,
) -> Result<HermitianOperator> {
    use std::f64::consts::PI;
    if probe.dims() != 1 {
        return Err(Error::UnsupportedProbe(
            "quadrature H1 implemented for the 1D well".into(),
        ));
    }
    let kappa = probe.correction_scale();
    let basis = BasisDescriptor::spectral((1..=n_levels as u64).collect())?;
    let dim = n_levels;
    let mut m = nalgebra::DMatrix::<num_complex::Complex64>::zeros(dim, dim);
    // xi = x/a in [0, 1], psi_n = sqrt(2) sin(n pi xi), psi'' = -(n pi)^2 psi
    let n_int = points.max(64) | 1; // odd count for Simpson
    let h = 1.0 / (n_int - 1) as f64;
    for i in 0..dim {
        for j in i..dim {
            let (ni, nj) = ((i + 1) as f64, (j + 1) as f64);
            let mut acc = 0.0;
            for k in 0..n_int {
                let xi = k as f64 * h;
                let f = 2.0 * (ni * PI * xi).sin() * (nj * PI * xi).sin();
                let w = if k == 0 || k == n_int - 1 {
                    1.0
                } else if k % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                acc += w * f;
            }
            let overlap = acc * h / 3.0;
            // int psi_i'' psi_j'' = (ni pi)^2 (nj pi)^2 * overlap; in energy
            // units the diagonal must equal kappa n^4
            let val = kappa * (ni * ni * nj * nj) * overlap;
            m[(i, j)] = num_complex::Complex64::new(val, 0.0);
            m[(j, i)] = m[(i, j)];
        }
    }
    HermitianOperator::from_matrix(basis, m)
}
