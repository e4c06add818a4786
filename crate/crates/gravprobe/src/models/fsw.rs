//! Finite square well: V = 0 for |x| < a, V0 outside.
//!
//! Bound states solve the transcendental quantization conditions
//! `u tan u = sqrt(z0^2 - u^2)` (even) and `-u cot u = sqrt(z0^2 - u^2)`
//! (odd) with `u = k a` and `z0^2 = 2 m V0 a^2 / hbar^2`. The j-th root
//! lies in `((j-1) pi/2, j pi/2)` and is found by bisection; energies are
//! `E = (hbar^2 / 2 m a^2) u^2` measured from the well bottom.
//!
//! p^4 matrix elements use the symmetric form
//! `<m|p^4|n> ∝ int psi_m'' psi_n'' dx` with the second derivatives taken
//! analytically on the piecewise eigenfunctions (trig inside, exponential
//! outside); the wall kink of psi'' makes a literal fourth derivative
//! distributional, while the symmetric form stays quadrature-friendly.
//! The continuum contribution to the perturbation ket is dropped; the
//! result metadata records the omission.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{BasisDescriptor, HermitianOperator};
use crate::metrology::{qfi_perturbative, QfiResult};
use crate::perturb::{perturbation_ket, PerturbationProblem};
use crate::units::UnitSystem;

/// Default quadrature points per region for H1 matrix elements.
const QUAD_POINTS: usize = 2049;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone)]
pub struct FiniteWellProbe {
    /// Half-width: the potential vanishes for |x| < a.
    pub half_width: f64,
    /// Well depth V0 > 0.
    pub depth: f64,
    pub units: UnitSystem,
    /// Quadrature points per region for matrix elements.
    pub quad_points: usize,
}

impl FiniteWellProbe {
    pub fn new(half_width: f64, depth: f64, units: UnitSystem) -> Result<Self> {
        if half_width <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "half_width = {half_width} <= 0"
            )));
        }
        if depth <= 0.0 {
            return Err(Error::InvalidParameter(format!("depth = {depth} <= 0")));
        }
        Ok(FiniteWellProbe {
            half_width,
            depth,
            units,
            quad_points: QUAD_POINTS,
        })
    }

    /// z0 = a sqrt(2 m V0) / hbar.
    pub fn z0(&self) -> f64 {
        let u = &self.units;
        self.half_width * (2.0 * u.probe_mass * self.depth).sqrt() / u.hbar
    }

    /// Energy unit hbar^2 / (2 m a^2); bound energies are u^2 in this unit.
    pub fn energy_unit(&self) -> f64 {
        let u = &self.units;
        let x = u.hbar / self.half_width;
        x * x / (2.0 * u.probe_mass)
    }

    /// Dimensionless H1 scale: matrix elements are
    /// `2 (hbar / (a M_P c))^2 * int psi_m'' psi_n'' dxi` in energy units.
    pub fn correction_scale(&self) -> f64 {
        let u = &self.units;
        let x = u.hbar / (self.half_width * u.planck_momentum());
        2.0 * x * x
    }
}

/// One bound level in dimensionless variables (xi = x/a).
#[derive(Debug, Clone)]
pub struct FswLevel {
    pub u: f64,
    pub kappa: f64,
    pub parity: Parity,
    /// Interior normalization constant of psi~(xi).
    pub amplitude: f64,
    /// Energy in active units.
    pub energy: f64,
    /// Closed-form approximation of the energy, same units.
    pub approx_energy: f64,
}

impl FswLevel {
    /// Normalized dimensionless wavefunction at xi = x/a.
    pub fn eval(&self, xi: f64) -> f64 {
        let a = self.amplitude;
        let inside = xi.abs() <= 1.0;
        match self.parity {
            Parity::Even => {
                if inside {
                    a * (self.u * xi).cos()
                } else {
                    a * self.u.cos() * (-self.kappa * (xi.abs() - 1.0)).exp()
                }
            }
            Parity::Odd => {
                if inside {
                    a * (self.u * xi).sin()
                } else {
                    xi.signum() * a * self.u.sin() * (-self.kappa * (xi.abs() - 1.0)).exp()
                }
            }
        }
    }

    /// Second derivative in xi: -u^2 psi inside, +kappa^2 psi outside.
    /// psi'' jumps at |xi| = 1; points on the wall count as inside.
    pub fn eval_dd(&self, xi: f64) -> f64 {
        if xi.abs() <= 1.0 {
            self.inside_dd(xi)
        } else {
            self.outside_dd(xi)
        }
    }

    /// Interior branch of psi'' (valid for |xi| <= 1).
    fn inside_dd(&self, xi: f64) -> f64 {
        let a = self.amplitude;
        let v = match self.parity {
            Parity::Even => a * (self.u * xi).cos(),
            Parity::Odd => a * (self.u * xi).sin(),
        };
        -self.u * self.u * v
    }

    /// Exterior branch of psi'' (valid for |xi| >= 1).
    fn outside_dd(&self, xi: f64) -> f64 {
        let a = self.amplitude;
        let tail = (-self.kappa * (xi.abs() - 1.0)).exp();
        let v = match self.parity {
            Parity::Even => a * self.u.cos() * tail,
            Parity::Odd => xi.signum() * a * self.u.sin() * tail,
        };
        self.kappa * self.kappa * v
    }
}

/// The bound-state content of a finite well.
#[derive(Debug, Clone)]
pub struct FswSpectrum {
    pub levels: Vec<FswLevel>,
    pub z0: f64,
    /// Energy unit used for the dimensionless problem.
    pub energy_unit: f64,
}

impl FswSpectrum {
    pub fn count(&self) -> usize {
        self.levels.len()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    /// Sample level `i` on a 1D grid basis (amplitudes carry sqrt(dxi)).
    pub fn wavefunction_on_grid(
        &self,
        i: usize,
        grid: &BasisDescriptor,
    ) -> Result<crate::hilbert::StateVector> {
        let level = self.levels.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            dim: self.levels.len(),
        })?;
        crate::hilbert::StateVector::from_grid_fn(grid.clone(), |xi| {
            Complex64::new(level.eval(xi), 0.0)
        })
    }
}

/// Quantization condition residual for bracket j (1-based): even parity for
/// odd j, odd parity for even j. Negative at the left edge, positive at the
/// right edge of the bracket.
fn condition(j: usize, u: f64, z0: f64) -> f64 {
    let kappa = (z0 * z0 - u * u).max(0.0).sqrt();
    if j % 2 == 1 {
        u * u.tan() - kappa
    } else {
        -u / u.tan() - kappa
    }
}

/// Closed-form approximation of level n (1-based), in units of
/// hbar^2/(2 m a^2). Accurate to O(1/z0) — sub-percent for deep wells.
pub fn approx_level(n: usize, z0: f64) -> f64 {
    let nf = n as f64;
    let disc = (4.0 * z0 + PI).powi(2) - 8.0 * PI * nf * z0;
    let bracket = 4.0 * (nf - 1.0) * z0 - PI + disc.max(0.0).sqrt();
    PI * PI * bracket * bracket / (64.0 * z0 * z0)
}

/// Solve the bound-state spectrum. A 1D well always binds at least one
/// state; the count is ceil(2 z0 / pi).
pub fn fsw_bound_states(probe: &FiniteWellProbe) -> FswSpectrum {
    let z0 = probe.z0();
    let e_unit = probe.energy_unit();
    let mut levels = Vec::new();
    let mut j = 1usize;
    loop {
        let lo = (j as f64 - 1.0) * PI / 2.0;
        if lo >= z0 {
            break;
        }
        let hi = (j as f64 * PI / 2.0).min(z0);
        if hi - lo < 1e-12 {
            break; // marginal threshold state
        }
        // f(lo) < 0 and f(hi) > 0 analytically; bisect on the sign of f
        let mut a = lo;
        let mut b = hi;
        for _ in 0..200 {
            if b - a <= 1e-13 {
                break;
            }
            let mid = 0.5 * (a + b);
            if condition(j, mid, z0) < 0.0 {
                a = mid;
            } else {
                b = mid;
            }
        }
        let u = 0.5 * (a + b);
        let kappa = (z0 * z0 - u * u).max(0.0).sqrt();
        let parity = if j % 2 == 1 {
            Parity::Even
        } else {
            Parity::Odd
        };
        // closed-form normalization over xi
        let norm_sq = match parity {
            Parity::Even => 1.0 + (2.0 * u).sin() / (2.0 * u) + u.cos().powi(2) / kappa,
            Parity::Odd => 1.0 - (2.0 * u).sin() / (2.0 * u) + u.sin().powi(2) / kappa,
        };
        levels.push(FswLevel {
            u,
            kappa,
            parity,
            amplitude: 1.0 / norm_sq.sqrt(),
            energy: e_unit * u * u,
            approx_energy: e_unit * approx_level(j, z0),
        });
        j += 1;
    }
    FswSpectrum {
        levels,
        z0,
        energy_unit: e_unit,
    }
}

/// Simpson integral of f over [a, b] with an odd number of points.
fn simpson(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let n = (n.max(3)) | 1;
    let h = (b - a) / (n - 1) as f64;
    let mut acc = 0.0;
    for k in 0..n {
        let w = if k == 0 || k == n - 1 {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += w * f(a + k as f64 * h);
    }
    acc * h / 3.0
}

/// `int psi_m'' psi_n'' dxi` by quadrature on the analytic derivatives.
/// Opposite parities give exactly zero.
fn h1_integral(m: &FswLevel, n: &FswLevel, points: usize) -> f64 {
    if m.parity != n.parity {
        return 0.0;
    }
    // integrand is even for equal parities: 2 * (inside [0,1] + tail);
    // each region uses its own analytic branch so the wall jump of psi''
    // never lands inside a Simpson panel
    let inside = simpson(0.0, 1.0, points, |xi| m.inside_dd(xi) * n.inside_dd(xi));
    let decay = m.kappa + n.kappa;
    let cutoff = 1.0 + 38.0 / decay;
    let outside = simpson(1.0, cutoff, points, |xi| {
        m.outside_dd(xi) * n.outside_dd(xi)
    });
    2.0 * (inside + outside)
}

/// H1 matrix over the bound states (energy-unit scale), at the given
/// quadrature resolution.
fn h1_matrix(
    probe: &FiniteWellProbe,
    spectrum: &FswSpectrum,
    points: usize,
) -> Result<HermitianOperator> {
    let n = spectrum.count();
    let scale = probe.correction_scale();
    let basis = BasisDescriptor::spectral((0..n as u64).collect())?;
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let integral = h1_integral(&spectrum.levels[i], &spectrum.levels[j], points);
            let val = scale * integral;
            m[(i, j)] = Complex64::new(val, 0.0);
            m[(j, i)] = m[(i, j)];
        }
    }
    HermitianOperator::from_matrix(basis, m)
}

/// Perturbation problem over the bound states (dimensionless energies u^2,
/// H1 in the same unit). Needs at least two bound states.
pub fn fsw_problem(probe: &FiniteWellProbe) -> Result<PerturbationProblem> {
    let spectrum = fsw_bound_states(probe);
    fsw_problem_from(probe, &spectrum, probe.quad_points)
}

fn fsw_problem_from(
    probe: &FiniteWellProbe,
    spectrum: &FswSpectrum,
    points: usize,
) -> Result<PerturbationProblem> {
    if spectrum.count() < 2 {
        return Err(Error::NoInformation(format!(
            "only {} bound state(s); the perturbation ket is empty",
            spectrum.count()
        )));
    }
    let energies: Vec<f64> = spectrum.levels.iter().map(|l| l.u * l.u).collect();
    let h1 = h1_matrix(probe, spectrum, points)?;
    PerturbationProblem::new(energies, h1, probe.units)
}

/// First-order QFI of the ground state: `4 ||psi1_0||^2` over the bound
/// spectrum, zero when fewer than two bound states exist. The quadrature is
/// validated by grid doubling (relative drift above 1e-4 is an error).
/// `extra["continuum_omitted"] = 1` records that scattering states are
/// dropped (their contribution is negligible for the depths of interest).
pub fn fsw_ground_qfi(probe: &FiniteWellProbe) -> Result<QfiResult> {
    let spectrum = fsw_bound_states(probe);
    let mut base = QfiResult::new(0.0, crate::metrology::QfiMethod::PerturbativeKet)
        .with_truncation(spectrum.count())
        .with_extra("continuum_omitted", 1.0)
        .with_extra("bound_states", spectrum.count() as f64);
    if spectrum.count() < 2 {
        return Ok(base);
    }
    let coarse = {
        let problem = fsw_problem_from(probe, &spectrum, probe.quad_points)?;
        let level = perturbation_ket(&problem, 0, problem.default_degeneracy_tol())?;
        qfi_perturbative(&level).value
    };
    let problem = fsw_problem_from(probe, &spectrum, 2 * probe.quad_points)?;
    let level = perturbation_ket(&problem, 0, problem.default_degeneracy_tol())?;
    let refined = qfi_perturbative(&level).value;
    let drift = (refined - coarse).abs() / refined.abs().max(f64::MIN_POSITIVE);
    if refined != 0.0 && drift > crate::tol::GRID_DOUBLING {
        return Err(Error::GridResolution(format!(
            "H1 quadrature moved by {drift:.2e} under doubling"
        )));
    }
    base.value = refined;
    base = base
        .with_extra("quadrature_drift", drift)
        .with_extra("ground_energy", spectrum.levels[0].energy);
    Ok(base)
}

/// One row of a well sweep.
#[derive(Debug, Clone, Copy)]
pub struct FswSweepRow {
    pub half_width: f64,
    pub depth: f64,
    pub bound_states: usize,
    pub ground_energy: f64,
    pub qfi: f64,
}

/// One sweep evaluation: bound states plus ground QFI at (a, V0).
pub fn fsw_point(half_width: f64, depth: f64, units: UnitSystem) -> Result<FswSweepRow> {
    let probe = FiniteWellProbe::new(half_width, depth, units)?;
    let spectrum = fsw_bound_states(&probe);
    let q = fsw_ground_qfi(&probe)?;
    Ok(FswSweepRow {
        half_width,
        depth,
        bound_states: spectrum.count(),
        ground_energy: spectrum.levels[0].energy,
        qfi: q.value,
    })
}

/// QFI of the ground state along a sweep of depths at fixed width.
pub fn fsw_sweep_depth(
    half_width: f64,
    depths: &[f64],
    units: UnitSystem,
) -> Result<Vec<FswSweepRow>> {
    depths
        .iter()
        .map(|&v0| fsw_point(half_width, v0, units))
        .collect()
}

/// QFI of the ground state along a sweep of widths at fixed depth.
pub fn fsw_sweep_width(
    half_widths: &[f64],
    depth: f64,
    units: UnitSystem,
) -> Result<Vec<FswSweepRow>> {
    half_widths
        .iter()
        .map(|&a| fsw_point(a, depth, units))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn natural(a: f64, v0: f64) -> FiniteWellProbe {
        FiniteWellProbe::new(a, v0, UnitSystem::natural()).unwrap()
    }

    #[test]
    fn z0_20_binds_three_states() {
        // a = 1, V0 = 10 natural: z0^2 = 20, ceil(2 z0 / pi) = 3
        let probe = natural(1.0, 10.0);
        assert!((probe.z0() * probe.z0() - 20.0).abs() < 1e-12);
        let s = fsw_bound_states(&probe);
        assert_eq!(s.count(), 3);
        assert_eq!(s.count(), (2.0 * probe.z0() / PI).ceil() as usize);
    }

    #[test]
    fn shallow_well_still_binds_one_state() {
        for v0 in [1e-2, 1e-4] {
            let s = fsw_bound_states(&natural(1.0, v0));
            assert_eq!(s.count(), 1);
        }
    }

    #[test]
    fn bound_energies_bracketed() {
        let probe = natural(1.0, 10.0);
        let s = fsw_bound_states(&probe);
        for l in &s.levels {
            assert!(l.energy > 0.0 && l.energy < probe.depth);
        }
        // ascending
        let e = s.energies();
        assert!(e.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn roots_satisfy_arcsin_form() {
        // u_n + arcsin(u_n / z0) = n pi / 2 is an exact rewrite of both
        // parity conditions; independent of the bisection path.
        let probe = natural(1.3, 17.0);
        let s = fsw_bound_states(&probe);
        for (idx, l) in s.levels.iter().enumerate() {
            let n = (idx + 1) as f64;
            let lhs = l.u + (l.u / s.z0).asin();
            assert!(
                (lhs - n * PI / 2.0).abs() < 1e-10,
                "level {idx}: {lhs} vs {}",
                n * PI / 2.0
            );
        }
    }

    #[test]
    fn wavefunctions_are_normalized_and_continuous() {
        let probe = natural(1.0, 12.0);
        let s = fsw_bound_states(&probe);
        for l in &s.levels {
            let norm = simpson(0.0, 1.0, 4001, |xi| l.eval(xi).powi(2))
                + simpson(1.0, 1.0 + 40.0 / l.kappa, 4001, |xi| l.eval(xi).powi(2));
            assert!((2.0 * norm - 1.0).abs() < 1e-8, "norm^2 = {}", 2.0 * norm);
            // continuity at the wall
            let inside = l.eval(1.0 - 1e-9);
            let outside = l.eval(1.0 + 1e-9);
            assert!((inside - outside).abs() < 1e-6);
        }
    }

    #[test]
    fn ground_qfi_zero_below_two_bound_states() {
        // z0 < pi/2 gives a single bound state and an empty ket
        let probe = natural(1.0, 0.5);
        assert_eq!(fsw_bound_states(&probe).count(), 1);
        let q = fsw_ground_qfi(&probe).unwrap();
        assert_eq!(q.value, 0.0);
    }

    #[test]
    fn parity_selection_rule() {
        // the even ground state couples only to even states
        let probe = natural(1.0, 125.0f64.sqrt() * 2.0); // deepish
        let spectrum = fsw_bound_states(&probe);
        if spectrum.count() >= 2 {
            let problem = fsw_problem(&probe).unwrap();
            for (j, l) in spectrum.levels.iter().enumerate() {
                if l.parity == Parity::Odd {
                    assert_eq!(problem.h1().element(j, 0), Complex64::ZERO);
                }
            }
        }
    }

    #[test]
    fn ground_qfi_positive_for_three_even_states() {
        // needs a second even state, i.e. N_s >= 3
        let probe = natural(1.0, 10.0);
        let q = fsw_ground_qfi(&probe).unwrap();
        assert!(q.value > 0.0);
    }

    #[test]
    fn approx_levels_close_for_deep_wells() {
        let probe = natural(3.0, 400.0);
        let s = fsw_bound_states(&probe);
        assert!(s.z0 > 80.0);
        for l in &s.levels {
            let rel = (l.approx_energy - l.energy).abs() / l.energy;
            assert!(rel < 0.01, "u = {}, rel = {rel}", l.u);
        }
    }
}
