//! Cross-validation suite.
//!
//! Every record compares a computed quantity against its reference at a
//! pinned tolerance; the same suite backs the `validate` CLI subcommand and
//! the acceptance integration tests. Checks are grouped per figure/table
//! plus one group of module-level invariants.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::hilbert::{self, BasisDescriptor, StateVector};
use crate::metrology::{
    cfi, position_fisher_decomposition, qfi_from_fidelity, qfi_perturbative, sld_pure, Povm,
    StateFamily,
};
use crate::models::free::{free_gaussian_qfi, FreeGaussianProbe};
use crate::models::fsw::{
    fsw_bound_states, fsw_ground_qfi, fsw_problem, fsw_sweep_depth, fsw_sweep_width,
    FiniteWellProbe,
};
use crate::models::ho::{
    ho2d_qfi, ho2d_weighted_ratio, ho_eigenstate_qfi, ho_level, ho_perturbed_superposition_qfi,
    ho_static_superposition_qfi, ho_superposition_qfi, HarmonicProbe, Ho2State,
};
use crate::models::isw::{
    isw_closed_forms, isw_h1_by_quadrature, isw_weighted_ratio, isw_weighted_ratio_3d,
    InfiniteWellProbe,
};
use crate::oracle;
use crate::perturb::{perturbation_ket, perturbed_state};
use crate::units::UnitSystem;

/// One validation record. `pass` always equals
/// `relative_error <= tolerance`.
#[derive(Debug, Clone)]
pub struct CheckRecord {
    pub name: String,
    pub reference: f64,
    pub computed: f64,
    pub relative_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRecord {
    /// Relative comparison (absolute when the reference vanishes).
    pub fn compare(name: &str, reference: f64, computed: f64, tolerance: f64) -> Self {
        let denom = reference.abs();
        let relative_error = if denom > 0.0 {
            (computed - reference).abs() / denom
        } else {
            (computed - reference).abs()
        };
        CheckRecord {
            name: name.to_string(),
            reference,
            computed,
            relative_error,
            tolerance,
            pass: relative_error <= tolerance,
        }
    }

    /// A quantity that must stay below a bound.
    pub fn below(name: &str, value: f64, bound: f64) -> Self {
        CheckRecord {
            name: name.to_string(),
            reference: 0.0,
            computed: value,
            relative_error: value,
            tolerance: bound,
            pass: value <= bound,
        }
    }

    /// A yes/no condition.
    pub fn holds(name: &str, ok: bool) -> Self {
        CheckRecord {
            name: name.to_string(),
            reference: 1.0,
            computed: if ok { 1.0 } else { 0.0 },
            relative_error: if ok { 0.0 } else { 1.0 },
            tolerance: 0.5,
            pass: ok,
        }
    }

    /// An informational value, always passing.
    pub fn info(name: &str, value: f64) -> Self {
        CheckRecord {
            name: name.to_string(),
            reference: value,
            computed: value,
            relative_error: 0.0,
            tolerance: f64::INFINITY,
            pass: true,
        }
    }

    /// Replace the tolerance (used by the CLI's diagnostic override).
    pub fn with_tolerance_override(mut self, tolerance: Option<f64>) -> Self {
        if let Some(t) = tolerance {
            self.tolerance = t;
            self.pass = self.relative_error <= t;
        }
        self
    }
}

/// Deterministic 64-bit generator (SplitMix64) for the randomized checks.
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

/// Least-squares slope of y against x.
fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

fn ho_natural(truncation: usize) -> HarmonicProbe {
    HarmonicProbe::new(1.0, 1, truncation, UnitSystem::natural()).expect("valid probe")
}

fn ho2_natural() -> HarmonicProbe {
    HarmonicProbe::new(1.0, 2, 12, UnitSystem::natural()).expect("valid probe")
}

/// Criterion 1: Table-style closed-form exactness at 1e-9 relative.
pub fn criterion_1_table1() -> Vec<CheckRecord> {
    let tol = 1e-9;
    let p1 = ho_natural(32);
    let p2 = ho2_natural();
    let mut out = Vec::new();
    let q0 = ho_eigenstate_qfi(&p1, 0).unwrap().extra["perturbative"];
    let q1 = ho_eigenstate_qfi(&p1, 1).unwrap().extra["perturbative"];
    let q01 = ho_static_superposition_qfi(&p1, (0, 1)).unwrap().value;
    out.push(CheckRecord::compare(
        "table1/1d_ground_39_8",
        39.0 / 8.0,
        q0,
        tol,
    ));
    out.push(CheckRecord::compare(
        "table1/1d_excited_315_8",
        315.0 / 8.0,
        q1,
        tol,
    ));
    out.push(CheckRecord::compare(
        "table1/1d_superposition_177_8",
        177.0 / 8.0,
        q01,
        tol,
    ));
    let g2 = ho2d_qfi(&p2, Ho2State::Ground).unwrap().value;
    let e2 = ho2d_qfi(&p2, Ho2State::Excited10).unwrap().value;
    let s2 = ho2d_qfi(&p2, Ho2State::SupGround01).unwrap().value;
    let t2 = ho2d_qfi(&p2, Ho2State::Sup1001).unwrap().value;
    out.push(CheckRecord::compare("table1/2d_ground_17", 17.0, g2, tol));
    out.push(CheckRecord::compare("table1/2d_excited_75", 75.0, e2, tol));
    out.push(CheckRecord::compare(
        "table1/2d_superposition_46",
        46.0,
        s2,
        tol,
    ));
    out.push(CheckRecord::compare(
        "table1/2d_entangled_75",
        75.0,
        t2,
        tol,
    ));
    out.push(CheckRecord::compare(
        "table1/ratio_ground_68_39",
        68.0 / 39.0,
        ho2d_weighted_ratio(&p2, Ho2State::Ground).unwrap(),
        tol,
    ));
    out.push(CheckRecord::compare(
        "table1/ratio_excited_100_59",
        100.0 / 59.0,
        ho2d_weighted_ratio(&p2, Ho2State::Excited10).unwrap(),
        tol,
    ));
    out.push(CheckRecord::compare(
        "table1/ratio_superposition_46_27",
        46.0 / 27.0,
        ho2d_weighted_ratio(&p2, Ho2State::SupGround01).unwrap(),
        tol,
    ));
    out.push(CheckRecord::compare(
        "table1/ratio_entangled_100_59",
        100.0 / 59.0,
        ho2d_weighted_ratio(&p2, Ho2State::Sup1001).unwrap(),
        tol,
    ));
    out
}

/// Criterion 2: fidelity-metric QFI from exact diagonalization on the
/// perturbative problem's own basis, against the first-order value.
pub fn criterion_2_oracle_concordance() -> Vec<CheckRecord> {
    let gamma = 1e-6;
    let mut out = Vec::new();
    let probe = ho_natural(32);
    for n in [0usize, 1] {
        let h = oracle::fock_hamiltonian_1d(&probe).unwrap();
        let fam = oracle::oracle_state_family(h, oracle::PrepRecipe::Eigenstate(n));
        let q = qfi_from_fidelity(&fam, gamma, 1e-3).unwrap().value;
        let reference = ho_eigenstate_qfi(&probe, n).unwrap().value;
        out.push(CheckRecord::compare(
            &format!("concordance/ho_n{n}"),
            reference,
            q,
            1e-3,
        ));
    }
    let probe2 = ho2_natural();
    let h2 = oracle::fock_hamiltonian_2d(&probe2).unwrap();
    let fam2 = oracle::oracle_state_family(h2, oracle::PrepRecipe::Eigenstate(0));
    let q2 = qfi_from_fidelity(&fam2, gamma, 1e-3).unwrap().value;
    out.push(CheckRecord::compare("concordance/ho2d_00", 17.0, q2, 1e-3));

    let fsw = FiniteWellProbe::new(1.0, 250f64.sqrt(), UnitSystem::natural()).unwrap();
    let pert = fsw_ground_qfi(&fsw).unwrap().value;
    let hb = oracle::bound_basis_fsw(&fsw).unwrap();
    let famf = oracle::oracle_state_family(hb, oracle::PrepRecipe::Eigenstate(0));
    let qf = qfi_from_fidelity(&famf, gamma, 1e-3).unwrap().value;
    out.push(CheckRecord::compare(
        "concordance/fsw_ground",
        pert,
        qf,
        1e-2,
    ));
    out
}

/// Criterion 3: the eigenstate QFI polynomial for n = 0..10 at 1e-10.
pub fn criterion_3_ho_polynomial() -> Vec<CheckRecord> {
    (0..=10)
        .map(|n| {
            let probe = ho_natural(n + 24);
            let level = ho_level(&probe, n).unwrap();
            let computed = qfi_perturbative(&level).value;
            let nf = n as f64;
            let poly =
                65.0 * nf.powi(4) + 130.0 * nf.powi(3) + 487.0 * nf * nf + 422.0 * nf + 156.0;
            CheckRecord::compare(&format!("ho_polynomial/n{n}"), poly / 32.0, computed, 1e-10)
        })
        .collect()
}

/// Criterion 4: dimensional super-additivity, exact.
pub fn criterion_4_super_additivity() -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for n in 2..=20 {
        out.push(CheckRecord::compare(
            &format!("super_additivity/2d_n{n}"),
            8.0,
            isw_weighted_ratio(n, n).unwrap(),
            1e-12,
        ));
        out.push(CheckRecord::compare(
            &format!("super_additivity/3d_n{n}"),
            27.0,
            isw_weighted_ratio_3d(n, n, n).unwrap(),
            1e-12,
        ));
    }
    out
}

/// Criterion 5: free-particle closed-form identities.
pub fn criterion_5_free_particle(seed: u64) -> Vec<CheckRecord> {
    let mut rng = SplitMix64::new(seed);
    let units = UnitSystem::natural();
    let mut worst_dual = 0.0f64;
    let mut worst_quad = 0.0f64;
    for i in 0..100 {
        let p0 = rng.uniform(0.05, 3.0);
        let sigma = rng.uniform(0.05, 2.5);
        let probe = FreeGaussianProbe::new(p0, sigma, 1.0, units).unwrap();
        let q = free_gaussian_qfi(&probe);
        worst_dual = worst_dual.max((q.value - q.extra["h0_form"]).abs() / q.value);
        if i % 10 == 0 {
            let quad = oracle::free_moment_qfi(&probe, 4001);
            worst_quad = worst_quad.max((q.value - quad).abs() / q.value);
        }
    }
    vec![
        CheckRecord::below("free_particle/dual_form_worst_rel", worst_dual, 1e-12),
        CheckRecord::below("free_particle/quadrature_worst_rel", worst_quad, 1e-8),
    ]
}

/// Count strict interior local maxima among positive entries, merging
/// plateaus.
fn interior_maxima(values: &[f64]) -> usize {
    // collapse consecutive equal values
    let mut compact: Vec<f64> = Vec::with_capacity(values.len());
    for &v in values {
        if compact.last() != Some(&v) {
            compact.push(v);
        }
    }
    let mut count = 0;
    for i in 1..compact.len().saturating_sub(1) {
        if compact[i] > 0.0 && compact[i] > compact[i - 1] && compact[i] > compact[i + 1] {
            count += 1;
        }
    }
    count
}

/// Criterion 6: qualitative reproduction of the finite-well figure.
///
/// Depth sweeps use per-width windows `V0 in [0.3, 30]/a^2` so each curve
/// resolves its own threshold structure (everything scales through
/// `z0 = a sqrt(2 V0)`).
pub fn criterion_6_fsw_figure() -> Vec<CheckRecord> {
    let units = UnitSystem::natural();
    let mut out = Vec::new();
    let mut peak_locations = Vec::new();
    for a in [1.0, 1.5, 2.0] {
        let lo = 0.3 / (a * a);
        let hi = 30.0 / (a * a);
        let points = 320;
        let grid: Vec<f64> = (0..points)
            .map(|i| lo + i as f64 * (hi - lo) / (points - 1) as f64)
            .collect();
        let rows = fsw_sweep_depth(a, &grid, units).unwrap();
        let zero_where_few = rows
            .iter()
            .filter(|r| r.bound_states < 2)
            .all(|r| r.qfi == 0.0);
        out.push(CheckRecord::holds(
            &format!("fsw_figure/depth_a{a}/zero_when_below_two_bound"),
            zero_where_few,
        ));
        let vals: Vec<f64> = rows.iter().map(|r| r.qfi).collect();
        out.push(CheckRecord::compare(
            &format!("fsw_figure/depth_a{a}/interior_maxima"),
            1.0,
            interior_maxima(&vals) as f64,
            1e-12,
        ));
        // location of the interior local maximum
        let mut loc = f64::NAN;
        for i in 1..vals.len() - 1 {
            if vals[i] > 0.0 && vals[i] > vals[i - 1] && vals[i] > vals[i + 1] {
                loc = rows[i].depth;
                break;
            }
        }
        peak_locations.push(loc);
    }
    out.push(CheckRecord::holds(
        "fsw_figure/peak_depth_decreases_with_width",
        peak_locations.windows(2).all(|w| w[0] > w[1]),
    ));

    for v0 in [10f64.sqrt(), 75f64.sqrt(), 250f64.sqrt()] {
        let points = 300;
        let grid: Vec<f64> = (0..points)
            .map(|i| 0.1 + i as f64 * (10.0 - 0.1) / (points - 1) as f64)
            .collect();
        let rows = fsw_sweep_width(&grid, v0, units).unwrap();
        let zero_below = rows
            .iter()
            .filter(|r| r.bound_states < 2)
            .all(|r| r.qfi == 0.0);
        out.push(CheckRecord::holds(
            &format!("fsw_figure/width_v0_{v0:.2}/zero_below_threshold"),
            zero_below,
        ));
        let peak = rows.iter().map(|r| r.qfi).fold(f64::NEG_INFINITY, f64::max);
        let tail = rows.last().unwrap().qfi;
        out.push(CheckRecord::below(
            &format!("fsw_figure/width_v0_{v0:.2}/tail_over_peak"),
            tail / peak,
            0.5,
        ));
    }
    out
}

/// Criterion 7: the perturbed-superposition hierarchy at t = 1.
///
/// Implemented exactly as stated. At these parameters the commuting-phase
/// term (tau dE1)^2 dominates and orders the (0,n) family above (1,n), so
/// these records fail; the hierarchy holds only for tau ≲ 0.23 where the
/// perturbation kets dominate. The records are kept red rather than
/// retuned.
pub fn criterion_7_ho_hierarchy() -> Vec<CheckRecord> {
    let probe = ho_natural(32);
    let mut out = Vec::new();
    for n in [2usize, 3, 4] {
        let solid = ho_perturbed_superposition_qfi(&probe, (0, n), 1.0, 1e-6)
            .unwrap()
            .value;
        let dashed = ho_perturbed_superposition_qfi(&probe, (1, n), 1.0, 1e-6)
            .unwrap()
            .value;
        let mut rec = CheckRecord::holds(
            &format!("ho_hierarchy/dashed_above_solid_n{n}"),
            dashed > solid,
        );
        rec.reference = solid;
        rec.computed = dashed;
        out.push(rec);
    }
    out
}

const MEV_PER_C: f64 = 1.602176634e-13 / 2.99e8;

/// The three comparison series in SI units (t = 1 s, m = 1e-27 kg).
pub struct ComparisonSeries {
    /// (sweep parameter, probe energy [J], QFI)
    pub free: Vec<(f64, f64, f64)>,
    pub isw: Vec<(f64, f64, f64)>,
    pub ho: Vec<(f64, f64, f64)>,
}

/// Free packet over sigma in (0, 30] MeV/c at p0 = 1 MeV/c; infinite well
/// (|1>+|4>)/sqrt2 over a in [1, 10] nm; oscillator perturbed (1,4)
/// superposition over omega in [1e13, 1e14] 1/s.
pub fn comparison_series(points: usize) -> ComparisonSeries {
    let units = UnitSystem::si();
    let n = points.max(2);
    let free = (0..n)
        .map(|i| {
            let sigma_mev = 30.0 * (i + 1) as f64 / n as f64;
            let probe =
                FreeGaussianProbe::new(MEV_PER_C, sigma_mev * MEV_PER_C, 1.0, units).unwrap();
            (
                sigma_mev,
                probe.mean_energy(),
                free_gaussian_qfi(&probe).value,
            )
        })
        .collect();
    let isw = (0..n)
        .map(|i| {
            let a = (1.0 + 9.0 * i as f64 / (n - 1) as f64) * 1e-9;
            let probe = InfiniteWellProbe::new(a, vec![1], units).unwrap();
            let q = isw_closed_forms(&probe, 1.0, &[4]).unwrap();
            (a, q.extra["mean_energy"], q.value)
        })
        .collect();
    let ho = (0..n)
        .map(|i| {
            // logarithmic sweep over the decade
            let omega = 1e13 * 10f64.powf(i as f64 / (n - 1) as f64);
            let probe = HarmonicProbe::new(omega, 1, 24, units).unwrap();
            let q = ho_perturbed_superposition_qfi(&probe, (1, 4), 1.0, 1e-6).unwrap();
            // mean unperturbed energy of the (1,4) superposition
            let energy = units.hbar * omega * (1.5 + 4.5) / 2.0;
            (omega, energy, q.value)
        })
        .collect();
    ComparisonSeries { free, isw, ho }
}

/// Criterion 8: the comparison-figure ordering in SI units.
pub fn criterion_8_comparison() -> Vec<CheckRecord> {
    let series = comparison_series(60);
    let ho_min = series.ho.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
    let isw_max = series
        .isw
        .iter()
        .map(|r| r.2)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut out = Vec::new();
    let mut rec = CheckRecord::holds("comparison/ho_min_above_isw_max", ho_min > isw_max);
    rec.reference = isw_max;
    rec.computed = ho_min;
    out.push(rec);
    out.push(CheckRecord::info(
        "comparison/log10_gap_ho_over_isw",
        (ho_min / isw_max).log10(),
    ));
    // the free series dies off as sigma -> 0
    let free_first = series.free.first().unwrap().2;
    let free_max = series
        .free
        .iter()
        .map(|r| r.2)
        .fold(f64::NEG_INFINITY, f64::max);
    out.push(CheckRecord::below(
        "comparison/free_vanishes_at_small_sigma",
        free_first / free_max,
        1e-6,
    ));
    out
}

/// Criterion 9: second-order optimality of the static energy measurement
/// for the finite-well ground state. The gap between the gamma-independent
/// first-order QFI and the energy-measurement CFI on the normalized
/// first-order family is the normalization deficit 2 gamma^2 ||psi1||^2,
/// so its log-log slope against gamma is 2.
pub fn criterion_9_energy_measurement() -> Vec<CheckRecord> {
    let probe = FiniteWellProbe::new(1.0, 250f64.sqrt(), UnitSystem::natural()).unwrap();
    let problem = fsw_problem(&probe).unwrap();
    let level = perturbation_ket(&problem, 0, problem.default_degeneracy_tol()).unwrap();
    let qfi_ref = qfi_perturbative(&level).value;
    let basis = level.basis().clone();
    let povm = Povm::basis_projectors(basis);
    let lvl = level.clone();
    let family = StateFamily::new(move |g| perturbed_state(&lvl, g).state);
    let mut pts = Vec::new();
    let mut all_below = true;
    for gamma in [1e-6, 3e-6, 1e-5, 3e-5] {
        let c = cfi(&povm, &family, gamma, gamma / 8.0).unwrap().value;
        all_below &= c <= qfi_ref;
        let gap = (qfi_ref - c) / qfi_ref;
        pts.push((gamma.ln(), gap.ln()));
    }
    let slope = fit_slope(&pts);
    vec![
        CheckRecord::compare("energy_measurement/gap_loglog_slope", 2.0, slope, 0.1),
        CheckRecord::holds("energy_measurement/cfi_below_qfi", all_below),
    ]
}

/// A normalized Gaussian radial profile on a grid, shared by the
/// position-decomposition families.
fn grid_gaussian(basis: &BasisDescriptor) -> StateVector {
    StateVector::from_grid_fn(basis.clone(), |x| Complex64::new((-x * x / 2.0).exp(), 0.0))
        .unwrap()
        .normalized()
        .unwrap()
}

/// Criterion 10: the position-measurement information identity.
pub fn criterion_10_position_identity() -> Vec<CheckRecord> {
    let basis = BasisDescriptor::grid1d(-8.0, 8.0, 512).unwrap();
    let mut out = Vec::new();

    // pure-phase family psi = exp(i gamma x) r(x): CFI = 0, QFI = 4<x^2>
    {
        let r = grid_gaussian(&basis);
        let points = basis.grid_points().unwrap();
        let amps: Vec<Complex64> = r.amplitudes().to_vec();
        let b = basis.clone();
        let family = StateFamily::new(move |g| {
            let rotated: Vec<Complex64> = amps
                .iter()
                .zip(&points)
                .map(|(a, &x)| a * Complex64::from_polar(1.0, g * x))
                .collect();
            StateVector::new(b.clone(), rotated).unwrap()
        });
        let d = position_fisher_decomposition(&family, 0.0, 1e-5).unwrap();
        let q = qfi_from_fidelity(&family, 0.0, 3e-3).unwrap().value;
        out.push(CheckRecord::compare(
            "position_identity/phase_family_qfi",
            q,
            d.qfi(),
            1e-6,
        ));
        out.push(CheckRecord::below(
            "position_identity/phase_family_cfi_zero",
            d.cfi_position,
            1e-9,
        ));
    }

    // real family: phase terms vanish identically and CFI = QFI exactly
    {
        let b = basis.clone();
        let family = StateFamily::new(move |g: f64| {
            StateVector::from_grid_fn(b.clone(), |x| {
                Complex64::new((-x * x / 2.0).exp() * (1.0 + g * x * x), 0.0)
            })
            .unwrap()
            .normalized()
            .unwrap()
        });
        let d = position_fisher_decomposition(&family, 0.05, 1e-5).unwrap();
        let q = qfi_from_fidelity(&family, 0.05, 3e-3).unwrap().value;
        out.push(CheckRecord::compare(
            "position_identity/real_family_qfi",
            q,
            d.qfi(),
            1e-6,
        ));
        out.push(CheckRecord::holds(
            "position_identity/real_family_cfi_equals_qfi",
            d.phase_norm_term == 0.0 && d.phase_mean_term == 0.0,
        ));
    }

    // mixed family exercises all three terms
    {
        let b = basis.clone();
        let family = StateFamily::new(move |g: f64| {
            StateVector::from_grid_fn(b.clone(), |x| {
                let radial = (-x * x / 2.0).exp() * (1.0 + 0.4 * g * x * x);
                radial * Complex64::from_polar(1.0, g * (x + 0.2 * x * x))
            })
            .unwrap()
            .normalized()
            .unwrap()
        });
        let d = position_fisher_decomposition(&family, 0.02, 1e-5).unwrap();
        let q = qfi_from_fidelity(&family, 0.02, 1e-3).unwrap().value;
        out.push(CheckRecord::compare(
            "position_identity/mixed_family_qfi",
            q,
            d.qfi(),
            1e-6,
        ));
        out.push(CheckRecord::holds(
            "position_identity/mixed_family_cramer_rao",
            d.cfi_position <= q * (1.0 + 1e-8),
        ));
    }
    out
}

/// Criterion 11: the closed-form level approximation against the
/// transcendental roots, within 1% for every bound level on a 20x20 grid
/// of deep wells (the approximation's error is ~0.43/z0, so the bound only
/// holds for z0 ≳ 43; the grid spans z0 in [61, 329]).
pub fn criterion_11_fsw_approximation() -> Vec<CheckRecord> {
    let mut worst = 0.0f64;
    let mut levels_checked = 0usize;
    for i in 0..20 {
        for j in 0..20 {
            let a = 2.5 + i as f64 * (6.0 - 2.5) / 19.0;
            let v0 = 300.0 + j as f64 * (1500.0 - 300.0) / 19.0;
            let probe = FiniteWellProbe::new(a, v0, UnitSystem::natural()).unwrap();
            let s = fsw_bound_states(&probe);
            for l in &s.levels {
                worst = worst.max(((l.approx_energy - l.energy) / l.energy).abs());
                levels_checked += 1;
            }
        }
    }
    vec![
        CheckRecord::below("fsw_approximation/worst_rel_error", worst, 0.01),
        CheckRecord::info("fsw_approximation/levels_checked", levels_checked as f64),
    ]
}

/// Module-level invariants beyond the numbered criteria.
pub fn invariant_checks(seed: u64) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let mut rng = SplitMix64::new(seed ^ 0xa5a5_5a5a);

    // hilbert: self-adjointness of apply on a model-built operator
    {
        let probe = ho_natural(24);
        let problem = crate::models::ho::ho_problem(&probe).unwrap();
        let basis = problem.basis().clone();
        let dim = basis.dim();
        let random_state = |rng: &mut SplitMix64| {
            let amps: Vec<Complex64> = (0..dim)
                .map(|_| Complex64::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)))
                .collect();
            StateVector::new(basis.clone(), amps)
                .unwrap()
                .normalized()
                .unwrap()
        };
        let mut worst = 0.0f64;
        for _ in 0..8 {
            let a = random_state(&mut rng);
            let b = random_state(&mut rng);
            let lhs = hilbert::inner(&hilbert::apply(problem.h1(), &a).unwrap(), &b).unwrap();
            let rhs = hilbert::inner(&a, &hilbert::apply(problem.h1(), &b).unwrap()).unwrap();
            worst = worst.max((lhs - rhs).norm());
        }
        out.push(CheckRecord::below(
            "invariants/hilbert_self_adjointness",
            worst,
            1e-10,
        ));
    }

    // perturb: Eq.-consistency c_m (E0_n - E0_m) = <m|H1|n> on the 2D problem
    {
        let (problem, basis2) = crate::models::ho::ho2_problem(&ho2_natural()).unwrap();
        let idx = basis2.index_of(0, 0).unwrap();
        let level = perturbation_ket(&problem, idx, problem.default_degeneracy_tol()).unwrap();
        let mut worst = 0.0f64;
        for m in 0..problem.dim() {
            if m == idx {
                continue;
            }
            let lhs =
                level.ket_coefficients[m] * Complex64::new(level.e0 - problem.energies()[m], 0.0);
            let rhs = problem.h1().element(m, idx);
            worst = worst.max((lhs - rhs).norm());
        }
        out.push(CheckRecord::below(
            "invariants/perturbation_ket_consistency",
            worst,
            1e-12,
        ));
    }

    // perturb: truncation convergence of the oscillator ket norm
    {
        let norm_at = |t: usize| ho_level(&ho_natural(t), 4).unwrap().ket_norm_sq();
        let a = norm_at(4 + 8);
        let b = norm_at(4 + 16);
        out.push(CheckRecord::below(
            "invariants/ket_truncation_convergence",
            (a - b).abs() / b,
            1e-12,
        ));
    }

    // perturb/oracle: eigenvalues of H0 + gamma H1 approach E0 + gamma E1
    // with O(gamma^2) residual (log-log slope 2 +/- 0.1)
    {
        let probe = ho_natural(32);
        let h = oracle::fock_hamiltonian_1d(&probe).unwrap();
        let e0 = oracle::diagonalize(&h, 0.0, 1).unwrap().eigenvalues[0];
        let e1 = probe.first_order_energy_hw(0);
        let mut pts = Vec::new();
        for gamma in [1e-4, 3e-5, 1e-5, 3e-6, 1e-6] {
            let e = oracle::diagonalize(&h, gamma, 1).unwrap().eigenvalues[0];
            let residual = (e - e0 - gamma * e1).abs();
            pts.push((gamma.ln(), residual.ln()));
        }
        out.push(CheckRecord::compare(
            "invariants/first_order_energy_residual_slope",
            2.0,
            fit_slope(&pts),
            0.05,
        ));
    }

    // oracle: Hellmann-Feynman on the oscillator grid
    {
        let probe = ho_natural(32);
        let h = oracle::discretize_ho1(&probe, 512).unwrap();
        let dg = 1e-5;
        let ep = oracle::diagonalize(&h, dg, 1).unwrap().eigenvalues[0];
        let em = oracle::diagonalize(&h, -dg, 1).unwrap().eigenvalues[0];
        let slope = (ep - em) / (2.0 * dg);
        out.push(CheckRecord::compare(
            "invariants/hellmann_feynman_ground",
            probe.first_order_energy_hw(0),
            slope,
            1e-6,
        ));
    }

    // oracle: spectral convergence under grid doubling (smooth potential)
    {
        let probe = ho_natural(32);
        let s = oracle::diagonalize_converged(&oracle::ProbeModel::Harmonic(probe), 256, 1e-6, 8)
            .unwrap();
        let worst = s.convergence.unwrap().into_iter().fold(0.0f64, f64::max);
        out.push(CheckRecord::below(
            "invariants/oracle_grid_doubling",
            worst,
            1e-8,
        ));
    }

    // oracle: finite-well grid spectra against the transcendental roots
    {
        let probe = FiniteWellProbe::new(1.0, 10.0, UnitSystem::natural()).unwrap();
        let spectrum = fsw_bound_states(&probe);
        let h = oracle::discretize_fsw(&probe, 1024).unwrap();
        let s = oracle::diagonalize(&h, 0.0, spectrum.count()).unwrap();
        let worst = spectrum
            .levels
            .iter()
            .zip(&s.eigenvalues)
            .map(|(l, &e)| ((e - l.u * l.u) / (l.u * l.u)).abs())
            .fold(0.0f64, f64::max);
        out.push(CheckRecord::below(
            "invariants/fsw_grid_vs_roots",
            worst,
            1e-6,
        ));
    }

    // metrology: two-level equal-weight identity (t dE1 / hbar)^2, exact
    {
        let t = 1.7;
        let q = crate::metrology::qfi_commuting_superposition(&[0.5, 0.5], &[1.0, 5.0], t, 1.0)
            .unwrap()
            .value;
        out.push(CheckRecord::below(
            "invariants/two_level_variance_identity",
            (q - (t * 4.0).powi(2)).abs(),
            1e-12,
        ));
    }

    // metrology: quadratic time scaling, exact
    {
        let q1 = ho_superposition_qfi(&ho_natural(16), 2, 1.0).unwrap().value;
        let q2 = ho_superposition_qfi(&ho_natural(16), 2, 2.0).unwrap().value;
        out.push(CheckRecord::below(
            "invariants/time_scaling_exact",
            (q2 - 4.0 * q1).abs() / q2,
            1e-15,
        ));
    }

    // metrology: optimality (CFI below QFI) for the energy measurement on
    // the oscillator's first-order family
    {
        let probe = ho_natural(24);
        let level = ho_level(&probe, 0).unwrap();
        let qfi_ref = qfi_perturbative(&level).value;
        let povm = Povm::basis_projectors(level.basis().clone());
        let lvl = level.clone();
        let family = StateFamily::new(move |g| perturbed_state(&lvl, g).state);
        let c = cfi(&povm, &family, 1e-4, 1e-5).unwrap().value;
        out.push(CheckRecord::holds(
            "invariants/cramer_rao_energy_povm",
            c <= qfi_ref * (1.0 + 1e-8),
        ));
    }

    // metrology: SLD has zero mean on its family
    {
        let probe = ho_natural(24);
        let level = ho_level(&probe, 0).unwrap();
        let gamma = 1e-4;
        let psi = perturbed_state(&level, gamma).state;
        // analytic derivative of the normalized first-order family
        let raw = level.ket_state();
        let overlap = hilbert::inner(&psi, &raw).unwrap();
        let dim = psi.dim();
        let amps: Vec<Complex64> = (0..dim)
            .map(|i| raw.amplitudes()[i] - overlap * psi.amplitudes()[i])
            .collect();
        let dpsi = StateVector::new(psi.basis().clone(), amps).unwrap();
        let sld = sld_pure(&psi, &dpsi).unwrap();
        let mean = hilbert::inner(&psi, &hilbert::apply(&sld, &psi).unwrap())
            .unwrap()
            .norm();
        out.push(CheckRecord::below("invariants/sld_zero_mean", mean, 1e-10));
    }

    // models: infinite-well H1 diagonality under quadrature
    {
        let probe = InfiniteWellProbe::new(1.0, vec![1], UnitSystem::natural()).unwrap();
        let h1 = isw_h1_by_quadrature(&probe, 8, 4097).unwrap();
        let scale = h1.max_abs();
        let mut worst = 0.0f64;
        for i in 0..8 {
            for j in 0..8 {
                if i != j {
                    worst = worst.max(h1.element(i, j).norm());
                }
            }
        }
        out.push(CheckRecord::below(
            "invariants/isw_h1_diagonal",
            worst / scale,
            1e-12,
        ));
    }

    // models: the two infinite-well closed forms agree identically
    {
        let probe = InfiniteWellProbe::new(1.0, vec![1], UnitSystem::natural()).unwrap();
        let mut worst = 0.0f64;
        for n in [2u32, 3, 5, 9, 17] {
            let q = isw_closed_forms(&probe, 0.7, &[n]).unwrap();
            worst = worst.max((q.value - q.extra["energy_form"]).abs() / q.value);
        }
        out.push(CheckRecord::below(
            "invariants/isw_energy_form_identity",
            worst,
            1e-12,
        ));
    }

    // models: oscillator selection rules are exact on the built matrix
    {
        let problem = crate::models::ho::ho_problem(&ho_natural(24)).unwrap();
        let mut worst = 0.0f64;
        for m in 0..24usize {
            for n in 0..24usize {
                let d = m.abs_diff(n);
                if d != 0 && d != 2 && d != 4 {
                    worst = worst.max(problem.h1().element(m, n).norm());
                }
            }
        }
        out.push(CheckRecord::below(
            "invariants/ho_selection_rules",
            worst,
            0.0,
        ));
    }

    // models: the 2D well correction is minimized at (1,1)
    {
        let probe = InfiniteWellProbe::new(1.0, vec![1, 1], UnitSystem::natural()).unwrap();
        let e = |nx: u32, ny: u32| {
            let s = (nx * nx + ny * ny) as f64;
            s * s // common positive prefactor dropped
        };
        let _ = &probe;
        let mut min_at_11 = true;
        for nx in 1..=10 {
            for ny in 1..=10 {
                if (nx, ny) != (1, 1) && e(nx, ny) <= e(1, 1) {
                    min_at_11 = false;
                }
            }
        }
        out.push(CheckRecord::holds(
            "invariants/isw2d_minimum_correction_at_11",
            min_at_11,
        ));
    }

    // models: entanglement is not the resource (equal QFIs at 1e-9)
    {
        let p2 = ho2_natural();
        let a = ho2d_qfi(&p2, Ho2State::Excited10).unwrap().value;
        let b = ho2d_qfi(&p2, Ho2State::Sup1001).unwrap().value;
        out.push(CheckRecord::below(
            "invariants/entangled_probe_equal_qfi",
            (a - b).abs() / a,
            1e-9,
        ));
    }

    // models: superposition closed form equals the variance form
    {
        let probe = ho_natural(24);
        let mut worst = 0.0f64;
        for n in [1usize, 2, 4] {
            let closed = ho_superposition_qfi(&probe, n, 0.8).unwrap().value;
            let e1 = [
                probe.first_order_energy_hw(0),
                probe.first_order_energy_hw(n),
            ];
            let variance = crate::metrology::qfi_commuting_superposition(
                &[0.5, 0.5],
                &e1,
                probe.omega * 0.8,
                1.0,
            )
            .unwrap()
            .value;
            worst = worst.max((closed - variance).abs() / closed);
        }
        out.push(CheckRecord::below(
            "invariants/ho_superposition_variance_identity",
            worst,
            1e-12,
        ));
    }

    // oracle: evolved infinite-well superposition against the closed form
    {
        let probe = InfiniteWellProbe::new(1.0, vec![1], UnitSystem::natural()).unwrap();
        let h = oracle::discretize_isw(&probe, 256).unwrap();
        let tau = PI * PI / 2.0; // t = 1 in well units
        let fam = oracle::oracle_state_family(
            h,
            oracle::PrepRecipe::EvolvedSuperposition { pair: (0, 3), tau },
        );
        let q = qfi_from_fidelity(&fam, 1e-6, 1e-7).unwrap().value;
        let closed = isw_closed_forms(&probe, 1.0, &[4]).unwrap().value;
        out.push(CheckRecord::compare(
            "invariants/isw_evolved_superposition_oracle",
            closed,
            q,
            1e-4,
        ));
    }

    // oracle: eigenstates of the well family carry no information
    {
        let probe = InfiniteWellProbe::new(1.0, vec![1], UnitSystem::natural()).unwrap();
        let h = oracle::discretize_isw(&probe, 256).unwrap();
        let fam = oracle::oracle_state_family(h, oracle::PrepRecipe::Eigenstate(0));
        let q = qfi_from_fidelity(&fam, 1e-6, 1e-3).unwrap().value;
        out.push(CheckRecord::below(
            "invariants/isw_eigenstate_zero_qfi",
            q.abs(),
            1e-9,
        ));
    }

    // open question, reported not asserted: the free-packet QFI is observed
    // to increase in both h0*m and sigma on the constrained domain
    {
        let units = UnitSystem::natural();
        let mut monotone = true;
        for i in 1..20 {
            for j in 1..20 {
                let y = 0.2 + i as f64 * 0.2; // h0 * m
                let sigma_max = (2.0 * y).sqrt();
                let sigma = sigma_max * j as f64 / 20.0;
                let p0 = (2.0 * y - sigma * sigma).max(0.0).sqrt();
                let probe = FreeGaussianProbe::new(p0, sigma, 1.0, units).unwrap();
                let q = free_gaussian_qfi(&probe).value;
                // step up in y at fixed sigma
                let y2 = y + 0.05;
                let p0b = (2.0 * y2 - sigma * sigma).max(0.0).sqrt();
                let qb =
                    free_gaussian_qfi(&FreeGaussianProbe::new(p0b, sigma, 1.0, units).unwrap())
                        .value;
                if qb < q {
                    monotone = false;
                }
            }
        }
        out.push(CheckRecord::info(
            "open_question/free_qfi_monotone_in_energy",
            if monotone { 1.0 } else { 0.0 },
        ));
    }

    out
}

/// Run every group. `tolerance_override`, when set, replaces each record's
/// tolerance (the validation CLI uses this to force failures on demand).
pub fn run_all(seed: u64, tolerance_override: Option<f64>) -> Vec<CheckRecord> {
    let mut records = Vec::new();
    records.extend(criterion_1_table1());
    records.extend(criterion_2_oracle_concordance());
    records.extend(criterion_3_ho_polynomial());
    records.extend(criterion_4_super_additivity());
    records.extend(criterion_5_free_particle(seed));
    records.extend(criterion_6_fsw_figure());
    records.extend(criterion_7_ho_hierarchy());
    records.extend(criterion_8_comparison());
    records.extend(criterion_9_energy_measurement());
    records.extend(criterion_10_position_identity());
    records.extend(criterion_11_fsw_approximation());
    records.extend(invariant_checks(seed));
    records
        .into_iter()
        .map(|r| r.with_tolerance_override(tolerance_override))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_pass_flag_matches_definition() {
        let r = CheckRecord::compare("x", 2.0, 2.0 + 1e-12, 1e-9);
        assert!(r.pass);
        assert!(r.relative_error <= r.tolerance);
        let r = CheckRecord::compare("x", 2.0, 2.1, 1e-9);
        assert!(!r.pass);
        let r = CheckRecord::below("x", 0.5, 0.4);
        assert!(!r.pass && r.relative_error > r.tolerance);
    }

    #[test]
    fn splitmix_is_deterministic() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..10 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let mut c = SplitMix64::new(43);
        assert_ne!(a.next_u64(), c.next_u64());
    }

    #[test]
    fn interior_maxima_counting() {
        assert_eq!(interior_maxima(&[0.0, 1.0, 2.0, 1.0, 0.5]), 1);
        assert_eq!(interior_maxima(&[0.0, 2.0, 2.0, 1.0]), 1); // plateau merged
        assert_eq!(interior_maxima(&[0.0, 1.0, 0.5, 1.5, 0.2]), 2);
        assert_eq!(interior_maxima(&[0.0, 0.5, 1.0, 2.0]), 0); // edge max not interior
    }

    #[test]
    fn fit_slope_recovers_polynomial_order() {
        let pts: Vec<(f64, f64)> = [1e-4f64, 1e-5, 1e-6]
            .iter()
            .map(|&g| (g.ln(), (3.0 * g * g).ln()))
            .collect();
        assert!((fit_slope(&pts) - 2.0).abs() < 1e-12);
    }
}
