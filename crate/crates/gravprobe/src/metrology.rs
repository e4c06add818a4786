//! Quantum and classical Fisher information for pure-state models.
//!
//! The quantum Fisher information of a pure family |psi_gamma> is
//!
//! ```text
//! F_q = 4 [ <d psi|d psi> - |<psi|d psi>|^2 ]
//! ```
//!
//! with the symmetric logarithmic derivative `L = 2(|dpsi><psi| + h.c.)`.
//! The classical information of a POVM is `sum_m (d p_m)^2 / p_m`, always
//! bounded by F_q. Fidelity-based estimates use the Bures metric
//! `1 - sqrt(F) = F_q dgamma^2 / 8` and never depend on phase gauges.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{self, BasisDescriptor, HermitianOperator, StateVector};
use crate::perturb::PerturbedLevel;
use crate::tol;

/// How a QFI value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QfiMethod {
    ClosedForm,
    PerturbativeKet,
    FidelityFd,
    ProbabilityFd,
}

impl QfiMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            QfiMethod::ClosedForm => "closed_form",
            QfiMethod::PerturbativeKet => "perturbative_ket",
            QfiMethod::FidelityFd => "fidelity_fd",
            QfiMethod::ProbabilityFd => "probability_fd",
        }
    }
}

/// QFI value (units 1/gamma^2; gamma is dimensionless so the value already
/// carries the model's unit factor) plus convergence metadata.
#[derive(Debug, Clone)]
pub struct QfiResult {
    pub value: f64,
    pub method: QfiMethod,
    /// Finite-difference step, when one was used.
    pub step: Option<f64>,
    /// Basis truncation / grid resolution, when relevant.
    pub truncation: Option<usize>,
    /// Named auxiliary values (cross-checks, alternate forms).
    pub extra: BTreeMap<String, f64>,
}

impl QfiResult {
    pub fn new(value: f64, method: QfiMethod) -> Self {
        assert!(
            value >= tol::QFI_NEGATIVE_FLOOR,
            "QFI must be nonnegative, got {value}"
        );
        QfiResult {
            value: value.max(0.0),
            method,
            step: None,
            truncation: None,
            extra: BTreeMap::new(),
        }
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = Some(step);
        self
    }

    pub fn with_truncation(mut self, truncation: usize) -> Self {
        self.truncation = Some(truncation);
        self
    }

    pub fn with_extra(mut self, key: &str, value: f64) -> Self {
        self.extra.insert(key.to_string(), value);
        self
    }
}

/// A one-parameter family of pure states.
///
/// The evaluator must return a normalized state for every queried gamma and
/// must be safe to call concurrently (it is stateless by contract).
pub struct StateFamily {
    evaluator: Box<dyn Fn(f64) -> StateVector + Send + Sync>,
    derivative: Option<Box<dyn Fn(f64) -> StateVector + Send + Sync>>,
}

impl StateFamily {
    pub fn new(evaluator: impl Fn(f64) -> StateVector + Send + Sync + 'static) -> Self {
        StateFamily {
            evaluator: Box::new(evaluator),
            derivative: None,
        }
    }

    pub fn with_derivative(
        evaluator: impl Fn(f64) -> StateVector + Send + Sync + 'static,
        derivative: impl Fn(f64) -> StateVector + Send + Sync + 'static,
    ) -> Self {
        StateFamily {
            evaluator: Box::new(evaluator),
            derivative: Some(Box::new(derivative)),
        }
    }

    pub fn state_at(&self, gamma: f64) -> StateVector {
        (self.evaluator)(gamma)
    }

    pub fn derivative_at(&self, gamma: f64) -> Option<StateVector> {
        self.derivative.as_ref().map(|d| d(gamma))
    }
}

/// Positive-operator-valued measure.
pub struct Povm {
    effects: Vec<HermitianOperator>,
}

impl Povm {
    /// Validates positivity of each effect and completeness of the set.
    pub fn new(effects: Vec<HermitianOperator>) -> Result<Self> {
        let first = effects
            .first()
            .ok_or_else(|| Error::InvalidPovm("empty effect list".into()))?;
        let basis = first.basis().clone();
        let dim = basis.dim();
        let mut sum = DMatrix::<Complex64>::zeros(dim, dim);
        for e in &effects {
            if e.basis() != &basis {
                return Err(Error::InvalidPovm("effects on mismatched bases".into()));
            }
            let min_ev = e
                .matrix()
                .clone()
                .symmetric_eigen()
                .eigenvalues
                .iter()
                .cloned()
                .fold(f64::INFINITY, f64::min);
            if min_ev < -tol::PSD {
                return Err(Error::InvalidPovm(format!(
                    "effect has negative eigenvalue {min_ev:.3e}"
                )));
            }
            sum += e.matrix();
        }
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                let target = if i == j {
                    Complex64::ONE
                } else {
                    Complex64::ZERO
                };
                worst = worst.max((sum[(i, j)] - target).norm());
            }
        }
        if worst > tol::COMPLETENESS {
            return Err(Error::InvalidPovm(format!(
                "effects sum differs from identity by {worst:.3e}"
            )));
        }
        Ok(Povm { effects })
    }

    /// Projective measurement onto the computational basis.
    pub fn basis_projectors(basis: BasisDescriptor) -> Self {
        let dim = basis.dim();
        let effects = (0..dim)
            .map(|k| {
                let mut m = DMatrix::<Complex64>::zeros(dim, dim);
                m[(k, k)] = Complex64::ONE;
                HermitianOperator::from_matrix(basis.clone(), m).expect("projector is Hermitian")
            })
            .collect();
        Povm { effects }
    }

    /// Two-outcome measurement {|psi><psi|, 1 - |psi><psi|}.
    pub fn state_projector(psi: &StateVector) -> Result<Self> {
        let dim = psi.dim();
        let mut p = DMatrix::<Complex64>::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                p[(i, j)] = psi.amplitudes()[i] * psi.amplitudes()[j].conj();
            }
        }
        let q = DMatrix::<Complex64>::identity(dim, dim) - &p;
        Ok(Povm {
            effects: vec![
                HermitianOperator::from_matrix(psi.basis().clone(), p)?,
                HermitianOperator::from_matrix(psi.basis().clone(), q)?,
            ],
        })
    }

    pub fn effects(&self) -> &[HermitianOperator] {
        &self.effects
    }

    fn probabilities(&self, psi: &StateVector) -> Result<Vec<f64>> {
        self.effects
            .iter()
            .map(|e| {
                let epsi = hilbert::apply(e, psi)?;
                Ok(hilbert::inner(psi, &epsi)?.re)
            })
            .collect()
    }
}

/// Pure-state QFI from the state and its parameter derivative:
/// `4 [ <dpsi|dpsi> - |<psi|dpsi>|^2 ]`.
pub fn qfi_pure(psi: &StateVector, dpsi: &StateVector) -> Result<QfiResult> {
    let dd = hilbert::inner(dpsi, dpsi)?.re;
    let pd = hilbert::inner(psi, dpsi)?;
    Ok(QfiResult::new(
        4.0 * (dd - pd.norm_sqr()),
        QfiMethod::ClosedForm,
    ))
}

/// First-order QFI of a perturbed eigenstate: `4 ||psi1_n||^2`,
/// independent of gamma.
pub fn qfi_perturbative(level: &PerturbedLevel) -> QfiResult {
    QfiResult::new(4.0 * level.ket_norm_sq(), QfiMethod::PerturbativeKet)
        .with_truncation(level.ket_coefficients.len())
}

/// QFI of a superposition evolving under a perturbation that commutes with
/// the unperturbed Hamiltonian: `4 (t/hbar)^2 Var_w(E1)`.
pub fn qfi_commuting_superposition(
    weights: &[f64],
    e1: &[f64],
    t: f64,
    hbar: f64,
) -> Result<QfiResult> {
    if weights.len() != e1.len() {
        return Err(Error::InvalidDistribution(format!(
            "{} weights for {} corrections",
            weights.len(),
            e1.len()
        )));
    }
    if weights.iter().any(|&w| w < 0.0) {
        return Err(Error::InvalidDistribution("negative weight".into()));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidDistribution(format!(
            "weights sum to {total}, expected 1"
        )));
    }
    let mean: f64 = weights.iter().zip(e1).map(|(w, e)| w * e).sum();
    let second: f64 = weights.iter().zip(e1).map(|(w, e)| w * e * e).sum();
    let var = (second - mean * mean).max(0.0);
    Ok(QfiResult::new(
        4.0 * (t / hbar).powi(2) * var,
        QfiMethod::ClosedForm,
    ))
}

/// The optimal two-level preparation: indices of the extremal first-order
/// corrections plus the equal superposition recipe.
#[derive(Debug, Clone)]
pub struct TwoLevelProbe {
    /// Index of the minimal correction.
    pub low: usize,
    /// Index of the maximal correction.
    pub high: usize,
    /// `(|low> + |high>)/sqrt(2)` on a spectral basis of matching dimension.
    pub preparation: StateVector,
}

/// Pick the argmin/argmax of the first-order corrections. Ties break toward
/// the lower index.
pub fn optimal_two_level_probe(e1: &[f64]) -> Result<TwoLevelProbe> {
    if e1.len() < 2 {
        return Err(Error::InvalidParameter("need at least two levels".into()));
    }
    let mut low = 0;
    let mut high = 0;
    for (i, &v) in e1.iter().enumerate() {
        if v < e1[low] {
            low = i;
        }
        if v > e1[high] {
            high = i;
        }
    }
    if e1[low] == e1[high] {
        return Err(Error::NoInformation(
            "all first-order corrections equal; every superposition has zero QFI".into(),
        ));
    }
    let basis = BasisDescriptor::spectral_range(e1.len())?;
    let lo_state = StateVector::basis_state(basis.clone(), low)?;
    let hi_state = StateVector::basis_state(basis, high)?;
    let preparation =
        hilbert::superpose(&[(Complex64::ONE, &lo_state), (Complex64::ONE, &hi_state)])?;
    Ok(TwoLevelProbe {
        low,
        high,
        preparation,
    })
}

/// Pure-state SLD: `L = 2 (|dpsi><psi| + |psi><dpsi|)`.
pub fn sld_pure(psi: &StateVector, dpsi: &StateVector) -> Result<HermitianOperator> {
    if psi.basis() != dpsi.basis() {
        return Err(Error::BasisMismatch("sld_pure".into()));
    }
    let dim = psi.dim();
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let a = dpsi.amplitudes()[i] * psi.amplitudes()[j].conj();
            let b = psi.amplitudes()[i] * dpsi.amplitudes()[j].conj();
            m[(i, j)] = 2.0 * (a + b);
        }
    }
    HermitianOperator::from_matrix(psi.basis().clone(), m)
}

/// Classical Fisher information of a POVM on a family, by central
/// differences of the outcome probabilities.
///
/// Outcomes with `p < 1e-14` are skipped when their derivative is also
/// negligible, and are an error otherwise (the probability vanishes faster
/// than its derivative and the quotient is ill-conditioned).
pub fn cfi(povm: &Povm, family: &StateFamily, gamma: f64, dgamma: f64) -> Result<QfiResult> {
    if dgamma <= 0.0 {
        return Err(Error::InvalidParameter("dgamma must be positive".into()));
    }
    let p0 = povm.probabilities(&family.state_at(gamma))?;
    let pp = povm.probabilities(&family.state_at(gamma + dgamma))?;
    let pm = povm.probabilities(&family.state_at(gamma - dgamma))?;
    let mut total = 0.0;
    for (k, &p) in p0.iter().enumerate() {
        let dp = (pp[k] - pm[k]) / (2.0 * dgamma);
        if p < tol::CFI_PROB_FLOOR {
            if dp.abs() < tol::CFI_DERIV_FLOOR {
                continue;
            }
            return Err(Error::SingularOutcome {
                index: k,
                prob: p,
                derivative: dp,
            });
        }
        total += dp * dp / p;
    }
    Ok(QfiResult::new(total, QfiMethod::ProbabilityFd).with_step(dgamma))
}

/// Pure-state fidelity `|<a|b>|^2`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(hilbert::inner(a, b)?.norm_sqr())
}

/// QFI from the Bures metric: `F_q = 8 (1 - sqrt(F(psi_g, psi_{g+dg}))) / dg^2`
/// refined by Richardson extrapolation on the halving sequence
/// dg, dg/2, dg/4 (first step removes the O(dg) error, second the O(dg^2)).
pub fn qfi_from_fidelity(family: &StateFamily, gamma: f64, dgamma: f64) -> Result<QfiResult> {
    if dgamma <= 0.0 {
        return Err(Error::InvalidParameter("dgamma must be positive".into()));
    }
    let base = family.state_at(gamma);
    let estimate = |h: f64| -> Result<f64> {
        let shifted = family.state_at(gamma + h);
        let f = fidelity(&base, &shifted)?;
        if f > 1.0 + tol::FIDELITY_EXCESS {
            return Err(Error::FidelityInconsistent(f - 1.0));
        }
        let defect = 1.0 - f.min(1.0).sqrt();
        if defect >= tol::FIDELITY_STEP_MAX {
            return Err(Error::FidelityStepTooLarge(defect));
        }
        Ok(8.0 * defect / (h * h))
    };
    let e1 = estimate(dgamma)?;
    let e2 = estimate(dgamma / 2.0)?;
    let e4 = estimate(dgamma / 4.0)?;
    let r1 = 2.0 * e2 - e1;
    let r2 = 2.0 * e4 - e2;
    let value = (4.0 * r2 - r1) / 3.0;
    Ok(QfiResult::new(value.max(0.0), QfiMethod::FidelityFd)
        .with_step(dgamma)
        .with_extra("estimate_coarse", e1)
        .with_extra("estimate_fine", e4))
}

/// Rotate a state's global phase so its largest-magnitude amplitude is real
/// positive. Used before any gauge-sensitive amplitude differencing.
pub fn gauge_fix(state: StateVector) -> StateVector {
    let mut best = Complex64::ZERO;
    let mut best_mag = -1.0;
    for &a in state.amplitudes() {
        let m = a.norm();
        if m > best_mag {
            best_mag = m;
            best = a;
        }
    }
    if best_mag <= 0.0 {
        return state;
    }
    state.scaled(best.conj() / best_mag)
}

/// The three terms of the position-measurement information decomposition of
/// a grid family `psi = exp(i theta) r`:
///
/// ```text
/// F_q = 4||d r||^2 + 4||d theta * r||^2 - 4 (int d theta r^2 dx)^2
/// ```
///
/// The first term alone is the classical information of a position
/// measurement.
#[derive(Debug, Clone)]
pub struct PositionFisherDecomposition {
    pub cfi_position: f64,
    pub phase_norm_term: f64,
    pub phase_mean_term: f64,
}

impl PositionFisherDecomposition {
    /// The decomposition's value for the full QFI.
    pub fn qfi(&self) -> f64 {
        self.cfi_position + self.phase_norm_term - self.phase_mean_term
    }
}

pub fn position_fisher_decomposition(
    family: &StateFamily,
    gamma: f64,
    dgamma: f64,
) -> Result<PositionFisherDecomposition> {
    if dgamma <= 0.0 {
        return Err(Error::InvalidParameter("dgamma must be positive".into()));
    }
    let center = gauge_fix(family.state_at(gamma));
    if !matches!(center.basis(), BasisDescriptor::Grid1d { .. }) {
        return Err(Error::InvalidBasis(
            "position decomposition needs a 1D grid family".into(),
        ));
    }
    let plus = gauge_fix(family.state_at(gamma + dgamma));
    let minus = gauge_fix(family.state_at(gamma - dgamma));

    let mut cfi_position = 0.0;
    let mut phase_norm = 0.0;
    let mut phase_mean = 0.0;
    for i in 0..center.dim() {
        let r0 = center.amplitudes()[i].norm();
        let rp = plus.amplitudes()[i].norm();
        let rm = minus.amplitudes()[i].norm();
        let dr = (rp - rm) / (2.0 * dgamma);
        cfi_position += dr * dr;
        if r0 > tol::PHASE_AMP_FLOOR {
            // principal-value phase difference, no unwrapping needed
            let dtheta =
                (plus.amplitudes()[i] * minus.amplitudes()[i].conj()).arg() / (2.0 * dgamma);
            phase_norm += dtheta * dtheta * r0 * r0;
            phase_mean += dtheta * r0 * r0;
        } else if rp.max(rm) > 1e-6 {
            // phase is needed where the radius vanishes
            return Err(Error::PhaseUndefined(i));
        }
    }
    Ok(PositionFisherDecomposition {
        cfi_position: 4.0 * cfi_position,
        phase_norm_term: 4.0 * phase_norm,
        phase_mean_term: 4.0 * phase_mean * phase_mean,
    })
}
