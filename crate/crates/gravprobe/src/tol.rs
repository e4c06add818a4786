//! Numerical tolerances shared across the crate.
//!
//! Everything here assumes IEEE 754 double precision. Tolerances that appear
//! in operation contracts (error thresholds, invariant checks) are named
//! constants so tests and the validation suite pin the same numbers as the
//! implementation.

/// Hermiticity check after operator construction: max |A - A^†| relative to
/// the largest element magnitude.
pub const HERMITICITY: f64 = 1e-12;

/// Norm accuracy required after `normalize`.
pub const NORM: f64 = 1e-12;

/// POVM effects must have min eigenvalue >= -PSD.
pub const PSD: f64 = 1e-10;

/// POVM completeness: max |sum of effects - identity|.
pub const COMPLETENESS: f64 = 1e-10;

/// QFI is nonnegative up to floating-point cancellation.
pub const QFI_NEGATIVE_FLOOR: f64 = -1e-9;

/// Outcome probabilities below this are treated as vanishing in CFI sums.
pub const CFI_PROB_FLOOR: f64 = 1e-14;

/// Probability derivatives below this count as negligible when the
/// probability itself vanishes.
pub const CFI_DERIV_FLOOR: f64 = 1e-10;

/// Phase derivatives are taken only where the radial part exceeds this.
pub const PHASE_AMP_FLOOR: f64 = 1e-10;

/// `qfi_from_fidelity` requires 1 - F below this at the requested step.
pub const FIDELITY_STEP_MAX: f64 = 1e-2;

/// Fidelity may exceed 1 by at most this before it is a numerical error.
pub const FIDELITY_EXCESS: f64 = 1e-12;

/// A degenerate partner with |<m|H1|n>| above this means the degenerate
/// subspace was not rotated to the good basis first.
pub const DEGENERATE_COUPLING: f64 = 1e-10;

/// Perturbative-regime guard: |gamma| * ||perturbation ket|| must stay below
/// this for a first-order state to be trusted without a warning.
pub const PERTURBATIVE_GUARD: f64 = 0.1;

/// Relative change allowed under quadrature/grid doubling.
pub const GRID_DOUBLING: f64 = 1e-4;

/// Relative eigenvalue drift allowed under grid doubling in the oracle.
pub const ORACLE_DOUBLING: f64 = 1e-6;
