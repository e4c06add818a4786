//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("degenerate superposition: all coefficients vanish")]
    DegenerateSuperposition,

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error(
        "perturbation couples degenerate levels {n} and {partner} \
         (|<m|H1|n>| = {coupling:.3e}); rotate with degenerate_good_basis first"
    )]
    DegenerateCoupling {
        n: usize,
        partner: usize,
        coupling: f64,
    },

    #[error("levels {0:?} are not mutually degenerate")]
    NotDegenerate(Vec<usize>),

    #[error("no information: {0}")]
    NoInformation(String),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error(
        "outcome {index}: probability {prob:.3e} vanishes faster than its \
         derivative {derivative:.3e}"
    )]
    SingularOutcome {
        index: usize,
        prob: f64,
        derivative: f64,
    },

    #[error("phase undefined at grid point {0}: amplitude vanishes where the phase is needed")]
    PhaseUndefined(usize),

    #[error("grid resolution insufficient: {0}")]
    GridResolution(String),

    #[error("spectral truncation insufficient: {0}")]
    Truncation(String),

    #[error("unsupported discretization: {0}")]
    UnsupportedDiscretization(String),

    #[error("unsupported probe state: {0}")]
    UnsupportedProbe(String),

    #[error("fidelity exceeds unity: F - 1 = {0:.3e}")]
    FidelityInconsistent(f64),

    #[error("fidelity step too large: 1 - F = {0:.3e} >= 1e-2")]
    FidelityStepTooLarge(f64),

    #[error("operator is not Hermitian: max |A - A^dagger| = {0:.3e}")]
    NotHermitian(f64),

    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
