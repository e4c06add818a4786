//! Quantum probes for minimal-length estimation.
//!
//! A minimal length of the order of the Planck length modifies the momentum
//! of any non-relativistic particle, which to first order adds the universal
//! term `gamma * p^4 / (m * M_P^2 c^2)` to every Hamiltonian. This crate
//! computes the ultimate precision (quantum Fisher information) with which
//! the dimensionless coupling `gamma` can be estimated using simple quantum
//! probes: free Gaussian packets, infinite/finite square wells and harmonic
//! oscillators in one and two dimensions.
//!
//! Layout:
//! - [`hilbert`] — finite states and Hermitian operators on spectral bases
//!   and uniform grids.
//! - [`perturb`] — first-order Rayleigh-Schrödinger perturbation theory,
//!   including degenerate subspaces.
//! - [`metrology`] — QFI, SLD, classical Fisher information and the Bures
//!   fidelity geometry.
//! - [`models`] — the physical systems with their closed-form spectra,
//!   corrections and QFI expressions.
//! - [`oracle`] — brute-force validators: exact diagonalization, exact
//!   evolution and quadrature references for every closed form.
//! - [`checks`] — the cross-validation suite consumed by the CLI and the
//!   acceptance tests.

pub mod checks;
pub mod error;
pub mod hilbert;
pub mod metrology;
pub mod models;
pub mod oracle;
pub mod perturb;
pub mod tol;
pub mod units;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Crate version, stamped into CLI output provenance lines.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
