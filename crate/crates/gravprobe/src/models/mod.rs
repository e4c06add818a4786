//! The physical probe systems.
//!
//! Every model is nondimensionalized internally: spectra are expressed in a
//! natural energy unit of the system (`hbar omega` for the oscillator,
//! `hbar^2 / (2 m a^2)` for the wells) and the universal correction enters
//! through one dimensionless coupling scale per model. Unit systems only
//! touch the boundary through grouped combinations, so SI magnitudes never
//! underflow intermediate products.

pub mod free;
pub mod fsw;
pub mod ho;
pub mod isw;

pub use free::{free_gaussian_qfi, FreeGaussianProbe};
pub use fsw::{fsw_bound_states, fsw_ground_qfi, fsw_problem, FiniteWellProbe, FswSpectrum};
pub use ho::{
    ho2d_qfi, ho2d_weighted_ratio, ho_eigenstate_qfi, ho_perturbed_superposition_qfi,
    ho_static_superposition_qfi, ho_superposition_qfi, HarmonicProbe, Ho2State,
};
pub use isw::{isw_closed_forms, isw_weighted_ratio, isw_weighted_ratio_3d, InfiniteWellProbe};
