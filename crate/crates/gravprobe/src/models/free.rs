//! Free Gaussian wave packet.
//!
//! Momentum eigenstates diagonalize both the kinetic term and p^4, so only
//! evolving wave packets carry information on the coupling. For a Gaussian
//! packet of mean p0 and width sigma the QFI at time t is
//!
//! ```text
//! F_q = 32 t^2 sigma^2 / (hbar^2 m^2 (M_P c)^4)
//!       * [ 2 p0^6 + 21 p0^4 s^2 + 48 p0^2 s^4 + 12 s^6 ]
//! ```
//!
//! equivalently a polynomial in the packet energy h0 = (p0^2 + sigma^2)/2m.

use crate::error::{Error, Result};
use crate::metrology::{QfiMethod, QfiResult};
use crate::units::UnitSystem;

#[derive(Debug, Clone, Copy)]
pub struct FreeGaussianProbe {
    /// Mean momentum.
    pub p0: f64,
    /// Momentum-space width.
    pub sigma: f64,
    /// Evolution time.
    pub t: f64,
    pub units: UnitSystem,
}

impl FreeGaussianProbe {
    pub fn new(p0: f64, sigma: f64, t: f64, units: UnitSystem) -> Result<Self> {
        if sigma <= 0.0 {
            return Err(Error::InvalidParameter(format!("sigma = {sigma} <= 0")));
        }
        let probe = FreeGaussianProbe {
            p0,
            sigma,
            t,
            units,
        };
        // sigma <= sqrt(2 m h0) holds identically since 2 m h0 = p0^2 + sigma^2
        debug_assert!(
            probe.sigma <= (2.0 * units.probe_mass * probe.mean_energy()).sqrt() * (1.0 + 1e-12)
        );
        Ok(probe)
    }

    /// Packet energy h0 = <H0> = (p0^2 + sigma^2) / 2m.
    pub fn mean_energy(&self) -> f64 {
        (self.p0 * self.p0 + self.sigma * self.sigma) / (2.0 * self.units.probe_mass)
    }
}

/// Closed-form QFI of the evolved Gaussian packet. The metadata records the
/// equivalent h0-form value (`extra["h0_form"]`).
pub fn free_gaussian_qfi(probe: &FreeGaussianProbe) -> QfiResult {
    let u = &probe.units;
    let (p0, s, t) = (probe.p0, probe.sigma, probe.t);
    // grouped prefactor: 32 t^2 s^2 / (hbar^2 m^2 (M_P c)^4), assembled as
    // squared ratios to stay in range for SI magnitudes
    let ratio = t * s / (u.hbar * u.probe_mass * u.planck_momentum_sq());
    let prefactor = 32.0 * ratio * ratio;

    let p2 = p0 * p0;
    let s2 = s * s;
    let momentum_poly =
        2.0 * p2 * p2 * p2 + 21.0 * p2 * p2 * s2 + 48.0 * p2 * s2 * s2 + 12.0 * s2 * s2 * s2;

    // same value written in terms of y = h0 m = (p0^2 + sigma^2)/2
    let y = (p2 + s2) / 2.0;
    let h0_poly = 16.0 * y * y * y + 60.0 * y * y * s2 + 24.0 * y * s2 * s2 - 17.0 * s2 * s2 * s2;

    QfiResult::new(prefactor * momentum_poly, QfiMethod::ClosedForm)
        .with_extra("h0_form", prefactor * h0_poly)
        .with_extra("mean_energy", probe.mean_energy())
}
