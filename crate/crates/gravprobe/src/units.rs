//! Unit systems.
//!
//! All model internals are nondimensionalized; the unit system only enters
//! through a handful of grouped combinations (notably the Planck momentum
//! `M_P c`) evaluated at the boundary, so SI magnitudes never underflow
//! intermediate products.

/// Selects between natural units (everything = 1) and SI values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitMode {
    Natural,
    Si,
}

/// Physical constants plus the probe mass.
///
/// Natural mode forces `hbar = c = planck_mass = probe_mass = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    pub mode: UnitMode,
    /// Reduced Planck constant [J s].
    pub hbar: f64,
    /// Speed of light [m/s].
    pub c: f64,
    /// Planck mass [kg].
    pub planck_mass: f64,
    /// Mass of the probe particle [kg].
    pub probe_mass: f64,
}

/// SI reduced Planck constant [J s].
pub const HBAR_SI: f64 = 1.054e-34;
/// SI speed of light [m/s].
pub const C_SI: f64 = 2.99e8;
/// SI Planck mass [kg].
pub const PLANCK_MASS_SI: f64 = 2.176e-8;
/// Default probe mass [kg], of the order of the hydrogen mass.
pub const PROBE_MASS_SI: f64 = 1e-27;

impl UnitSystem {
    /// hbar = c = M_P = m = 1.
    pub fn natural() -> Self {
        UnitSystem {
            mode: UnitMode::Natural,
            hbar: 1.0,
            c: 1.0,
            planck_mass: 1.0,
            probe_mass: 1.0,
        }
    }

    /// SI constants with the default probe mass of 1e-27 kg.
    pub fn si() -> Self {
        Self::si_with_mass(PROBE_MASS_SI)
    }

    /// SI constants with an explicit probe mass [kg].
    pub fn si_with_mass(probe_mass: f64) -> Self {
        UnitSystem {
            mode: UnitMode::Si,
            hbar: HBAR_SI,
            c: C_SI,
            planck_mass: PLANCK_MASS_SI,
            probe_mass,
        }
    }

    /// Planck momentum `M_P c`.
    pub fn planck_momentum(&self) -> f64 {
        self.planck_mass * self.c
    }

    /// `(M_P c)^2`, the denominator of the universal correction.
    pub fn planck_momentum_sq(&self) -> f64 {
        let p = self.planck_momentum();
        p * p
    }

    pub fn is_natural(&self) -> bool {
        self.mode == UnitMode::Natural
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::natural()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_is_all_ones() {
        let u = UnitSystem::natural();
        assert_eq!(u.hbar, 1.0);
        assert_eq!(u.c, 1.0);
        assert_eq!(u.planck_mass, 1.0);
        assert_eq!(u.probe_mass, 1.0);
        assert_eq!(u.planck_momentum_sq(), 1.0);
    }

    #[test]
    fn si_defaults() {
        let u = UnitSystem::si();
        assert_eq!(u.planck_mass, 2.176e-8);
        assert_eq!(u.hbar, 1.054e-34);
        assert_eq!(u.c, 2.99e8);
        assert_eq!(u.probe_mass, 1e-27);
        // (M_P c)^2 is order 42 kg^2 m^2/s^2 — no underflow anywhere near.
        assert!((u.planck_momentum_sq() - 42.33).abs() < 0.2);
    }
}
