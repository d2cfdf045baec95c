//! Physical constants (CODATA 2018) and unit conversions.
//!
//! Energies are handled in eV throughout the crate; they only ever enter the
//! band algebra through ratios, so no implicit eV/J conversion happens inside
//! formulas. Everything else is SI.

/// Elementary charge, C (exact since the 2019 SI redefinition).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

/// 1 eV in J (exact).
pub const EV_TO_JOULE: f64 = 1.602_176_634e-19;

/// Default transverse area of the cavity mode, m².
///
/// The mode volume is V = A·L unless set explicitly. This default is an
/// assumption, not a measured quantity: it is chosen so that the reference
/// single-mode micron-cavity configuration lands on the documented coupling
/// scale of ~2.3e17 s⁻². Every report that depends on it prints the value.
pub const DEFAULT_TRANSVERSE_AREA: f64 = 5.7e-8;

/// Physical constants used by the coupling prefactor, overridable for
/// dimensionless studies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Elementary charge, C.
    pub elementary_charge: f64,
    /// Reduced Planck constant, J s.
    pub hbar: f64,
    /// Vacuum permittivity, F/m.
    pub epsilon_0: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            elementary_charge: ELEMENTARY_CHARGE,
            hbar: HBAR,
            epsilon_0: EPSILON_0,
        }
    }
}

impl PhysicalConstants {
    /// Coupling prefactor κ = (eγ/ħ)² = e²/(ε₀ V ħ) in 1/(m² s), where
    /// γ² = ħ/(ε₀ V) and V is the cavity mode volume in m³.
    pub fn coupling_prefactor(&self, mode_volume: f64) -> f64 {
        self.elementary_charge * self.elementary_charge / (self.epsilon_0 * mode_volume * self.hbar)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coupling_prefactor_units() {
        // e²/(ε₀ V ħ) for V = 1 m³
        let k = PhysicalConstants::default().coupling_prefactor(1.0);
        let expected = ELEMENTARY_CHARGE * ELEMENTARY_CHARGE / (EPSILON_0 * HBAR);
        assert!((k - expected).abs() < 1e-20);
        // scales inversely with the volume
        let k2 = PhysicalConstants::default().coupling_prefactor(2.0);
        assert!((k - 2.0 * k2).abs() < 1e-12 * k.abs());
    }
}
