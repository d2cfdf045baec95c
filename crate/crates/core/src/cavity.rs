//! Planar-microcavity geometry and the equal-time photon propagator.

use serde::{Deserialize, Serialize};

use crate::constants::{DEFAULT_TRANSVERSE_AREA, SPEED_OF_LIGHT};
use crate::error::{Error, Result};

/// Geometry of the planar cavity and the two embedded layers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CavityGeometry {
    /// Cavity height L, m.
    pub length: f64,
    /// Position of layer 1, m. Must lie strictly inside (0, L).
    pub z1: f64,
    /// Position of layer 2, m. Must lie strictly inside (0, L).
    pub z2: f64,
    /// Highest transverse mode retained in the propagator sum.
    pub n_max: u32,
    /// Speed of light inside the cavity, m/s.
    pub light_speed: f64,
    /// Cavity mode volume V (the γ² = ħ/(ε₀V) volume), m³.
    pub mode_volume: f64,
}

impl CavityGeometry {
    pub fn new(
        length: f64,
        z1: f64,
        z2: f64,
        n_max: u32,
        light_speed: f64,
        mode_volume: f64,
    ) -> Result<Self> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::Domain(format!(
                "cavity length must be > 0, got {length}"
            )));
        }
        for (name, z) in [("z1", z1), ("z2", z2)] {
            if !(z > 0.0 && z < length) {
                return Err(Error::Domain(format!(
                    "{name} = {z} must lie strictly inside the cavity (0, {length})"
                )));
            }
        }
        if n_max < 1 {
            return Err(Error::Domain("n_max must be >= 1".into()));
        }
        if !(light_speed > 0.0) {
            return Err(Error::Domain(format!(
                "light_speed must be > 0, got {light_speed}"
            )));
        }
        if !(mode_volume > 0.0) {
            return Err(Error::Domain(format!(
                "mode_volume must be > 0, got {mode_volume}"
            )));
        }
        Ok(Self {
            length,
            z1,
            z2,
            n_max,
            light_speed,
            mode_volume,
        })
    }

    /// SI geometry with mode volume defaulted to `DEFAULT_TRANSVERSE_AREA · L`
    /// and the vacuum speed of light.
    pub fn with_default_mode_volume(length: f64, z1: f64, z2: f64, n_max: u32) -> Result<Self> {
        Self::new(
            length,
            z1,
            z2,
            n_max,
            SPEED_OF_LIGHT,
            DEFAULT_TRANSVERSE_AREA * length,
        )
    }

    /// Dimensionless geometry (L = 1, c = 1, V = 1) for normalized-coupling studies.
    pub fn normalized(z1: f64, z2: f64, n_max: u32) -> Result<Self> {
        Self::new(1.0, z1, z2, n_max, 1.0, 1.0)
    }

    /// Mode frequency ω_{n,q} = c·sqrt(q² + (nπ/L)²), rad/s.
    pub fn mode_frequency(&self, n: u32, q: f64) -> f64 {
        let kz = n as f64 * std::f64::consts::PI / self.length;
        self.light_speed * (q * q + kz * kz).sqrt()
    }

    /// Equal-time photon propagator
    /// Δ(zi, zj; q) = Σ_{n=1}^{n_max} sin(nπ zj/L) sin(nπ zi/L) / ω_{n,q},
    /// in seconds. Symmetric in (zi, zj).
    pub fn photon_propagator(&self, zi: f64, zj: f64, q: f64) -> Result<f64> {
        for (name, z) in [("zi", zi), ("zj", zj)] {
            if !(0.0..=self.length).contains(&z) {
                return Err(Error::Domain(format!(
                    "{name} = {z} outside the cavity [0, {}]",
                    self.length
                )));
            }
        }
        if !(q >= 0.0) {
            return Err(Error::Domain(format!(
                "momentum transfer q must be >= 0, got {q}"
            )));
        }
        let mut sum = 0.0;
        for n in 1..=self.n_max {
            let arg = n as f64 * std::f64::consts::PI / self.length;
            sum += (arg * zi).sin() * (arg * zj).sin() / self.mode_frequency(n, q);
        }
        Ok(sum)
    }

    /// Photon flight time |z2 − z1| / c, s.
    pub fn time_of_flight(&self) -> Result<f64> {
        if self.z1 == self.z2 {
            return Err(Error::Domain(
                "time of flight undefined: the two layers coincide (z1 = z2)".into(),
            ));
        }
        Ok((self.z2 - self.z1).abs() / self.light_speed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_cavity(n_max: u32) -> CavityGeometry {
        CavityGeometry::new(1.0, 0.4, 0.6, n_max, 1.0, 1.0).unwrap()
    }

    #[test]
    fn construction_validates_positions() {
        assert!(CavityGeometry::new(1.0, 0.0, 0.5, 1, 1.0, 1.0).is_err());
        assert!(CavityGeometry::new(1.0, 0.5, 1.0, 1, 1.0, 1.0).is_err());
        assert!(CavityGeometry::new(1.0, 1.5, 0.5, 1, 1.0, 1.0).is_err());
        assert!(CavityGeometry::new(1.0, 0.5, 0.5, 1, 1.0, 1.0).is_ok());
        assert!(CavityGeometry::new(1.0, 0.4, 0.6, 0, 1.0, 1.0).is_err());
        assert!(CavityGeometry::new(1.0, 0.4, 0.6, 1, 1.0, 0.0).is_err());
    }

    #[test]
    fn propagator_vanishes_at_the_mirror() {
        let c = unit_cavity(5);
        // exact zero at the near mirror (sin(0) = 0 in floating point)
        assert_eq!(c.photon_propagator(0.0, 0.37, 0.0).unwrap(), 0.0);
        // sin(nπ) only rounds to ~1e-16 at the far mirror
        assert!(c.photon_propagator(1.0, 0.37, 2.0).unwrap().abs() < 1e-15);
    }

    #[test]
    #[allow(clippy::approx_constant)] // 0.31831 is the frozen reference value
    fn single_mode_midpoint_value() {
        // L = 1, c = 1, q = 0, n_max = 1, zi = zj = 0.5: sin²(π/2)/π = 1/π
        let c = unit_cavity(1);
        let v = c.photon_propagator(0.5, 0.5, 0.0).unwrap();
        assert_relative_eq!(v, 1.0 / std::f64::consts::PI, max_relative = 1e-14);
        assert_relative_eq!(v, 0.31831, max_relative = 1e-4);
    }

    #[test]
    fn single_mode_asymmetric_value() {
        // sin(0.4π)·sin(0.6π)/π
        let c = unit_cavity(1);
        let v = c.photon_propagator(0.4, 0.6, 0.0).unwrap();
        let expected = (0.4 * std::f64::consts::PI).sin() * (0.6 * std::f64::consts::PI).sin()
            / std::f64::consts::PI;
        assert_relative_eq!(v, expected, max_relative = 1e-14);
        assert_relative_eq!(v, 0.2879, max_relative = 1e-3);
    }

    #[test]
    fn propagator_is_symmetric_and_incremental() {
        let c = unit_cavity(6);
        let a = c.photon_propagator(0.23, 0.71, 0.4).unwrap();
        let b = c.photon_propagator(0.71, 0.23, 0.4).unwrap();
        assert_eq!(a, b);

        // adding one mode adds exactly the (n_max+1)-th summand
        let c7 = CavityGeometry::new(1.0, 0.4, 0.6, 7, 1.0, 1.0).unwrap();
        let term = (7.0 * std::f64::consts::PI * 0.23).sin()
            * (7.0 * std::f64::consts::PI * 0.71).sin()
            / c7.mode_frequency(7, 0.4);
        let b7 = c7.photon_propagator(0.23, 0.71, 0.4).unwrap();
        assert_relative_eq!(b7, a + term, max_relative = 1e-14);
    }

    #[test]
    fn propagator_decreases_with_q_for_positive_sums() {
        let c = unit_cavity(1);
        let mut prev = c.photon_propagator(0.5, 0.5, 0.0).unwrap();
        for q in [1.0, 5.0, 20.0] {
            let v = c.photon_propagator(0.5, 0.5, q).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn propagator_rejects_out_of_range() {
        let c = unit_cavity(1);
        assert!(c.photon_propagator(-0.1, 0.5, 0.0).is_err());
        assert!(c.photon_propagator(0.5, 1.1, 0.0).is_err());
        assert!(c.photon_propagator(0.5, 0.5, -1.0).is_err());
    }

    #[test]
    fn flight_time_examples() {
        let c = CavityGeometry::new(1.0, 0.3, 0.5, 1, 2.998e8, 1.0).unwrap();
        // |z2 - z1| = 0.2 m at c = 2.998e8 m/s
        assert_relative_eq!(
            c.time_of_flight().unwrap(),
            0.2 / 2.998e8,
            max_relative = 1e-14
        );
        assert_relative_eq!(c.time_of_flight().unwrap(), 6.67e-10, max_relative = 1e-3);

        let micron = CavityGeometry::new(1e-6, 0.4e-6, 0.6e-6, 1, 2.998e8, 1e-18).unwrap();
        assert_relative_eq!(
            micron.time_of_flight().unwrap(),
            6.67e-16,
            max_relative = 1e-3
        );

        let degenerate = CavityGeometry::new(1.0, 0.5, 0.5, 1, 2.998e8, 1.0).unwrap();
        assert!(degenerate.time_of_flight().is_err());
    }
}
