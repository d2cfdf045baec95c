//! Electronic state of one layer: kinetic scale, momentum azimuth and the
//! three ±1 quantum numbers (spin, valley, band).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::material::Material;

/// A ±1 index (spin s, valley η or band ν).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// Parse an integer ±1.
    pub fn from_int(v: i64) -> Result<Sign> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(Error::Domain(format!(
                "index must be +1 or -1, got {other}"
            ))),
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sign::Plus => write!(f, "+1"),
            Sign::Minus => write!(f, "-1"),
        }
    }
}

/// State of a single electron in one layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElectronState {
    /// Kinetic scale ε = ħ v_f |k|, eV. Strictly positive.
    pub energy: f64,
    /// Momentum azimuth φ_k, radians.
    pub angle: f64,
    /// Spin index s.
    pub spin: Sign,
    /// Valley index η.
    pub valley: Sign,
    /// Band index ν of the initially occupied band.
    pub band: Sign,
}

impl ElectronState {
    pub fn new(energy: f64, angle: f64, spin: Sign, valley: Sign, band: Sign) -> Result<Self> {
        if !(energy > 0.0) || !energy.is_finite() {
            return Err(Error::Domain(format!(
                "electron energy must be > 0, got {energy}"
            )));
        }
        if !angle.is_finite() {
            return Err(Error::Domain(format!(
                "electron angle must be finite, got {angle}"
            )));
        }
        Ok(Self {
            energy,
            angle,
            spin,
            valley,
            band,
        })
    }

    /// Conduction-band state with both discrete indices +1.
    pub fn conduction(energy: f64, angle: f64) -> Result<Self> {
        Self::new(energy, angle, Sign::Plus, Sign::Plus, Sign::Plus)
    }

    /// Mass term Δ = η·s·λ_so, eV. Derived, never stored.
    pub fn mass_term(&self, material: &Material) -> f64 {
        self.valley.value() * self.spin.value() * material.soi_strength
    }
}
