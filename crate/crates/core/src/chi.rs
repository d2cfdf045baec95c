//! Two-band dispersion and the dimensionless band-mixing ratios χ±.

use serde::{Deserialize, Serialize};

use crate::electron::Sign;
use crate::error::{Error, Result};

/// Band energies E± = ±sqrt(ε² + Δ²) of the gapped Dirac cone, eV.
pub fn band_energies(epsilon: f64, delta: f64) -> Result<(f64, f64)> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::Domain(format!("epsilon must be > 0, got {epsilon}")));
    }
    let e = epsilon.hypot(delta);
    Ok((e, -e))
}

/// The ratios χ± = (E± − Δ)/ε, with χ₊χ₋ = −1 and Δχ = χ₊ − χ₋ > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiPair {
    pub chi_plus: f64,
    pub chi_minus: f64,
    pub delta_chi: f64,
}

impl ChiPair {
    /// Build from the kinetic scale ε and mass term Δ (both eV).
    ///
    /// χ₊ and χ₋ are evaluated through the rationalized form
    /// (E∓ ± Δ resolved against ε²) so that χ₊χ₋ = −1 holds to machine
    /// precision even for |Δ| ≫ ε.
    pub fn new(epsilon: f64, delta: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::Domain(format!(
                "chi ratios singular: epsilon must be > 0, got {epsilon}"
            )));
        }
        if !delta.is_finite() {
            return Err(Error::Domain(format!(
                "mass term must be finite, got {delta}"
            )));
        }
        let s = epsilon.hypot(delta);
        let (chi_plus, chi_minus) = if delta >= 0.0 {
            let x = s + delta; // no cancellation for Δ ≥ 0
            (epsilon / x, -x / epsilon)
        } else {
            let x = s - delta;
            (x / epsilon, -epsilon / x)
        };
        Ok(Self {
            chi_plus,
            chi_minus,
            delta_chi: chi_plus - chi_minus,
        })
    }

    /// χ indexed by band: χ_{+} for `Sign::Plus`, χ_{−} for `Sign::Minus`.
    pub fn by_band(&self, band: Sign) -> f64 {
        match band {
            Sign::Plus => self.chi_plus,
            Sign::Minus => self.chi_minus,
        }
    }

    /// Relative residuals of the five algebraic identities tying χ₊, χ₋ and
    /// Δχ together:
    /// (a) χ₋(1+χ₊²) = −χ₊(1+χ₋²)
    /// (b) χ₊χ₋ = −1
    /// (c) χ₊/χ₋ = −χ₊²
    /// (d) χ₋(1+χ₊²) = −Δχ
    /// (e) χ₋² = 1/χ₊² = −χ₋/χ₊ = (1+χ₋²)/(1+χ₊²)
    pub fn identity_residuals(&self) -> [f64; 5] {
        let (cp, cm, dc) = (self.chi_plus, self.chi_minus, self.delta_chi);
        let rel = |lhs: f64, rhs: f64| {
            let scale = lhs.abs().max(rhs.abs()).max(1e-300);
            (lhs - rhs).abs() / scale
        };
        let a = rel(cm * (1.0 + cp * cp), -cp * (1.0 + cm * cm));
        let b = rel(cp * cm, -1.0);
        let c = rel(cp / cm, -cp * cp);
        let d = rel(cm * (1.0 + cp * cp), -dc);
        let e = [
            rel(cm * cm, 1.0 / (cp * cp)),
            rel(cm * cm, -cm / cp),
            rel(cm * cm, (1.0 + cm * cm) / (1.0 + cp * cp)),
        ]
        .into_iter()
        .fold(0.0f64, f64::max);
        [a, b, c, d, e]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn band_energy_examples() {
        assert_eq!(band_energies(1.0, 0.0).unwrap(), (1.0, -1.0));
        // 3-4-5 triple
        assert_eq!(band_energies(3.0, 4.0).unwrap(), (5.0, -5.0));
        let (ep, em) = band_energies(1.0, 1.0).unwrap();
        assert_relative_eq!(ep, std::f64::consts::SQRT_2, max_relative = 1e-15);
        assert_relative_eq!(em, -std::f64::consts::SQRT_2, max_relative = 1e-15);
        assert!(band_energies(0.0, 1.0).is_err());
        assert!(band_energies(-1.0, 1.0).is_err());
    }

    #[test]
    fn chi_examples() {
        let gapless = ChiPair::new(1.0, 0.0).unwrap();
        assert_eq!(gapless.chi_plus, 1.0);
        assert_eq!(gapless.chi_minus, -1.0);
        assert_eq!(gapless.delta_chi, 2.0);

        // E± = ±5: χ₊ = 1/3, χ₋ = −3, Δχ = 10/3
        let c = ChiPair::new(3.0, 4.0).unwrap();
        assert_relative_eq!(c.chi_plus, 1.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(c.chi_minus, -3.0, max_relative = 1e-15);
        assert_relative_eq!(c.delta_chi, 10.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(c.chi_plus * c.chi_minus, -1.0, max_relative = 1e-15);

        // Δ = ε: χ₊ = √2 − 1, χ₋ = −(√2 + 1), Δχ = 2√2
        let c = ChiPair::new(1.0, 1.0).unwrap();
        assert_relative_eq!(
            c.chi_plus,
            std::f64::consts::SQRT_2 - 1.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            c.chi_minus,
            -(std::f64::consts::SQRT_2 + 1.0),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            c.delta_chi,
            2.0 * std::f64::consts::SQRT_2,
            max_relative = 1e-14
        );

        assert!(ChiPair::new(0.0, 1.0).is_err());
    }

    #[test]
    fn identities_hold_in_extreme_regimes() {
        for (eps, delta) in [
            (1e-6, 10.0),
            (10.0, 1e-9),
            (1e-6, 0.0),
            (5.0, -8.0),
            (1e-3, -1e-6),
        ] {
            let c = ChiPair::new(eps, delta).unwrap();
            for (k, r) in c.identity_residuals().iter().enumerate() {
                assert!(
                    *r < 1e-12,
                    "identity {k} residual {r} at eps={eps}, delta={delta}"
                );
            }
        }
    }

    proptest! {
        #[test]
        fn identities_hold_over_random_inputs(
            log_eps in -6.0f64..1.0,
            delta in 0.0f64..10.0,
        ) {
            let c = ChiPair::new(10f64.powf(log_eps), delta).unwrap();
            prop_assert!(c.delta_chi > 0.0);
            for r in c.identity_residuals() {
                prop_assert!(r < 1e-10);
            }
        }
    }
}
