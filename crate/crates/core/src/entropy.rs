//! Entanglement entropy of the reduced single-layer states: exact value,
//! short-time expansions, growth rate, interlayer asymmetry and mutual
//! information. Natural logarithm (nats) throughout; use
//! [`EntropyReport::in_bits`] for base 2.

use serde::{Deserialize, Serialize};

use crate::cavity::CavityGeometry;
use crate::constants::PhysicalConstants;
use crate::density::{
    compute_coefficients_momenta, reduced_from_coefficients, DensityMatrix, LayerConfig,
    PropagatorMomenta, RhoCoefficients,
};
use crate::error::{Error, Result};

/// x·ln(x) with the x → 0 limit value 0.
fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Eigenvalues of a 2×2 Hermitian matrix, ascending.
fn eigenvalues_2x2(rho: &DensityMatrix) -> Result<(f64, f64)> {
    if rho.dim() != 2 {
        return Err(Error::InvalidState(format!(
            "expected a 2x2 state, got {}x{}",
            rho.dim(),
            rho.dim()
        )));
    }
    let m = rho.entries();
    let a = m[(0, 0)].re;
    let c = m[(1, 1)].re;
    let mid = 0.5 * (a + c);
    let rad = (0.25 * (a - c) * (a - c) + m[(0, 1)].norm_sqr()).sqrt();
    Ok((mid - rad, mid + rad))
}

const PROBABILITY_CLAMP: f64 = 1e-10;

fn clamp_probability(p: f64) -> Result<f64> {
    if p < -PROBABILITY_CLAMP || p > 1.0 + PROBABILITY_CLAMP {
        return Err(Error::InvalidState(format!(
            "eigenvalue {p} outside [0, 1] beyond tolerance"
        )));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Von Neumann entropy −Σ p ln p of a 2×2 density matrix, nats.
///
/// Eigenvalues within 1e-10 of the [0, 1] boundary are clamped; anything
/// further out is an invalid state.
pub fn entropy_exact(rho2: &DensityMatrix) -> Result<f64> {
    let (lo, hi) = eigenvalues_2x2(rho2)?;
    let lo = clamp_probability(lo)?;
    let hi = clamp_probability(hi)?;
    // + 0.0 normalizes the negative zero of the pure-state case
    Ok(-xlnx(lo) - xlnx(hi) + 0.0)
}

/// Entropy of the closed-form reduced state with populations (1 − t²l, t²l)
/// and coherence t²b, evaluated from the exact eigenvalues
/// p± = ½[1 ± sqrt((1 − 2t²l)² + 4t⁴b²)].
pub fn entropy_exact_from_rates(t: f64, l: f64, b: f64) -> Result<f64> {
    let rho = closed_form_reduced(t, l, b)?;
    entropy_exact(&rho)
}

fn closed_form_reduced(t: f64, l: f64, b: f64) -> Result<DensityMatrix> {
    use nalgebra::DMatrix;
    use num_complex::Complex64;
    let t2 = t * t;
    let m = DMatrix::<Complex64>::from_row_slice(
        2,
        2,
        &[
            Complex64::new(1.0 - t2 * l, 0.0),
            Complex64::new(t2 * b, 0.0),
            Complex64::new(t2 * b, 0.0),
            Complex64::new(t2 * l, 0.0),
        ],
    );
    DensityMatrix::new(m)
}

/// Short-time entropy truncations, nats:
/// leading term x(1 − ln x) with x = t²l, and the printed t⁴-corrected form
/// x(1 − ln x) + t⁴(l²/2 + b² ln x).
///
/// Both truncations are returned exactly as printed in the source material;
/// the t⁴ population term overshoots the exact remainder (its sign is
/// opposite to the true x²/2 deficit), which the cross-checks report.
pub fn entropy_expansion(t: f64, l: f64, b: f64) -> Result<(f64, f64)> {
    if t == 0.0 {
        return Ok((0.0, 0.0));
    }
    if !(t > 0.0) {
        return Err(Error::Domain(format!("time must be >= 0, got {t}")));
    }
    let x = t * t * l;
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain(format!(
            "expansion requires t^2 l in (0, 1), got {x}"
        )));
    }
    let leading = x * (1.0 - x.ln());
    let with_coherence = leading + t.powi(4) * (l * l / 2.0 + b * b * x.ln());
    Ok((leading, with_coherence))
}

/// Printed instantaneous entropy rate Γ = 2tl[1 − ln(t²l)], 1/s.
///
/// This is not the derivative of the leading expansion: d/dt of x(1 − ln x)
/// is −2tl·ln(t²l), smaller by exactly 2tl. Both are exposed; see
/// [`entropy_rate_of_expansion`].
pub fn entropy_rate(t: f64, l: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!(
            "rate diverges logarithmically at t = 0 (t = {t})"
        )));
    }
    let x = t * t * l;
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain(format!(
            "rate requires t^2 l in (0, 1), got {x}"
        )));
    }
    Ok(2.0 * t * l * (1.0 - x.ln()))
}

/// Analytic derivative of the leading entropy expansion: −2tl·ln(t²l).
pub fn entropy_rate_of_expansion(t: f64, l: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!(
            "rate diverges logarithmically at t = 0 (t = {t})"
        )));
    }
    let x = t * t * l;
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain(format!(
            "rate requires t^2 l in (0, 1), got {x}"
        )));
    }
    Ok(-2.0 * t * l * x.ln())
}

/// Numerical dS/dt of the exact entropy of the closed-form reduced state,
/// central difference with a relative step.
pub fn entropy_rate_numeric(t: f64, l: f64, b: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!(
            "need t > 0 for the numeric rate, got {t}"
        )));
    }
    let h = t * 1e-6;
    let fp = entropy_exact_from_rates(t + h, l, b)?;
    let fm = entropy_exact_from_rates(t - h, l, b)?;
    Ok((fp - fm) / (2.0 * h))
}

/// Mutual information at leading perturbative order: I₁₂ = S₁ + S₂.
pub fn mutual_information(s1: f64, s2: f64) -> Result<f64> {
    if s1 < 0.0 || s2 < 0.0 {
        return Err(Error::Domain(format!(
            "entropies must be >= 0, got {s1}, {s2}"
        )));
    }
    Ok(s1 + s2)
}

/// Entropy imbalance between the layers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymmetryReport {
    /// Leading-order ΔS ≃ 2t²[(v₁²Δ₁₁ − v₂²Δ₂₂)](eγ/ħ)², nats. This drops
    /// the logarithmic factors, so only its sign is quantitative.
    pub leading: f64,
    /// Exact S₁ − S₂ from the closed-form reduced states, nats.
    pub exact_difference: f64,
}

/// Leading-order and exact entropy asymmetry between the two layers.
pub fn entropy_asymmetry(
    layer1: &LayerConfig,
    layer2: &LayerConfig,
    cavity: &CavityGeometry,
    t: f64,
    momenta: &PropagatorMomenta,
) -> Result<AsymmetryReport> {
    let constants = PhysicalConstants::default();
    let coeffs = compute_coefficients_momenta(layer1, layer2, cavity, momenta, &constants)?;
    entropy_asymmetry_from_coefficients(layer1, layer2, cavity, &coeffs, t, momenta)
}

/// Asymmetry computed against an existing coefficient set (any coupling mode:
/// ζ = κ v₁ v₂ in both, so κ is recovered from the stored prefactor).
pub fn entropy_asymmetry_from_coefficients(
    layer1: &LayerConfig,
    layer2: &LayerConfig,
    cavity: &CavityGeometry,
    coeffs: &RhoCoefficients,
    t: f64,
    momenta: &PropagatorMomenta,
) -> Result<AsymmetryReport> {
    let d11 = cavity.photon_propagator(layer1.position, layer1.position, momenta.q11)?;
    let d22 = cavity.photon_propagator(layer2.position, layer2.position, momenta.q22)?;
    let v1 = layer1.material.fermi_velocity;
    let v2 = layer2.material.fermi_velocity;
    let kappa = coeffs.zeta / (v1 * v2);
    let leading = 2.0 * t * t * (v1 * v1 * d11 - v2 * v2 * d22) * kappa;
    let s1 = entropy_exact(&reduced_from_coefficients(coeffs, t, 1, true)?)?;
    let s2 = entropy_exact(&reduced_from_coefficients(coeffs, t, 2, true)?)?;
    Ok(AsymmetryReport {
        leading,
        exact_difference: s1 - s2,
    })
}

/// Entropy figures for one reduced layer state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    /// Exact von Neumann entropy, nats.
    pub exact: f64,
    /// Leading short-time truncation x(1 − ln x), nats.
    pub expansion_leading: f64,
    /// Printed t⁴-corrected truncation, nats.
    pub expansion_with_coherence: f64,
    /// Printed entropy growth rate, 1/s.
    pub rate: f64,
    /// Eigenvalues (p₋, p₊) of the reduced state.
    pub eigenvalues: (f64, f64),
}

impl EntropyReport {
    /// The same report with entropic quantities converted to bits.
    pub fn in_bits(&self) -> EntropyReport {
        let ln2 = std::f64::consts::LN_2;
        EntropyReport {
            exact: self.exact / ln2,
            expansion_leading: self.expansion_leading / ln2,
            expansion_with_coherence: self.expansion_with_coherence / ln2,
            rate: self.rate / ln2,
            eigenvalues: self.eigenvalues,
        }
    }
}

/// Entropy report for layer `keep` of the coefficient set at time t.
pub fn entropy_report(coeffs: &RhoCoefficients, t: f64, keep: u8) -> Result<EntropyReport> {
    let (l, b) = match keep {
        1 => (coeffs.l1, coeffs.b1),
        2 => (coeffs.l2, coeffs.b2),
        other => return Err(Error::Domain(format!("keep must be 1 or 2, got {other}"))),
    };
    let rho = reduced_from_coefficients(coeffs, t, keep, true)?;
    let exact = entropy_exact(&rho)?;
    let (leading, with_coherence) = if t == 0.0 {
        (0.0, 0.0)
    } else {
        entropy_expansion(t, l, b)?
    };
    let rate = if t == 0.0 { 0.0 } else { entropy_rate(t, l)? };
    let (p_minus, p_plus) = eigenvalues_2x2(&rho)?;
    Ok(EntropyReport {
        exact,
        expansion_leading: leading,
        expansion_with_coherence: with_coherence,
        rate,
        eigenvalues: (p_minus.clamp(0.0, 1.0), p_plus.clamp(0.0, 1.0)),
    })
}
