//! Second-order density matrices: coefficient assembly, the 4×4 total matrix,
//! partial traces and purity.
//!
//! Basis ordering of the 4×4 matrix is fixed as
//! (|+,+⟩, |+,−⟩, |−,+⟩, |−,−⟩) with the first slot belonging to layer 1.
//! For electrons prepared in bands (ν₁, ν₂) the populated diagonal entry is
//! the (ν₁, ν₂) slot; the remaining coefficients occupy the slots reached by
//! flipping one or both bands.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cavity::CavityGeometry;
use crate::chi::ChiPair;
use crate::constants::PhysicalConstants;
use crate::electron::{ElectronState, Sign};
use crate::error::{Error, Result};
use crate::material::Material;

type C64 = Complex64;

/// One layer: material, electron state and position inside the cavity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerConfig {
    pub material: Material,
    pub electron: ElectronState,
    /// Layer position, m (same units as the cavity geometry).
    pub position: f64,
}

impl LayerConfig {
    pub fn new(material: Material, electron: ElectronState, position: f64) -> Self {
        Self {
            material,
            electron,
            position,
        }
    }

    /// χ ratios of this layer's gapped cone.
    pub fn chi(&self) -> Result<ChiPair> {
        ChiPair::new(
            self.electron.energy,
            self.electron.mass_term(&self.material),
        )
    }
}

/// Momentum transfer entering each propagator, 1/m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagatorMomenta {
    pub q11: f64,
    pub q22: f64,
    pub q12: f64,
}

impl PropagatorMomenta {
    pub fn uniform(q: f64) -> Self {
        Self {
            q11: q,
            q22: q,
            q12: q,
        }
    }
}

impl Default for PropagatorMomenta {
    fn default() -> Self {
        Self::uniform(0.0)
    }
}

/// The scalars that fully determine ρ(t): populations 𝓛ᵢ, local coherences
/// 𝓑ᵢ, and the interlayer coherences 𝓝 (exchange) and 𝓜 (double flip).
/// All carry units of 1/s² in SI runs; in normalized runs (ζ = 1) everything
/// is dimensionless.
///
/// Sign convention: the coefficients are stored exactly as they appear in the
/// operator-algebra assembly of ρ(t), so the closed-form matrix and the
/// brute-force construction agree entrywise. For conduction-band electrons
/// the local coherence equals minus the commonly printed variant; its
/// magnitude, and every entanglement measure, are unchanged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoCoefficients {
    /// Population rate² of layer 1.
    pub l1: f64,
    /// Population rate² of layer 2.
    pub l2: f64,
    /// Local coherence rate² of layer 1.
    pub b1: f64,
    /// Local coherence rate² of layer 2.
    pub b2: f64,
    /// Interlayer exchange coherence 𝓝.
    pub n_coef: C64,
    /// Interlayer double-flip coherence 𝓜.
    pub m_coef: C64,
    /// Coupling prefactor ζ = (eγ)² v₁ v₂ / ħ².
    pub zeta: f64,
    /// Band index the layer-1 electron started in.
    pub band1: Sign,
    /// Band index the layer-2 electron started in.
    pub band2: Sign,
}

impl RhoCoefficients {
    /// Largest population coefficient, used by the admissibility guard.
    pub fn max_population(&self) -> f64 {
        self.l1.max(self.l2)
    }

    /// Whether |𝓝| ≤ sqrt(𝓛₁𝓛₂), the condition under which the closed-form
    /// concurrence simplification equals the spin-flip oracle. Guaranteed
    /// whenever all three propagators share one momentum transfer (the
    /// propagator matrix is then a Gram matrix); independently chosen
    /// momenta, or hand-built coefficients, may violate it, in which case
    /// the numeric oracle is authoritative.
    pub fn exchange_dominated(&self) -> bool {
        self.n_coef.norm() <= (self.l1 * self.l2).sqrt() * (1.0 + 1e-12) + 1e-300
    }
}

fn layer_inputs(layer: &LayerConfig) -> Result<(ChiPair, f64, f64, Sign)> {
    let chi = layer.chi()?;
    Ok((
        chi,
        layer.material.fermi_velocity,
        layer.electron.angle,
        layer.electron.band,
    ))
}

fn coefficients_with_prefactor(
    layer1: &LayerConfig,
    layer2: &LayerConfig,
    cavity: &CavityGeometry,
    momenta: &PropagatorMomenta,
    kappa: f64,
) -> Result<RhoCoefficients> {
    let (chi1, v1, phi1, nu1) = layer_inputs(layer1)?;
    let (chi2, v2, phi2, nu2) = layer_inputs(layer2)?;

    let d11 = cavity.photon_propagator(layer1.position, layer1.position, momenta.q11)?;
    let d22 = cavity.photon_propagator(layer2.position, layer2.position, momenta.q22)?;
    let d12 = cavity.photon_propagator(layer1.position, layer2.position, momenta.q12)?;

    let pop = |chi: &ChiPair, v: f64, d: f64| {
        kappa * d * v * v * (1.0 - 2.0 / (chi.delta_chi * chi.delta_chi))
    };
    let coh = |chi: &ChiPair, v: f64, d: f64, nu: Sign| {
        nu.value() * kappa * d * v * v * (chi.chi_plus + chi.chi_minus)
            / (chi.delta_chi * chi.delta_chi)
    };

    let dphi = phi1 - phi2;
    let plus_phase = C64::from_polar(1.0, dphi);
    let minus_phase = C64::from_polar(1.0, -dphi);
    let cross = kappa * v1 * v2 * d12 / (chi1.delta_chi * chi2.delta_chi);
    let n_coef = cross
        * (minus_phase * (chi1.by_band(nu1.flip()) * chi2.by_band(nu2.flip()))
            + plus_phase * (chi1.by_band(nu1) * chi2.by_band(nu2)));
    let m_coef = -cross
        * (plus_phase * (chi1.by_band(nu1) * chi2.by_band(nu2.flip()))
            + minus_phase * (chi1.by_band(nu1.flip()) * chi2.by_band(nu2)));

    Ok(RhoCoefficients {
        l1: pop(&chi1, v1, d11),
        l2: pop(&chi2, v2, d22),
        b1: coh(&chi1, v1, d11, nu1),
        b2: coh(&chi2, v2, d22, nu2),
        n_coef,
        m_coef,
        zeta: kappa * v1 * v2,
        band1: nu1,
        band2: nu2,
    })
}

/// Coefficients with the physical coupling κ = e²/(ε₀ V ħ) from the cavity
/// mode volume; all propagators share the momentum transfer `q`.
pub fn compute_coefficients(
    layer1: &LayerConfig,
    layer2: &LayerConfig,
    cavity: &CavityGeometry,
    q: f64,
) -> Result<RhoCoefficients> {
    compute_coefficients_momenta(
        layer1,
        layer2,
        cavity,
        &PropagatorMomenta::uniform(q),
        &PhysicalConstants::default(),
    )
}

/// Coefficients with independently chosen momentum transfers and constants.
pub fn compute_coefficients_momenta(
    layer1: &LayerConfig,
    layer2: &LayerConfig,
    cavity: &CavityGeometry,
    momenta: &PropagatorMomenta,
    constants: &PhysicalConstants,
) -> Result<RhoCoefficients> {
    let kappa = constants.coupling_prefactor(cavity.mode_volume);
    coefficients_with_prefactor(layer1, layer2, cavity, momenta, kappa)
}

/// Coefficients in normalized mode: the coupling is fixed at ζ = 1 instead of
/// being derived from the (often unknown) mode volume. Figure shapes survive;
/// absolute rates do not. Geometry should be dimensionless (L = c = 1).
pub fn compute_coefficients_normalized(
    layer1: &LayerConfig,
    layer2: &LayerConfig,
    cavity: &CavityGeometry,
    momenta: &PropagatorMomenta,
) -> Result<RhoCoefficients> {
    let kappa = 1.0 / (layer1.material.fermi_velocity * layer2.material.fermi_velocity);
    coefficients_with_prefactor(layer1, layer2, cavity, momenta, kappa)
}

/// Admissibility of an evolution time against the second-order regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Admissibility {
    /// t²·max(𝓛₁,𝓛₂) < 0.5.
    Ok,
    /// 0.5 ≤ t²·max(𝓛₁,𝓛₂) ≤ 1: the state is still positive but the
    /// truncation error is no longer small.
    Marginal,
    /// t²·max(𝓛₁,𝓛₂) > 1.
    Inadmissible,
}

/// Classify an evolution time.
pub fn admissibility(coeffs: &RhoCoefficients, t: f64) -> Admissibility {
    let t2l = t * t * coeffs.max_population();
    if t2l > 1.0 {
        Admissibility::Inadmissible
    } else if t2l >= 0.5 {
        Admissibility::Marginal
    } else {
        Admissibility::Ok
    }
}

/// Dense complex Hermitian unit-trace matrix of dimension 2 or 4.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validate and wrap a matrix: square of dimension 2 or 4, Hermitian and
    /// unit trace within 1e-12.
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        let (r, c) = entries.shape();
        if r != c || (r != 2 && r != 4) {
            return Err(Error::InvalidState(format!(
                "expected a 2x2 or 4x4 matrix, got {r}x{c}"
            )));
        }
        let herm = (&entries - entries.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if herm > 1e-12 {
            return Err(Error::InvalidState(format!(
                "matrix not Hermitian: residual {herm:.3e}"
            )));
        }
        let trace = entries.trace();
        if (trace - C64::new(1.0, 0.0)).norm() > 1e-12 {
            return Err(Error::InvalidState(format!("trace must be 1, got {trace}")));
        }
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    /// Eigenvalues of the (Hermitian) matrix, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .entries
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
        ev
    }

    /// Product state |ν₁, ν₂⟩⟨ν₁, ν₂| in the fixed basis ordering.
    pub fn product_state(nu1: Sign, nu2: Sign) -> Self {
        let mut m = DMatrix::<C64>::zeros(4, 4);
        let idx = basis_index(nu1, nu2);
        m[(idx, idx)] = C64::new(1.0, 0.0);
        Self { entries: m }
    }

    /// Maximally mixed state 1/d.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim != 2 && dim != 4 {
            return Err(Error::InvalidState(format!(
                "dimension must be 2 or 4, got {dim}"
            )));
        }
        let m = DMatrix::<C64>::identity(dim, dim) / C64::new(dim as f64, 0.0);
        Ok(Self { entries: m })
    }

    /// The maximally entangled state (|+,+⟩ + |−,−⟩)(⟨+,+| + ⟨−,−|)/2.
    pub fn bell_pair() -> Self {
        let mut m = DMatrix::<C64>::zeros(4, 4);
        let h = C64::new(0.5, 0.0);
        m[(0, 0)] = h;
        m[(0, 3)] = h;
        m[(3, 0)] = h;
        m[(3, 3)] = h;
        Self { entries: m }
    }

    /// Serializable record: dimension, row-major [re, im] entries and the
    /// parameters that generated the matrix.
    pub fn record(&self, params: serde_json::Value) -> DensityMatrixRecord {
        DensityMatrixRecord {
            dim: self.dim(),
            entries: self
                .entries
                .transpose()
                .iter()
                .map(|z| [z.re, z.im])
                .collect(),
            params,
        }
    }
}

/// Index of |ν₁, ν₂⟩ in the fixed ordering (|+,+⟩, |+,−⟩, |−,+⟩, |−,−⟩).
pub fn basis_index(nu1: Sign, nu2: Sign) -> usize {
    let a = if nu1 == Sign::Plus { 0 } else { 1 };
    let b = if nu2 == Sign::Plus { 0 } else { 1 };
    2 * a + b
}

/// JSON-facing form of a density matrix: row-major complex entries as
/// [re, im] pairs plus the generating parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityMatrixRecord {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
    pub params: serde_json::Value,
}

/// The 4×4 density matrix at time t assembled from the coefficients.
///
/// For electrons prepared in (ν₁, ν₂) = (+, +) this is, with the stored sign
/// convention,
///
/// ```text
///        ⎛ 1−t²𝓛₁−t²𝓛₂   t²𝓑₂    t²𝓑₁    t²𝓜* ⎞
///   ρ =  ⎜    t²𝓑₂       t²𝓛₂    t²𝓝*     0   ⎟
///        ⎜    t²𝓑₁       t²𝓝     t²𝓛₁     0   ⎟
///        ⎝    t²𝓜         0       0       0   ⎠
/// ```
///
/// The doubly-flipped diagonal entry is exactly zero: second order cannot
/// de-excite both layers.
///
/// Errors with [`Error::PerturbativeRegime`] when t²·max(𝓛₁,𝓛₂) > 1.
pub fn rho_total(coeffs: &RhoCoefficients, t: f64) -> Result<DensityMatrix> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("time must be >= 0, got {t}")));
    }
    if admissibility(coeffs, t) == Admissibility::Inadmissible {
        return Err(Error::PerturbativeRegime {
            t2_l: t * t * coeffs.max_population(),
        });
    }
    let t2 = t * t;
    let (nu1, nu2) = (coeffs.band1, coeffs.band2);
    let re = |x: f64| C64::new(x, 0.0);

    let mut m = DMatrix::<C64>::zeros(4, 4);
    let base = basis_index(nu1, nu2);
    let flip2 = basis_index(nu1, nu2.flip());
    let flip1 = basis_index(nu1.flip(), nu2);
    let flip12 = basis_index(nu1.flip(), nu2.flip());

    m[(base, base)] = re(1.0 - t2 * (coeffs.l1 + coeffs.l2));
    m[(flip2, flip2)] = re(t2 * coeffs.l2);
    m[(flip1, flip1)] = re(t2 * coeffs.l1);
    // (flip12, flip12) stays exactly zero

    m[(base, flip2)] = re(t2 * coeffs.b2);
    m[(flip2, base)] = re(t2 * coeffs.b2);
    m[(base, flip1)] = re(t2 * coeffs.b1);
    m[(flip1, base)] = re(t2 * coeffs.b1);

    m[(flip1, flip2)] = coeffs.n_coef * t2;
    m[(flip2, flip1)] = coeffs.n_coef.conj() * t2;
    m[(flip12, base)] = coeffs.m_coef * t2;
    m[(base, flip12)] = coeffs.m_coef.conj() * t2;

    DensityMatrix::new(m)
}

/// Partial trace of a 4×4 two-layer state, keeping layer `keep` (1 or 2).
pub fn reduce(rho: &DensityMatrix, keep: u8) -> Result<DensityMatrix> {
    if rho.dim() != 4 {
        return Err(Error::InvalidState(format!(
            "partial trace needs a 4x4 state, got {}x{}",
            rho.dim(),
            rho.dim()
        )));
    }
    let m = rho.entries();
    let mut out = DMatrix::<C64>::zeros(2, 2);
    for a in 0..2 {
        for b in 0..2 {
            let mut s = C64::new(0.0, 0.0);
            for c in 0..2 {
                let (row, col) = match keep {
                    2 => (2 * c + a, 2 * c + b),
                    1 => (2 * a + c, 2 * b + c),
                    other => {
                        return Err(Error::Domain(format!("keep must be 1 or 2, got {other}")));
                    }
                };
                s += m[(row, col)];
            }
            out[(a, b)] = s;
        }
    }
    DensityMatrix::new(out)
}

/// Closed-form reduced 2×2 matrix of one layer in the fixed (|+⟩, |−⟩)
/// ordering: the surviving population 1 − t²𝓛 sits at that layer's initial
/// band index, t²𝓛 at the flipped one, with coherence t²𝓑 off-diagonal
/// (or zero when `include_coherence` is false). Identical to the partial
/// trace of [`rho_total`] over the other layer.
pub fn reduced_from_coefficients(
    coeffs: &RhoCoefficients,
    t: f64,
    keep: u8,
    include_coherence: bool,
) -> Result<DensityMatrix> {
    let (l, b, band) = match keep {
        1 => (coeffs.l1, coeffs.b1, coeffs.band1),
        2 => (coeffs.l2, coeffs.b2, coeffs.band2),
        other => return Err(Error::Domain(format!("keep must be 1 or 2, got {other}"))),
    };
    if admissibility(coeffs, t) == Admissibility::Inadmissible {
        return Err(Error::PerturbativeRegime {
            t2_l: t * t * coeffs.max_population(),
        });
    }
    let t2 = t * t;
    let off = if include_coherence { t2 * b } else { 0.0 };
    let idx = if band == Sign::Plus { 0 } else { 1 };
    let mut m = DMatrix::<C64>::zeros(2, 2);
    m[(idx, idx)] = C64::new(1.0 - t2 * l, 0.0);
    m[(1 - idx, 1 - idx)] = C64::new(t2 * l, 0.0);
    m[(0, 1)] = C64::new(off, 0.0);
    m[(1, 0)] = C64::new(off, 0.0);
    DensityMatrix::new(m)
}

/// Purity Tr(ρ²). Equals the squared Frobenius norm for Hermitian ρ.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.entries().iter().map(|z| z.norm_sqr()).sum()
}
