//! Independent brute-force constructions that validate every closed form:
//! direct second-order operator assembly of ρ(t), numeric eigensolvers,
//! finite-difference derivative checks, a seeded configuration sampler and
//! the verification report.
//!
//! The oracles only use constructions upstream of the closed forms they
//! check: sublattice-ket outer products and the operator sum, never the
//! assembled coefficient block.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::band_ops::{sigma_band_operator, sigma_tabulated, Polarity};
use crate::cavity::CavityGeometry;
use crate::chi::ChiPair;
use crate::constants::PhysicalConstants;
use crate::density::{
    admissibility, compute_coefficients_momenta, compute_coefficients_normalized, rho_total,
    Admissibility, DensityMatrix, LayerConfig, PropagatorMomenta,
};
use crate::electron::{ElectronState, Sign};
use crate::error::{Error, Result};
use crate::material::Material;

type C64 = Complex64;

/// Per-layer ladder operators and the initial projector, ready for the
/// second-order operator sum.
pub struct OperatorAlgebra {
    /// σ₊ and σ₋ of layer 1 in its band basis.
    pub sigma1: [Matrix2<C64>; 2],
    /// σ₊ and σ₋ of layer 2 in its band basis.
    pub sigma2: [Matrix2<C64>; 2],
    /// ρ_s = |ν₁,ν₂⟩⟨ν₁,ν₂|.
    pub rho_s: DMatrix<C64>,
}

fn embed(op: &Matrix2<C64>, layer: usize) -> DMatrix<C64> {
    let id = DMatrix::<C64>::identity(2, 2);
    let op_dyn = DMatrix::from_fn(2, 2, |i, j| op[(i, j)]);
    match layer {
        0 => op_dyn.kronecker(&id),
        _ => id.kronecker(&op_dyn),
    }
}

impl OperatorAlgebra {
    pub fn new(layer1: &LayerConfig, layer2: &LayerConfig) -> Result<Self> {
        let build = |layer: &LayerConfig| -> Result<[Matrix2<C64>; 2]> {
            let chi = ChiPair::new(
                layer.electron.energy,
                layer.electron.mass_term(&layer.material),
            )?;
            Ok([
                sigma_band_operator(Polarity::Plus, &chi, layer.electron.angle).0,
                sigma_band_operator(Polarity::Minus, &chi, layer.electron.angle).0,
            ])
        };
        let rho_s = DensityMatrix::product_state(layer1.electron.band, layer2.electron.band)
            .entries()
            .clone();
        Ok(Self {
            sigma1: build(layer1)?,
            sigma2: build(layer2)?,
            rho_s,
        })
    }

    fn sigma(&self, layer: usize, polarity: Polarity) -> DMatrix<C64> {
        let ops = if layer == 0 {
            &self.sigma1
        } else {
            &self.sigma2
        };
        let m = match polarity {
            Polarity::Plus => &ops[0],
            Polarity::Minus => &ops[1],
        };
        embed(m, layer)
    }

    /// Σ_{i,j,λ} w_ij (σ⁽ⁱ⁾_{−λ} σ⁽ʲ⁾_λ ρ_s − 2 σ⁽ⁱ⁾_{−λ} ρ_s σ⁽ʲ⁾_λ
    ///              + ρ_s σ⁽ⁱ⁾_{−λ} σ⁽ʲ⁾_λ).
    pub fn operator_sum(&self, weights: [[f64; 2]; 2]) -> DMatrix<C64> {
        let mut acc = DMatrix::<C64>::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                let w = C64::new(weights[i][j], 0.0);
                for lambda in [Polarity::Plus, Polarity::Minus] {
                    let opposite = match lambda {
                        Polarity::Plus => Polarity::Minus,
                        Polarity::Minus => Polarity::Plus,
                    };
                    let a = self.sigma(i, opposite);
                    let b = self.sigma(j, lambda);
                    let term = &a * &b * &self.rho_s - (&a * &self.rho_s * &b) * C64::new(2.0, 0.0)
                        + &self.rho_s * &a * &b;
                    acc += term * w;
                }
            }
        }
        acc
    }
}

fn dyson_with_prefactor(
    layer1: &LayerConfig,
    layer2: &LayerConfig,
    cavity: &CavityGeometry,
    momenta: &PropagatorMomenta,
    kappa: f64,
    t: f64,
) -> Result<DensityMatrix> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("time must be >= 0, got {t}")));
    }
    let algebra = OperatorAlgebra::new(layer1, layer2)?;
    let d11 = cavity.photon_propagator(layer1.position, layer1.position, momenta.q11)?;
    let d22 = cavity.photon_propagator(layer2.position, layer2.position, momenta.q22)?;
    let d12 = cavity.photon_propagator(layer1.position, layer2.position, momenta.q12)?;
    let v1 = layer1.material.fermi_velocity;
    let v2 = layer2.material.fermi_velocity;
    let weights = [
        [v1 * v1 * d11, v1 * v2 * d12],
        [v2 * v1 * d12, v2 * v2 * d22],
    ];
    let sum = algebra.operator_sum(weights);
    let rho = &algebra.rho_s - sum * C64::new(0.5 * t * t * kappa, 0.0);
    // Hermiticity and unit trace are not imposed here; the constructor
    // rejects the matrix if the operator structure failed to guarantee them.
    DensityMatrix::new(rho)
}

/// Second-order ρ(t) assembled directly from the operator algebra, with the
/// physical coupling κ = e²/(ε₀ V ħ). Must agree entrywise with
/// [`rho_total`] over [`compute_coefficients`]; that agreement is the
/// repository's central correctness theorem.
///
/// [`rho_total`]: crate::density::rho_total
/// [`compute_coefficients`]: crate::density::compute_coefficients
pub fn dyson_rho(
    layer1: &LayerConfig,
    layer2: &LayerConfig,
    cavity: &CavityGeometry,
    t: f64,
    q: f64,
) -> Result<DensityMatrix> {
    let kappa = PhysicalConstants::default().coupling_prefactor(cavity.mode_volume);
    dyson_with_prefactor(
        layer1,
        layer2,
        cavity,
        &PropagatorMomenta::uniform(q),
        kappa,
        t,
    )
}

/// [`dyson_rho`] in normalized mode (ζ = 1) with independent momenta.
pub fn dyson_rho_normalized(
    layer1: &LayerConfig,
    layer2: &LayerConfig,
    cavity: &CavityGeometry,
    momenta: &PropagatorMomenta,
    t: f64,
) -> Result<DensityMatrix> {
    let kappa = 1.0 / (layer1.material.fermi_velocity * layer2.material.fermi_velocity);
    dyson_with_prefactor(layer1, layer2, cavity, momenta, kappa, t)
}

/// Central difference (f(t₀+h) − f(t₀−h)) / 2h.
pub fn central_difference<F: Fn(f64) -> f64>(f: F, t0: f64, h: f64) -> Result<f64> {
    if !(t0 - h > 0.0) {
        return Err(Error::Domain(format!(
            "need t0 - h > 0, got t0 = {t0}, h = {h}"
        )));
    }
    if t0 + h == t0 {
        return Err(Error::Numeric(format!(
            "step underflow: h = {h} at t0 = {t0}"
        )));
    }
    Ok((f(t0 + h) - f(t0 - h)) / (2.0 * h))
}

/// Richardson-extrapolated central difference: (4 D(h/2) − D(h)) / 3.
pub fn richardson_derivative<F: Fn(f64) -> f64 + Copy>(f: F, t0: f64, h: f64) -> Result<f64> {
    let coarse = central_difference(f, t0, h)?;
    let fine = central_difference(f, t0, h / 2.0)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

const MAX_EIGEN_DIM: usize = 8;

/// Eigenvalues of a dense complex square matrix (dim ≤ 8).
///
/// Hermitian inputs take the symmetric path; everything else goes through a
/// Schur decomposition. Each returned eigenvalue is certified by the smallest
/// singular value of (A − λI): residual ≤ 1e-10·‖A‖_F, else a numeric error.
pub fn eigen_oracle(m: &DMatrix<C64>) -> Result<Vec<C64>> {
    let (r, c) = m.shape();
    if r != c {
        return Err(Error::InvalidState(format!(
            "eigenvalues need a square matrix, got {r}x{c}"
        )));
    }
    if r == 0 || r > MAX_EIGEN_DIM {
        return Err(Error::InvalidState(format!(
            "dimension {r} outside 1..={MAX_EIGEN_DIM}"
        )));
    }
    let herm_residual = (m - m.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let scale = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let eigs: Vec<C64> = if herm_residual <= 1e-12 * scale.max(1.0) {
        m.clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .map(|v| C64::new(*v, 0.0))
            .collect()
    } else {
        let schur = m
            .clone()
            .try_schur(1e-14, 100_000)
            .ok_or_else(|| Error::Numeric("Schur iteration did not converge".into()))?;
        match schur.eigenvalues() {
            Some(ev) => ev.iter().copied().collect(),
            None => return Err(Error::Numeric("Schur produced no eigenvalues".into())),
        }
    };
    // certify each eigenvalue: the Gram matrix of (A − λI) yields a candidate
    // null vector (its smallest eigenvector), refined by inverse iteration;
    // the residual ‖(A − λI)v‖ is then evaluated directly. The Gram
    // eigenvalue alone certifies only down to √ε, which is not enough.
    for lam in &eigs {
        let shifted = m - DMatrix::<C64>::identity(r, r) * *lam;
        let gram = shifted.adjoint() * &shifted;
        let se = gram.symmetric_eigen();
        // near-degenerate null spaces make individual Gram eigenvectors
        // unreliable; probe them all and keep the best
        let mut k_min = 0;
        let mut residual = f64::INFINITY;
        for k in 0..r {
            let candidate = (&shifted * se.eigenvectors.column(k)).norm();
            if candidate < residual {
                residual = candidate;
                k_min = k;
            }
        }
        let mut v = se.eigenvectors.column(k_min).into_owned();
        let lu = shifted.clone().full_piv_lu();
        for _ in 0..2 {
            let Some(x) = lu.solve(&v) else { break };
            let norm = x.norm();
            if !norm.is_finite() || norm == 0.0 {
                break;
            }
            let refined = x / C64::new(norm, 0.0);
            let refined_residual = (&shifted * &refined).norm();
            if refined_residual < residual {
                residual = refined_residual;
                v = refined;
            } else {
                break;
            }
        }
        if residual > 1e-10 * scale.max(1e-300) {
            return Err(Error::Numeric(format!(
                "eigenvalue {lam} has residual {residual:.3e} > 1e-10·‖A‖ = {:.3e}",
                1e-10 * scale
            )));
        }
    }
    Ok(eigs)
}

/// One random admissible configuration.
#[derive(Debug, Clone)]
pub struct SampledConfig {
    pub layer1: LayerConfig,
    pub layer2: LayerConfig,
    pub cavity: CavityGeometry,
    pub momenta: PropagatorMomenta,
    pub t: f64,
    /// Normalized coupling (ζ = 1) instead of the physical κ.
    pub normalized: bool,
}

impl SampledConfig {
    pub fn coefficients(&self) -> Result<crate::density::RhoCoefficients> {
        if self.normalized {
            compute_coefficients_normalized(&self.layer1, &self.layer2, &self.cavity, &self.momenta)
        } else {
            compute_coefficients_momenta(
                &self.layer1,
                &self.layer2,
                &self.cavity,
                &self.momenta,
                &PhysicalConstants::default(),
            )
        }
    }

    pub fn dyson(&self) -> Result<DensityMatrix> {
        if self.normalized {
            dyson_rho_normalized(
                &self.layer1,
                &self.layer2,
                &self.cavity,
                &self.momenta,
                self.t,
            )
        } else {
            let kappa = PhysicalConstants::default().coupling_prefactor(self.cavity.mode_volume);
            dyson_with_prefactor(
                &self.layer1,
                &self.layer2,
                &self.cavity,
                &self.momenta,
                kappa,
                self.t,
            )
        }
    }
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let u: f64 = rng.random_range(lo.ln()..hi.ln());
    u.exp()
}

fn random_sign(rng: &mut ChaCha8Rng) -> Sign {
    if rng.random_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Draw one admissible configuration. Energies are log-uniform in
/// [1e-4, 1] eV, gaps log-uniform in [1e-6, 0.1] eV, azimuths uniform,
/// positions uniform in (0.1 L, 0.9 L), n_max in 1..=8, all discrete indices
/// uniform in ±1; half the draws run in normalized mode, half in SI. The
/// evolution time is placed so that t²·max(𝓛₁,𝓛₂) lands log-uniformly in
/// [1e-3, 0.3].
pub fn sample_config(rng: &mut ChaCha8Rng) -> SampledConfig {
    sample_with_sector(rng, false)
}

/// Like [`sample_config`] but with equal spins and equal bands in the two
/// layers, the sector where interlayer concurrence can exist, and a shared
/// momentum transfer across all three propagators. The shared momentum keeps
/// the propagator matrix a Gram matrix, which guarantees
/// |𝓝| ≤ sqrt(𝓛₁𝓛₂) — the validity domain of the closed-form concurrence.
pub fn sample_config_equal_sector(rng: &mut ChaCha8Rng) -> SampledConfig {
    sample_with_sector(rng, true)
}

fn sample_with_sector(rng: &mut ChaCha8Rng, equal_sector: bool) -> SampledConfig {
    let normalized = rng.random_bool(0.5);
    let (length, light_speed, mode_volume) = if normalized {
        (1.0, 1.0, 1.0)
    } else {
        let length = 1e-6;
        (
            length,
            crate::constants::SPEED_OF_LIGHT,
            log_uniform(rng, 1e-16, 1e-12),
        )
    };
    let z1: f64 = rng.random_range(0.1 * length..0.9 * length);
    let mut z2: f64 = rng.random_range(0.1 * length..0.9 * length);
    if (z2 - z1).abs() < 1e-6 * length {
        z2 = if z1 < 0.5 * length {
            z1 + 0.05 * length
        } else {
            z1 - 0.05 * length
        };
    }
    let n_max = rng.random_range(1..=8u32);
    let cavity = CavityGeometry::new(length, z1, z2, n_max, light_speed, mode_volume)
        .expect("sampled geometry is valid");

    let vf = |rng: &mut ChaCha8Rng| {
        if normalized {
            log_uniform(rng, 0.3, 3.0)
        } else {
            log_uniform(rng, 1e5, 2e6)
        }
    };
    let layer = |rng: &mut ChaCha8Rng, pos: f64, idx: usize| {
        let material = Material::new(format!("sample{idx}"), vf(rng), log_uniform(rng, 1e-6, 0.1))
            .expect("sampled material is valid");
        let electron = ElectronState::new(
            log_uniform(rng, 1e-4, 1.0),
            rng.random_range(0.0..std::f64::consts::TAU),
            random_sign(rng),
            random_sign(rng),
            random_sign(rng),
        )
        .expect("sampled electron is valid");
        LayerConfig::new(material, electron, pos)
    };
    let layer1 = layer(rng, z1, 1);
    let mut layer2 = layer(rng, z2, 2);
    if equal_sector {
        layer2.electron.spin = layer1.electron.spin;
        layer2.electron.band = layer1.electron.band;
    }

    let momenta = if rng.random_bool(0.5) {
        PropagatorMomenta::default()
    } else if equal_sector {
        PropagatorMomenta::uniform(rng.random_range(0.0..1.0 / length))
    } else {
        let q_scale = 1.0 / length;
        PropagatorMomenta {
            q11: rng.random_range(0.0..q_scale),
            q22: rng.random_range(0.0..q_scale),
            q12: rng.random_range(0.0..q_scale),
        }
    };

    let mut config = SampledConfig {
        layer1,
        layer2,
        cavity,
        momenta,
        t: 0.0,
        normalized,
    };
    let coeffs = config
        .coefficients()
        .expect("sampled configuration has coefficients");
    let target = log_uniform(rng, 1e-3, 0.3);
    let lmax = coeffs.max_population().max(1e-300);
    config.t = (target / lmax).sqrt();
    debug_assert_eq!(admissibility(&coeffs, config.t), Admissibility::Ok);
    config
}

/// Outcome of one verification check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// Must pass; failure is a verification failure.
    Hard,
    /// Reported pass/fail, never fatal (figure-shape claims, reference
    /// points that depend on undocumented assumptions).
    Soft,
    /// No pass/fail: the measured deviation is the content (published
    /// variants kept for comparison).
    Documented,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub kind: CheckKind,
    /// None for purely documentary rows.
    pub passed: Option<bool>,
    /// Largest residual observed, in the units stated by `details`.
    pub max_residual: f64,
    /// Number of randomized or grid cases exercised.
    pub cases: usize,
    pub details: String,
}

/// Versioned machine-readable verification report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub format_version: u32,
    pub seed: u64,
    pub requested_cases: usize,
    pub checks: Vec<CheckResult>,
    /// True when every hard check passed.
    pub passed: bool,
}

pub const REPORT_FORMAT_VERSION: u32 = 1;

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn recompute_passed(&mut self) {
        self.passed = self
            .checks
            .iter()
            .all(|c| c.kind != CheckKind::Hard || c.passed == Some(true));
    }

    pub fn push(&mut self, check: CheckResult) {
        self.checks.push(check);
        self.recompute_passed();
    }
}

fn max_entry_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Run the randomized verification suites.
///
/// `cases` controls the two big randomized suites (operator assembly vs
/// closed form, concurrence vs spin-flip oracle); the identity grids use
/// fixed sizes.
pub fn run_verification(seed: u64, cases: usize) -> VerificationReport {
    let mut report = VerificationReport {
        format_version: REPORT_FORMAT_VERSION,
        seed,
        requested_cases: cases,
        checks: Vec::new(),
        passed: true,
    };

    // 1. operator assembly vs closed-form matrix, entrywise
    {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        let mut ok = true;
        for _ in 0..cases {
            let cfg = sample_config(&mut rng);
            let coeffs = cfg.coefficients().expect("coefficients");
            let closed = rho_total(&coeffs, cfg.t).expect("closed-form state");
            let direct = cfg.dyson().expect("operator assembly");
            let diff = max_entry_diff(closed.entries(), direct.entries());
            worst = worst.max(diff);
            ok &= diff <= 1e-10;
        }
        report.push(CheckResult {
            name: "operator-assembly-vs-closed-form".into(),
            kind: CheckKind::Hard,
            passed: Some(ok),
            max_residual: worst,
            cases,
            details: "max entrywise |difference| between the second-order operator sum and the closed-form matrix; tolerance 1e-10".into(),
        });
    }

    // 2. chi identities
    {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1d);
        let grid = 10_000;
        let mut worst = 0.0f64;
        for _ in 0..grid {
            let eps = log_uniform(&mut rng, 1e-6, 10.0);
            let delta: f64 = rng.random_range(0.0..10.0);
            let chi = ChiPair::new(eps, delta).expect("chi");
            for r in chi.identity_residuals() {
                worst = worst.max(r);
            }
        }
        report.push(CheckResult {
            name: "chi-identities".into(),
            kind: CheckKind::Hard,
            passed: Some(worst <= 1e-10),
            max_residual: worst,
            cases: grid,
            details: "max relative residual of the five chi-ratio identities; tolerance 1e-10"
                .into(),
        });
    }

    // 3. concurrence closed form vs spin-flip oracle (coherences dropped)
    {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x2d);
        let mut worst_c = 0.0f64;
        let mut worst_eig = 0.0f64;
        let mut ok = true;
        for _ in 0..cases {
            let cfg = sample_config_equal_sector(&mut rng);
            let mut coeffs = cfg.coefficients().expect("coefficients");
            coeffs.b1 = 0.0;
            coeffs.b2 = 0.0;
            let rho = rho_total(&coeffs, cfg.t).expect("state");
            let closed = crate::concurrence::concurrence_from_coefficients(&coeffs, cfg.t);
            let numeric = crate::concurrence::wootters_concurrence(&rho).expect("oracle");
            let dc = (closed - numeric).abs();
            worst_c = worst_c.max(dc);

            let closed_eigs = crate::concurrence::spin_flip_eigen_sqrts(&coeffs, cfg.t);
            let numeric_eigs =
                crate::concurrence::wootters_sqrt_eigenvalues(rho.entries()).expect("spectrum");
            let scale = closed_eigs[0].max(1e-300);
            for (a, b) in closed_eigs.iter().zip(numeric_eigs.iter()) {
                // sqrt eigenvalues below 1% of the largest sit at the
                // eigensolver's resolution floor; compare those absolutely
                let rel = (a - b).abs() / a.abs().max(scale * 1e-2).max(1e-300);
                worst_eig = worst_eig.max(rel);
            }
            ok &= dc <= 1e-10 && worst_eig <= 1e-10;
        }
        report.push(CheckResult {
            name: "concurrence-closed-vs-spin-flip-oracle".into(),
            kind: CheckKind::Hard,
            passed: Some(ok),
            max_residual: worst_c.max(worst_eig),
            cases,
            details: format!(
                "closed form vs numeric spin-flip spectrum: |ΔC| max {worst_c:.3e}, eigenvalue rel max {worst_eig:.3e}; tolerance 1e-10"
            ),
        });
    }

    // 4. ladder anticommutation and sublattice round trip
    {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x3d);
        let grid = 400;
        let mut worst = 0.0f64;
        for _ in 0..grid {
            let eps = log_uniform(&mut rng, 1e-4, 10.0);
            let delta: f64 = rng.random_range(-5.0..5.0);
            let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let chi = ChiPair::new(eps, delta).expect("chi");
            let sp = sigma_band_operator(Polarity::Plus, &chi, phi).0;
            let sm = sigma_band_operator(Polarity::Minus, &chi, phi).0;
            let anti = sp * sm + sm * sp;
            let r1 = (anti - Matrix2::identity())
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            let t = crate::band_ops::sublattice_to_band(&chi, phi);
            let ladder = Matrix2::new(
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
            );
            let r2 = (t.adjoint() * sp * t - ladder)
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            worst = worst.max(r1).max(r2);
        }
        report.push(CheckResult {
            name: "ladder-algebra".into(),
            kind: CheckKind::Hard,
            passed: Some(worst <= 1e-12),
            max_residual: worst,
            cases: grid,
            details: "anticommutation to identity and sublattice round trip; tolerance 1e-12"
                .into(),
        });
    }

    // 5. eigensolver residual certification on shifted states
    {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4d);
        let grid = 50;
        let mut worst = 0.0f64;
        let mut ok = true;
        for _ in 0..grid {
            let cfg = sample_config(&mut rng);
            let coeffs = cfg.coefficients().expect("coefficients");
            let rho = rho_total(&coeffs, cfg.t).expect("state");
            match eigen_oracle(rho.entries()) {
                Ok(eigs) => {
                    let imag = eigs.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
                    worst = worst.max(imag);
                    ok &= imag <= 1e-12;
                }
                Err(_) => ok = false,
            }
        }
        report.push(CheckResult {
            name: "hermitian-eigenvalues-real".into(),
            kind: CheckKind::Hard,
            passed: Some(ok),
            max_residual: worst,
            cases: grid,
            details:
                "eigen oracle on Hermitian states returns real eigenvalues; imaginary parts ≤ 1e-12"
                    .into(),
        });
    }

    // 6. tabulated ladder matrix elements, compared, never asserted
    {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5d);
        let grid = 200;
        let mut worst = 0.0f64;
        for _ in 0..grid {
            let eps = log_uniform(&mut rng, 1e-4, 10.0);
            let delta: f64 = rng.random_range(-5.0..5.0);
            let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let chi = ChiPair::new(eps, delta).expect("chi");
            for lambda in [Sign::Plus, Sign::Minus] {
                let polarity = match lambda {
                    Sign::Plus => Polarity::Plus,
                    Sign::Minus => Polarity::Minus,
                };
                let lit = sigma_tabulated(lambda, &chi, phi);
                let outer = sigma_band_operator(polarity, &chi, phi).0;
                worst = worst.max((lit - outer).iter().map(|z| z.norm()).fold(0.0, f64::max));
            }
        }
        report.push(CheckResult {
            name: "tabulated-ladder-elements".into(),
            kind: CheckKind::Documented,
            passed: None,
            max_residual: worst,
            cases: grid,
            details: format!(
                "published per-element ladder formula vs outer-product construction: max |difference| {worst:.3e} (documented mismatch; the polarization dependence of the printed bracket is degenerate)"
            ),
        });
    }

    // 7. published full square-root concurrence variant, compared
    {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6d);
        let grid = 200;
        let mut worst = 0.0f64;
        for _ in 0..grid {
            let e1 = log_uniform(&mut rng, 1e-3, 1.0);
            let e2 = log_uniform(&mut rng, 1e-3, 1.0);
            let g1 = log_uniform(&mut rng, 1e-6, 0.5);
            let g2 = log_uniform(&mut rng, 1e-6, 0.5);
            let dphi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let corrected = crate::concurrence::concurrence_full_sqrt(e1, e2, g1, g2, dphi, 1.0)
                .expect("corrected route");
            let published = published_full_sqrt_variant(e1, e2, g1, g2, dphi, 1.0);
            let denom = corrected.abs().max(1e-12);
            worst = worst.max((corrected - published).abs() / denom);
        }
        report.push(CheckResult {
            name: "published-full-sqrt-variant".into(),
            kind: CheckKind::Documented,
            passed: None,
            max_residual: worst,
            cases: grid,
            details: format!(
                "published square-root expansion vs algebraic route: max relative deviation {worst:.3e} (documented: the published radicand omits one second-layer gap-ratio term)"
            ),
        });
    }

    // 8. gapless-limit tension: exchange branch vs full closed form
    {
        let dphi = 0.7f64;
        let (branch, full) = {
            let cavity = CavityGeometry::normalized(0.4, 0.6, 1).expect("cavity");
            let mk = |lam: f64, phi: f64| {
                LayerConfig::new(
                    Material::new("g", 1.0, lam).expect("material"),
                    ElectronState::conduction(1e-3, phi).expect("electron"),
                    0.0,
                )
            };
            let mut l1 = mk(1e-11, dphi);
            l1.position = 0.4;
            let mut l2 = mk(1e-11, 0.0);
            l2.position = 0.6;
            let coeffs =
                compute_coefficients_normalized(&l1, &l2, &cavity, &PropagatorMomenta::default())
                    .expect("coefficients");
            let t = 0.3 / coeffs.max_population().sqrt();
            (
                crate::concurrence::exchange_branch_from_coefficients(&coeffs, t),
                crate::concurrence::concurrence_from_coefficients(&coeffs, t),
            )
        };
        report.push(CheckResult {
            name: "gapless-limit-tension".into(),
            kind: CheckKind::Documented,
            passed: None,
            max_residual: full / branch.max(1e-300),
            cases: 1,
            details: format!(
                "as the gaps close, the exchange branch stays finite ({branch:.6e}) while the full concurrence collapses ({full:.3e}): the published gapless limit keeps only the exchange branch"
            ),
        });
    }

    // 9. published spin-flip spectrum variant, compared
    {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7d);
        let mut worst = 0.0f64;
        let grid = 50;
        for _ in 0..grid {
            let cfg = sample_config_equal_sector(&mut rng);
            let mut coeffs = cfg.coefficients().expect("coefficients");
            coeffs.b1 = 0.0;
            coeffs.b2 = 0.0;
            let rho = rho_total(&coeffs, cfg.t).expect("state");
            let numeric =
                crate::concurrence::wootters_sqrt_eigenvalues(rho.entries()).expect("spectrum");
            // published variant: unsquared coefficient combinations with the
            // second double-flip entry replaced by zero
            let t4 = cfg.t.powi(4);
            let g = (coeffs.l1 * coeffs.l2).sqrt();
            let n = coeffs.n_coef.norm();
            let m = coeffs.m_coef.norm();
            let mut published = [t4 * (g + n), t4 * (g - n).abs(), t4 * m, 0.0];
            published.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let scale = numeric[0].max(1e-300);
            for (a, b) in published.iter().zip(numeric.iter().map(|s| s * s)) {
                worst = worst.max((a - b).abs() / scale.powi(2).max(1e-300));
            }
        }
        report.push(CheckResult {
            name: "published-spin-flip-spectrum".into(),
            kind: CheckKind::Documented,
            passed: None,
            max_residual: worst,
            cases: grid,
            details: format!(
                "published eigenvalue list for the spin-flip product vs numeric spectrum: max relative deviation {worst:.3e} (documented mismatch: the published list is unsquared and drops one double-flip eigenvalue; its concurrence combination is nevertheless exact)"
            ),
        });
    }

    report
}

/// The published variant of the full square-root concurrence, kept verbatim
/// for the comparison row (its radicand drops one λ₂²/ε₂² term).
fn published_full_sqrt_variant(
    e1: f64,
    e2: f64,
    l1: f64,
    l2: f64,
    dphi: f64,
    zeta_t2_delta12: f64,
) -> f64 {
    let s1 = e1.hypot(l1);
    let s2 = e2.hypot(l2);
    let pref = zeta_t2_delta12 * e1 * e2 / (std::f64::consts::SQRT_2 * s1 * s2);
    let tail = |sign: f64| {
        1.0 + l2 * l2 / (e2 * e2)
            + 2.0 * l1 * (e2 * e2 * l1 + 2.0 * l2 * (l1 * l2 + sign * s1 * s2))
                / (e1 * e1 * e2 * e2)
            + (2.0 * dphi).cos()
    };
    let gp = tail(1.0).max(0.0).sqrt();
    let gm = tail(-1.0).max(0.0).sqrt();
    (pref * (gp - gm)).max(0.0)
}
