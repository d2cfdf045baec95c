//! Acceptance suite: every release criterion as one test, each printing a
//! pass/fail line with the observed residual against its pinned tolerance.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cavity_entanglement::concurrence::{
    concurrence_from_coefficients, concurrence_identical, exchange_branch_from_coefficients,
    spin_flip_eigen_sqrts, wootters_concurrence, wootters_sqrt_eigenvalues,
};
use cavity_entanglement::density::{
    compute_coefficients_momenta, compute_coefficients_normalized, purity,
    reduced_from_coefficients, rho_total, LayerConfig, PropagatorMomenta,
};
use cavity_entanglement::entropy::{entropy_exact, entropy_expansion};
use cavity_entanglement::oracle::{sample_config, sample_config_equal_sector};
use cavity_entanglement::sweep::{
    figure_recipe, figure_verdicts, recipe_names, render_csv, run_sweep,
};
use cavity_entanglement::{CavityGeometry, ChiPair, ElectronState, Material};

fn pass_line(name: &str, detail: String) {
    println!("[PASS] {name}: {detail}");
}

const SEED: u64 = 0x5eed_cafe;

/// Central theorem: the operator-algebra assembly equals the closed-form
/// matrix entrywise to 1e-10 over 500 seeded random admissible
/// configurations, in under 10 s.
#[test]
fn oracle_equivalence_central_theorem() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let cases = 500;
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let cfg = sample_config(&mut rng);
        let coeffs = cfg.coefficients().expect("coefficients");
        let closed = rho_total(&coeffs, cfg.t).expect("closed form");
        let direct = cfg.dyson().expect("operator assembly");
        let diff = (closed.entries() - direct.entries())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        worst = worst.max(diff);
    }
    let elapsed = started.elapsed().as_secs_f64();
    assert!(
        worst <= 1e-10,
        "entrywise deviation {worst:.3e} exceeds 1e-10"
    );
    assert!(elapsed < 10.0, "suite took {elapsed:.2}s, limit 10s");
    pass_line(
        "oracle-equivalence",
        format!("{cases} configurations, max entrywise |Δ| = {worst:.3e} ≤ 1e-10, {elapsed:.2}s"),
    );
}

/// Concurrence closed form vs the numeric spin-flip oracle on
/// coherence-free states, 1000 configurations, |ΔC| ≤ 1e-10, and the closed
/// eigenvalue set matching the numeric spectrum of R to 1e-10 relative.
#[test]
fn concurrence_closed_form_vs_wootters() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0xc0c0);
    let cases = 1000;
    let mut worst_c = 0.0f64;
    let mut worst_eig = 0.0f64;
    for _ in 0..cases {
        let cfg = sample_config_equal_sector(&mut rng);
        let mut coeffs = cfg.coefficients().expect("coefficients");
        coeffs.b1 = 0.0;
        coeffs.b2 = 0.0;
        let rho = rho_total(&coeffs, cfg.t).expect("state");
        let closed = concurrence_from_coefficients(&coeffs, cfg.t);
        let numeric = wootters_concurrence(&rho).expect("oracle");
        worst_c = worst_c.max((closed - numeric).abs());

        let closed_sq = spin_flip_eigen_sqrts(&coeffs, cfg.t);
        let numeric_sq = wootters_sqrt_eigenvalues(rho.entries()).expect("spectrum");
        let scale = closed_sq[0].max(1e-300);
        for (a, b) in closed_sq.iter().zip(numeric_sq.iter()) {
            // relative on the resolvable ones: a backward-stable solver
            // locates an eigenvalue of R only to ~eps*norm(R), so square
            // roots below 1% of the largest are compared against that floor
            // (an absolute tolerance of 1e-12 x scale) instead
            let denom = a.abs().max(1e-2 * scale);
            worst_eig = worst_eig.max((a - b).abs() / denom);
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    assert!(
        worst_c <= 1e-10,
        "concurrence deviation {worst_c:.3e} exceeds 1e-10"
    );
    assert!(
        worst_eig <= 1e-10,
        "eigenvalue deviation {worst_eig:.3e} exceeds 1e-10"
    );
    assert!(elapsed < 10.0, "suite took {elapsed:.2}s, limit 10s");
    pass_line(
        "concurrence-vs-wootters",
        format!(
            "{cases} configurations, max |ΔC| = {worst_c:.3e}, max eigenvalue rel Δ = {worst_eig:.3e}, both ≤ 1e-10, {elapsed:.2}s"
        ),
    );
}

/// All five chi identities to 1e-10 relative over 10⁴ random (ε, Δ), < 1 s.
#[test]
fn chi_identity_suite() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x11);
    let cases = 10_000;
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let eps = 10f64.powf(rng.random_range(-6.0..1.0));
        let delta: f64 = rng.random_range(0.0..10.0);
        let chi = ChiPair::new(eps, delta).expect("chi");
        for r in chi.identity_residuals() {
            worst = worst.max(r);
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    assert!(
        worst <= 1e-10,
        "identity residual {worst:.3e} exceeds 1e-10"
    );
    assert!(elapsed < 1.0, "suite took {elapsed:.3}s, limit 1s");
    pass_line(
        "chi-identities",
        format!("{cases} samples, max relative residual {worst:.3e} ≤ 1e-10, {elapsed:.3}s"),
    );
}

fn gapless_test_pair(
    lambda_over_eps: f64,
    dphi: f64,
) -> (LayerConfig, LayerConfig, CavityGeometry) {
    let eps = 1.0;
    let cavity = CavityGeometry::normalized(0.35, 0.62, 2).expect("cavity");
    let layer = |lam: f64, phi: f64, pos: f64| {
        LayerConfig::new(
            Material::new("g", 1.0, lam).expect("material"),
            ElectronState::conduction(eps, phi).expect("electron"),
            pos,
        )
    };
    (
        layer(lambda_over_eps * eps, dphi, 0.35),
        layer(lambda_over_eps * eps, 0.0, 0.62),
        cavity,
    )
}

/// Gapless limit: at λ = 1e-8·ε the exchange branch of the concurrence
/// reproduces ζt²Δ₁₂|cos Δφ| within 1e-4 relative. (The full closed form
/// collapses in this limit because the double-flip coherence catches up; the
/// branch is what the gapless-layer result refers to. The verification
/// report carries the tension row.)
#[test]
fn zero_soi_limit() {
    let mut worst = 0.0f64;
    for dphi in [0.0, 0.4, 0.7, 2.0, 2.9] {
        let (l1, l2, cavity) = gapless_test_pair(1e-8, dphi);
        let coeffs =
            compute_coefficients_normalized(&l1, &l2, &cavity, &PropagatorMomenta::default())
                .expect("coefficients");
        let t = 0.3 / coeffs.max_population().sqrt();
        let branch = exchange_branch_from_coefficients(&coeffs, t);
        let d12 = cavity
            .photon_propagator(0.35, 0.62, 0.0)
            .expect("propagator");
        let reference = coeffs.zeta * t * t * d12 * dphi.cos().abs();
        let rel = (branch - reference).abs() / reference.abs().max(1e-300);
        worst = worst.max(rel);
    }
    assert!(
        worst <= 1e-4,
        "gapless-limit deviation {worst:.3e} exceeds 1e-4"
    );

    // Cauchy convergence of the branch along λ/ε = 10⁻ᵏ, k = 3..8
    let dphi = 0.7;
    let mut previous: Option<f64> = None;
    let mut last_step = f64::INFINITY;
    for k in 3..=8 {
        let (l1, l2, cavity) = gapless_test_pair(10f64.powi(-k), dphi);
        let coeffs =
            compute_coefficients_normalized(&l1, &l2, &cavity, &PropagatorMomenta::default())
                .expect("coefficients");
        let t = 0.3 / coeffs.max_population().sqrt();
        let branch = exchange_branch_from_coefficients(&coeffs, t);
        if let Some(prev) = previous {
            let step = (branch - prev).abs();
            assert!(
                step <= last_step * 1.01 + 1e-15,
                "sequence not Cauchy at k = {k}: step {step:.3e} after {last_step:.3e}"
            );
            last_step = step;
        }
        previous = Some(branch);
    }
    pass_line(
        "zero-soi-limit",
        format!("exchange branch matches the gapless result, max rel Δ = {worst:.3e} ≤ 1e-4; sequence λ/ε = 1e-3..1e-8 is Cauchy"),
    );
}

/// Identical layers: the closed form equals the dedicated identical-layer
/// formula to 1e-12.
#[test]
fn identical_layer_consistency() {
    let mut worst = 0.0f64;
    for (eps, lam, dphi) in [
        (1e-3, 3.9e-3, 0.8),
        (1e-3, 1e-6, 0.3),
        (0.5, 0.2, 2.1),
        (1.0, 1.0, std::f64::consts::FRAC_PI_2),
    ] {
        let cavity = CavityGeometry::normalized(0.3, 0.64, 3).expect("cavity");
        let layer = |phi: f64, pos: f64| {
            LayerConfig::new(
                Material::new("m", 1.0, lam).expect("material"),
                ElectronState::conduction(eps, phi).expect("electron"),
                pos,
            )
        };
        let (l1, l2) = (layer(dphi, 0.3), layer(0.0, 0.64));
        let coeffs =
            compute_coefficients_normalized(&l1, &l2, &cavity, &PropagatorMomenta::default())
                .expect("coefficients");
        let t = 0.25 / coeffs.max_population().sqrt();
        let closed = cavity_entanglement::concurrence::concurrence_closed_form_with(
            &l1,
            &l2,
            &cavity,
            t,
            &PropagatorMomenta::default(),
            &Default::default(),
            true,
        )
        .expect("closed form");
        let d12 = cavity
            .photon_propagator(0.3, 0.64, 0.0)
            .expect("propagator");
        let dedicated =
            concurrence_identical(eps, lam, dphi, coeffs.zeta * t * t * d12).expect("identical");
        let rel = (closed - dedicated).abs() / dedicated.abs().max(1e-300);
        worst = worst.max(rel);
    }
    assert!(
        worst <= 1e-12,
        "identical-layer deviation {worst:.3e} exceeds 1e-12"
    );
    pass_line(
        "identical-layer-consistency",
        format!("max relative Δ = {worst:.3e} ≤ 1e-12"),
    );
}

/// Entropy expansion remainder |exact − leading| ≤ K·t⁴|ln t| with a finite
/// fitted K over two decades, and the coherence correction lowering the
/// exact entropy.
#[test]
fn entropy_expansion_remainder() {
    let l = 1.0;
    // admissibility edge for l = 1 is t ~ 0.7; fit two decades below it
    let fit_t = 0.07;
    let k = (entropy_exact_from(l, fit_t, 0.0) - entropy_expansion(fit_t, l, 0.0).unwrap().0).abs()
        / (fit_t.powi(4) * fit_t.ln().abs());
    assert!(
        k.is_finite() && k > 0.0,
        "fitted constant must be positive and finite"
    );
    let mut worst_ratio = 0.0f64;
    let mut t = 0.07;
    while t > 0.0007 {
        let remainder =
            (entropy_exact_from(l, t, 0.0) - entropy_expansion(t, l, 0.0).unwrap().0).abs();
        let bound = 1.5 * k * t.powi(4) * t.ln().abs();
        worst_ratio = worst_ratio.max(remainder / bound);
        t *= 0.7;
    }
    assert!(
        worst_ratio <= 1.0,
        "remainder escaped the fitted quartic-log bound: ratio {worst_ratio:.3}"
    );

    // local coherences reduce the mixing
    let (t, b) = (0.1, 0.35);
    let with_b = entropy_exact_from(l, t, b);
    let without_b = entropy_exact_from(l, t, 0.0);
    assert!(
        with_b < without_b,
        "coherent state must carry less entropy: {with_b} vs {without_b}"
    );
    pass_line(
        "entropy-expansion-remainder",
        format!(
            "K = {k:.4} fitted at t = {fit_t}, bound holds over two decades (worst ratio {worst_ratio:.3}); coherence lowers entropy by {:.3e}",
            without_b - with_b
        ),
    );
}

fn entropy_exact_from(l: f64, t: f64, b: f64) -> f64 {
    cavity_entanglement::entropy::entropy_exact_from_rates(t, l, b).expect("entropy")
}

/// Purity deficit |Tr ρ² − (1 − 2t²(𝓛₁+𝓛₂))| scales as t⁴: log-log slope
/// 4 ± 0.1 over two decades.
#[test]
fn purity_expansion_slope() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x99);
    let cfg = sample_config_equal_sector(&mut rng);
    let coeffs = cfg.coefficients().expect("coefficients");
    let t_hi = 0.3 / coeffs.max_population().sqrt();
    let mut points = Vec::new();
    let mut t = t_hi;
    while t >= t_hi / 100.0 {
        let rho = rho_total(&coeffs, t).expect("state");
        let deficit = (purity(&rho) - (1.0 - 2.0 * t * t * (coeffs.l1 + coeffs.l2))).abs();
        points.push((t.ln(), deficit.ln()));
        t *= 0.75;
    }
    let n = points.len() as f64;
    let (sx, sy): (f64, f64) = points
        .iter()
        .fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (sxx, sxy): (f64, f64) = points
        .iter()
        .fold((0.0, 0.0), |a, p| (a.0 + p.0 * p.0, a.1 + p.0 * p.1));
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    assert!(
        (slope - 4.0).abs() <= 0.1,
        "log-log slope {slope:.4} outside 4 ± 0.1"
    );
    pass_line(
        "purity-expansion",
        format!(
            "purity deficit log-log slope {slope:.4} = 4 ± 0.1 over two decades ({} points)",
            points.len()
        ),
    );
}

/// Reference-point reproduction: the single-mode micron cavity with 1 meV
/// graphene electrons and d₂/L = 0.6 lands within a factor of 10 of
/// 𝓛₂ = 2.3e17 s⁻², and the window product t_max²𝓛₂ inside [0.01, 1].
/// Soft by construction (the mode volume is an assumption) but asserted at
/// the stated loose factors, with the assumption printed.
#[test]
fn reference_coupling_scale() {
    let cavity = CavityGeometry::with_default_mode_volume(1e-6, 0.4e-6, 0.6e-6, 1).expect("cavity");
    let graphene = cavity_entanglement::material::preset("graphene").expect("preset");
    let layer = |pos: f64| {
        LayerConfig::new(
            graphene.clone(),
            ElectronState::conduction(1e-3, 0.0).expect("electron"),
            pos,
        )
    };
    let coeffs = compute_coefficients_momenta(
        &layer(0.4e-6),
        &layer(0.6e-6),
        &cavity,
        &PropagatorMomenta::default(),
        &Default::default(),
    )
    .expect("coefficients");
    let target = 2.3e17;
    let window = cavity_entanglement::sweep::REFERENCE_TIME_WINDOW;
    let product = window * window * coeffs.l2;
    let ratio = coeffs.l2 / target;
    println!(
        "[INFO] mode-volume assumption: V = {:.3e} m³ (transverse area {:.3e} m² × length {:.1e} m)",
        cavity.mode_volume,
        cavity_entanglement::constants::DEFAULT_TRANSVERSE_AREA,
        cavity.length,
    );
    assert!(
        (0.1..=10.0).contains(&ratio),
        "L2 = {:.3e} s⁻² not within a factor 10 of {target:.1e}",
        coeffs.l2
    );
    assert!(
        (0.01..=1.0).contains(&product),
        "t_max² L2 = {product:.4} outside [0.01, 1]"
    );
    pass_line(
        "reference-coupling-scale",
        format!(
            "L2 = {:.4e} s⁻² ({ratio:.2}x the quoted 2.3e17), t_max²·L2 = {product:.4} ∈ [0.01, 1]",
            coeffs.l2,
        ),
    );
}

/// Figure-shape verdicts are soft: they are computed and reported, never
/// asserted individually. The hard part of the criterion is regeneration of
/// all figure datasets in under 60 s.
#[test]
fn figure_verdicts_and_regeneration() {
    let started = Instant::now();
    let mut total_rows = 0;
    for name in recipe_names() {
        let spec = figure_recipe(name).expect("recipe");
        let rows = run_sweep(&spec).expect("sweep");
        total_rows += rows.len();
        let csv = render_csv(spec.variable, &rows);
        assert!(csv.lines().count() == rows.len() + 1);
    }
    let verdicts = figure_verdicts().expect("verdicts");
    let elapsed = started.elapsed().as_secs_f64();
    assert!(!verdicts.is_empty());
    for v in &verdicts {
        println!(
            "[VERDICT] {}: {} — {} ({})",
            v.name,
            if v.passed {
                "pass"
            } else {
                "FAIL (reported, not fatal)"
            },
            v.claim,
            v.details
        );
    }
    assert!(
        elapsed < 60.0,
        "figure regeneration took {elapsed:.1}s, limit 60s"
    );
    pass_line(
        "figure-regeneration",
        format!(
            "{} recipes, {total_rows} rows and {} verdicts in {elapsed:.2}s < 60s",
            recipe_names().len(),
            verdicts.len()
        ),
    );
}

/// Identical sweep specs produce byte-identical CSV.
#[test]
fn sweep_determinism() {
    for name in ["fig2", "fig6"] {
        let spec = figure_recipe(name).expect("recipe");
        let a = render_csv(spec.variable, &run_sweep(&spec).expect("sweep"));
        let spec_again = figure_recipe(name).expect("recipe");
        let b = render_csv(spec_again.variable, &run_sweep(&spec_again).expect("sweep"));
        assert_eq!(
            a.as_bytes(),
            b.as_bytes(),
            "{name} CSV changed between runs"
        );
    }
    pass_line(
        "sweep-determinism",
        "fig2 and fig6 CSV byte-identical across regenerations".into(),
    );
}

/// The closed-form reduced state reproduces the partial trace of the full
/// matrix, and entropy reports are finite and ordered on a mid-window point.
/// (Regression guard tying the acceptance path end to end.)
#[test]
fn end_to_end_entropy_report() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x77);
    let cfg = sample_config_equal_sector(&mut rng);
    let coeffs = cfg.coefficients().expect("coefficients");
    let rho = rho_total(&coeffs, cfg.t).expect("state");
    let reduced = cavity_entanglement::density::reduce(&rho, 2).expect("partial trace");
    let closed = reduced_from_coefficients(&coeffs, cfg.t, 2, true).expect("closed reduced");
    let diff = (reduced.entries() - closed.entries())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    assert!(
        diff <= 1e-12,
        "partial trace deviates from the closed reduced form: {diff:.3e}"
    );
    let s = entropy_exact(&reduced).expect("entropy");
    assert!((0.0..=std::f64::consts::LN_2 + 1e-12).contains(&s));
    pass_line(
        "end-to-end-entropy",
        format!("partial trace matches closed reduced form ({diff:.3e}); S = {s:.6} ∈ [0, ln 2]"),
    );
}
