//! Parameter sweeps over the entanglement measures, figure recipes and CSV
//! emission.
//!
//! A sweep is a pure function of its spec: identical specs produce
//! byte-identical CSV. Rows are ordered by index. Rows whose evolution time
//! falls outside the perturbative regime keep their propagator columns and
//! carry empty measures plus a status flag.

use serde::{Deserialize, Serialize};

use crate::cavity::CavityGeometry;
use crate::concurrence::concurrence_from_coefficients;
use crate::constants::PhysicalConstants;
use crate::density::{
    admissibility, compute_coefficients_momenta, compute_coefficients_normalized, purity,
    reduced_from_coefficients, rho_total, Admissibility, LayerConfig, PropagatorMomenta,
    RhoCoefficients,
};
use crate::electron::ElectronState;
use crate::entropy::{entropy_exact, mutual_information};
use crate::error::{Error, Result};
use crate::material::{preset, Material};
use crate::oracle::{CheckKind, CheckResult};

/// Reference evolution window used by the figure recipes, s. With the
/// default mode-volume assumption the populated fraction t²𝓛₂ reaches ≈ 0.1
/// at the end of this window for the single-mode micron-cavity
/// configuration. The literal interlayer flight time of that geometry is
/// ~6.7e-16 s; the recipes keep the longer documented window and expose it
/// as an override.
pub const REFERENCE_TIME_WINDOW: f64 = 6.6e-10;

/// Quantity swept over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    /// Evolution time t, s.
    Time,
    /// Relative position z₂/L of layer 2.
    D2OverL,
    /// Spin-orbit strength of layer 1, eV.
    LambdaSo,
    /// Relative azimuth Δφ = φ₁ − φ₂, radians.
    DeltaPhi,
    /// Mode cutoff n_max.
    NMax,
    /// Identical-material pair drawn from a preset list.
    MaterialPair,
    /// Interlayer separation |z₂ − z₁| with symmetric placement, m.
    DSeparation,
}

impl SweepVariable {
    pub fn column_name(self) -> &'static str {
        match self {
            SweepVariable::Time => "time",
            SweepVariable::D2OverL => "d2_over_L",
            SweepVariable::LambdaSo => "lambda_so",
            SweepVariable::DeltaPhi => "delta_phi",
            SweepVariable::NMax => "n_max",
            SweepVariable::MaterialPair => "material_pair",
            SweepVariable::DSeparation => "d_separation",
        }
    }
}

/// Range of sweep points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepRange {
    /// `count` points linearly spaced over [start, stop].
    Grid { start: f64, stop: f64, count: usize },
    /// `count` points logarithmically spaced over [start, stop].
    LogGrid { start: f64, stop: f64, count: usize },
    /// Explicit values.
    Values(Vec<f64>),
    /// Material preset names (only with [`SweepVariable::MaterialPair`]).
    Materials(Vec<String>),
}

/// Base configuration every sweep point is derived from.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepBase {
    pub layer1: LayerConfig,
    pub layer2: LayerConfig,
    pub cavity: CavityGeometry,
    pub momenta: PropagatorMomenta,
    /// Evaluation time for non-time sweeps, s.
    pub t: f64,
    /// Normalizing window for the time axis; defaults to the interlayer
    /// flight time when absent.
    pub t_max: Option<f64>,
    /// ζ = 1 coupling instead of the physical mode-volume coupling.
    pub normalized: bool,
    /// Keep the layers mirror-symmetric about the cavity midplane when a
    /// position variable moves one of them.
    pub symmetric_placement: bool,
}

/// A full sweep specification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub range: SweepRange,
    pub base: SweepBase,
    /// Free-text provenance notes (placeholder parameters and the like),
    /// echoed by the CLI.
    pub notes: Vec<String>,
}

/// Per-row admissibility / evaluation status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    Marginal,
    Inadmissible,
    /// The point violates a geometric or material constraint.
    Invalid,
}

impl RowStatus {
    fn label(self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::Marginal => "marginal",
            RowStatus::Inadmissible => "inadmissible",
            RowStatus::Invalid => "invalid",
        }
    }
}

/// One evaluated sweep point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub index: usize,
    pub value: f64,
    pub s1: Option<f64>,
    pub s2: Option<f64>,
    pub concurrence: Option<f64>,
    pub purity: Option<f64>,
    pub mutual_info: Option<f64>,
    pub delta11: Option<f64>,
    pub delta22: Option<f64>,
    pub delta12: Option<f64>,
    pub status: RowStatus,
}

fn sweep_points(spec: &SweepSpec) -> Result<Vec<f64>> {
    match (&spec.range, spec.variable) {
        (SweepRange::Materials(names), SweepVariable::MaterialPair) => {
            if names.is_empty() {
                return Err(Error::Spec("material list must not be empty".into()));
            }
            for name in names {
                if preset(name).is_none() {
                    return Err(Error::Spec(format!("unknown material preset `{name}`")));
                }
            }
            Ok((0..names.len()).map(|i| i as f64).collect())
        }
        (SweepRange::Materials(_), other) => Err(Error::Spec(format!(
            "a material list requires the material_pair variable, got {other:?}"
        ))),
        (_, SweepVariable::MaterialPair) => Err(Error::Spec(
            "the material_pair variable requires a material list".into(),
        )),
        (SweepRange::Grid { start, stop, count }, _) => {
            if *count < 2 {
                return Err(Error::Spec(format!(
                    "grid needs at least 2 points, got {count}"
                )));
            }
            let step = (stop - start) / (*count as f64 - 1.0);
            Ok((0..*count).map(|i| start + step * i as f64).collect())
        }
        (SweepRange::LogGrid { start, stop, count }, _) => {
            if *count < 2 {
                return Err(Error::Spec(format!(
                    "grid needs at least 2 points, got {count}"
                )));
            }
            if !(*start > 0.0 && *stop > 0.0) {
                return Err(Error::Spec("log grid endpoints must be positive".into()));
            }
            let step = (stop.ln() - start.ln()) / (*count as f64 - 1.0);
            Ok((0..*count)
                .map(|i| (start.ln() + step * i as f64).exp())
                .collect())
        }
        (SweepRange::Values(v), _) => {
            if v.is_empty() {
                return Err(Error::Spec("value list must not be empty".into()));
            }
            Ok(v.clone())
        }
    }
}

struct PointConfig {
    layer1: LayerConfig,
    layer2: LayerConfig,
    cavity: CavityGeometry,
    t: f64,
}

fn materialize(spec: &SweepSpec, value: f64) -> Result<PointConfig> {
    let base = &spec.base;
    let mut layer1 = base.layer1.clone();
    let mut layer2 = base.layer2.clone();
    let mut cavity = base.cavity.clone();
    let mut t = base.t;
    match spec.variable {
        SweepVariable::Time => t = value,
        SweepVariable::D2OverL => {
            let z2 = value * cavity.length;
            let z1 = if base.symmetric_placement {
                cavity.length - z2
            } else {
                cavity.z1
            };
            cavity = CavityGeometry::new(
                cavity.length,
                z1,
                z2,
                cavity.n_max,
                cavity.light_speed,
                cavity.mode_volume,
            )?;
            layer1.position = z1;
            layer2.position = z2;
        }
        SweepVariable::DSeparation => {
            let z1 = 0.5 * (cavity.length - value);
            let z2 = 0.5 * (cavity.length + value);
            cavity = CavityGeometry::new(
                cavity.length,
                z1,
                z2,
                cavity.n_max,
                cavity.light_speed,
                cavity.mode_volume,
            )?;
            layer1.position = z1;
            layer2.position = z2;
        }
        SweepVariable::LambdaSo => {
            layer1.material = Material::new(
                layer1.material.name.clone(),
                layer1.material.fermi_velocity,
                value,
            )?;
        }
        SweepVariable::DeltaPhi => {
            layer1.electron = ElectronState::new(
                layer1.electron.energy,
                layer2.electron.angle + value,
                layer1.electron.spin,
                layer1.electron.valley,
                layer1.electron.band,
            )?;
        }
        SweepVariable::NMax => {
            let n = value.round();
            if n < 1.0 || (n - value).abs() > 1e-9 {
                return Err(Error::Spec(format!(
                    "n_max sweep values must be positive integers, got {value}"
                )));
            }
            cavity = CavityGeometry::new(
                cavity.length,
                cavity.z1,
                cavity.z2,
                n as u32,
                cavity.light_speed,
                cavity.mode_volume,
            )?;
        }
        SweepVariable::MaterialPair => {
            let names = match &spec.range {
                SweepRange::Materials(names) => names,
                _ => {
                    return Err(Error::Spec(
                        "material_pair sweep without material list".into(),
                    ))
                }
            };
            let name = &names[value as usize];
            let material = preset(name)
                .ok_or_else(|| Error::Spec(format!("unknown material preset `{name}`")))?;
            layer1.material = material.clone();
            layer2.material = material;
        }
    }
    Ok(PointConfig {
        layer1,
        layer2,
        cavity,
        t,
    })
}

fn coefficients_for(base: &SweepBase, point: &PointConfig) -> Result<RhoCoefficients> {
    if base.normalized {
        compute_coefficients_normalized(&point.layer1, &point.layer2, &point.cavity, &base.momenta)
    } else {
        compute_coefficients_momenta(
            &point.layer1,
            &point.layer2,
            &point.cavity,
            &base.momenta,
            &PhysicalConstants::default(),
        )
    }
}

fn evaluate_point(spec: &SweepSpec, index: usize, value: f64) -> SweepRow {
    let mut row = SweepRow {
        index,
        value,
        s1: None,
        s2: None,
        concurrence: None,
        purity: None,
        mutual_info: None,
        delta11: None,
        delta22: None,
        delta12: None,
        status: RowStatus::Invalid,
    };
    let Ok(point) = materialize(spec, value) else {
        return row;
    };
    let base = &spec.base;
    if let (Ok(d11), Ok(d22), Ok(d12)) = (
        point.cavity.photon_propagator(
            point.layer1.position,
            point.layer1.position,
            base.momenta.q11,
        ),
        point.cavity.photon_propagator(
            point.layer2.position,
            point.layer2.position,
            base.momenta.q22,
        ),
        point.cavity.photon_propagator(
            point.layer1.position,
            point.layer2.position,
            base.momenta.q12,
        ),
    ) {
        row.delta11 = Some(d11);
        row.delta22 = Some(d22);
        row.delta12 = Some(d12);
    } else {
        return row;
    }
    let Ok(coeffs) = coefficients_for(base, &point) else {
        return row;
    };
    row.status = match admissibility(&coeffs, point.t) {
        Admissibility::Inadmissible => {
            return SweepRow {
                status: RowStatus::Inadmissible,
                ..row
            };
        }
        Admissibility::Marginal => RowStatus::Marginal,
        Admissibility::Ok => RowStatus::Ok,
    };
    let measures = (|| -> Result<(f64, f64, f64, f64, f64)> {
        let s1 = entropy_exact(&reduced_from_coefficients(&coeffs, point.t, 1, true)?)?;
        let s2 = entropy_exact(&reduced_from_coefficients(&coeffs, point.t, 2, true)?)?;
        let rho = rho_total(&coeffs, point.t)?;
        let pur = purity(&rho);
        let conc = if point.layer1.electron.spin == point.layer2.electron.spin
            && point.layer1.electron.band == point.layer2.electron.band
        {
            concurrence_from_coefficients(&coeffs, point.t)
        } else {
            0.0
        };
        let mi = mutual_information(s1, s2)?;
        Ok((s1, s2, conc, pur, mi))
    })();
    match measures {
        Ok((s1, s2, conc, pur, mi)) => {
            row.s1 = Some(s1);
            row.s2 = Some(s2);
            row.concurrence = Some(conc);
            row.purity = Some(pur);
            row.mutual_info = Some(mi);
        }
        Err(_) => {
            row.status = RowStatus::Invalid;
        }
    }
    row
}

/// Evaluate every sweep point, in index order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let points = sweep_points(spec)?;
    Ok(points
        .iter()
        .enumerate()
        .map(|(i, v)| evaluate_point(spec, i, *v))
        .collect())
}

fn fmt_sig12(x: f64) -> String {
    format!("{x:.11e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_sig12).unwrap_or_default()
}

/// Render rows as CSV: header naming the columns, floats with 12 significant
/// digits, LF line endings.
pub fn render_csv(variable: SweepVariable, rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(rows.len() * 160 + 128);
    out.push_str(
        "sweep_var,value,S1_nats,S2_nats,concurrence,purity,mutual_info,delta11,delta22,delta12,status\n",
    );
    for row in rows {
        out.push_str(variable.column_name());
        out.push(',');
        out.push_str(&fmt_sig12(row.value));
        out.push(',');
        out.push_str(&fmt_opt(row.s1));
        out.push(',');
        out.push_str(&fmt_opt(row.s2));
        out.push(',');
        out.push_str(&fmt_opt(row.concurrence));
        out.push(',');
        out.push_str(&fmt_opt(row.purity));
        out.push(',');
        out.push_str(&fmt_opt(row.mutual_info));
        out.push(',');
        out.push_str(&fmt_opt(row.delta11));
        out.push(',');
        out.push_str(&fmt_opt(row.delta22));
        out.push(',');
        out.push_str(&fmt_opt(row.delta12));
        out.push(',');
        out.push_str(row.status.label());
        out.push('\n');
    }
    out
}

const RECIPE_NAMES: [&str; 9] = [
    "fig2", "fig3a", "fig3b", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9",
];

/// Names of the built-in figure recipes.
pub fn recipe_names() -> &'static [&'static str; 9] {
    &RECIPE_NAMES
}

fn micron_cavity(d2_over_l: f64, n_max: u32) -> Result<CavityGeometry> {
    let length = 1e-6;
    CavityGeometry::with_default_mode_volume(
        length,
        (1.0 - d2_over_l) * length,
        d2_over_l * length,
        n_max,
    )
}

fn recipe_layer(
    material_name: &str,
    energy: f64,
    angle: f64,
    position: f64,
) -> Result<LayerConfig> {
    let material = preset(material_name)
        .ok_or_else(|| Error::Spec(format!("unknown material preset `{material_name}`")))?;
    Ok(LayerConfig::new(
        material,
        ElectronState::conduction(energy, angle)?,
        position,
    ))
}

fn recipe_base(
    material1: &str,
    material2: &str,
    d2_over_l: f64,
    n_max: u32,
    dphi: f64,
    t: f64,
) -> Result<SweepBase> {
    let cavity = micron_cavity(d2_over_l, n_max)?;
    let energy = 1e-3;
    Ok(SweepBase {
        layer1: recipe_layer(material1, energy, dphi, cavity.z1)?,
        layer2: recipe_layer(material2, energy, 0.0, cavity.z2)?,
        cavity,
        momenta: PropagatorMomenta::default(),
        t,
        t_max: Some(REFERENCE_TIME_WINDOW),
        normalized: false,
        symmetric_placement: true,
    })
}

/// A fully populated sweep spec for one of the built-in figure datasets.
///
/// Where the underlying configuration is documented the recipe pins it
/// (micron cavity, 1 meV electrons, d₂/L = 0.6, the reference time window);
/// everything else is a placeholder recorded in `notes`.
pub fn figure_recipe(name: &str) -> Result<SweepSpec> {
    let t_max = REFERENCE_TIME_WINDOW;
    let grid = |start: f64, stop: f64| SweepRange::Grid {
        start,
        stop,
        count: 200,
    };
    match name {
        "fig2" => Ok(SweepSpec {
            variable: SweepVariable::Time,
            range: grid(0.0, t_max),
            base: recipe_base("graphene", "graphene", 0.6, 1, 0.0, t_max)?,
            notes: vec![
                "entropy growth over the evolution window for a graphene pair".into(),
                "reference configuration: 1 meV electrons, single mode, d2/L = 0.6, default mode-volume assumption".into(),
            ],
        }),
        "fig3a" => Ok(SweepSpec {
            variable: SweepVariable::D2OverL,
            range: grid(0.02, 0.98),
            base: recipe_base("silicene", "silicene", 0.6, 3, 0.0, t_max)?,
            notes: vec![
                "entropy versus layer-2 position for a silicene pair, symmetric placement".into(),
                "placeholder: n_max = 3 stands in for the family of cutoff curves".into(),
            ],
        }),
        "fig3b" => Ok(SweepSpec {
            variable: SweepVariable::DSeparation,
            range: grid(0.04e-6, 0.8e-6),
            base: recipe_base("silicene", "silicene", 0.6, 1, 0.0, t_max)?,
            notes: vec![
                "entropy versus interlayer separation at the end of the window, symmetric placement".into(),
                "the separation family of time curves is collapsed onto a separation axis at t = t_max".into(),
            ],
        }),
        "fig4" => Ok(SweepSpec {
            variable: SweepVariable::LambdaSo,
            range: SweepRange::LogGrid { start: 1e-6, stop: 0.1, count: 200 },
            base: recipe_base("graphene", "graphene", 0.6, 1, 0.0, t_max)?,
            notes: vec![
                "entropy of the swept layer versus its spin-orbit strength".into(),
                "placeholder: graphene Fermi velocity; other materials are the same sweep with their velocity".into(),
            ],
        }),
        "fig5" => Ok(SweepSpec {
            variable: SweepVariable::MaterialPair,
            range: SweepRange::Materials(vec![
                "graphene".into(),
                "silicene".into(),
                "germanene".into(),
                "stanene".into(),
            ]),
            base: recipe_base("graphene", "graphene", 0.6, 1, 0.0, t_max)?,
            notes: vec![
                "identical-material pairs compared at the end of the window".into(),
                "silicene/germanene gaps and all Fermi velocities are literature placeholders".into(),
            ],
        }),
        "fig6" => Ok(SweepSpec {
            variable: SweepVariable::DeltaPhi,
            range: grid(0.0, std::f64::consts::PI),
            base: recipe_base("graphene", "silicene", 0.6, 3, 0.0, t_max)?,
            notes: vec![
                "concurrence versus relative momentum azimuth for graphene-silicene".into(),
                "placeholder: n_max = 3 stands in for the family of cutoff curves".into(),
            ],
        }),
        "fig7" => Ok(SweepSpec {
            variable: SweepVariable::LambdaSo,
            range: SweepRange::Grid { start: 7.8e-4, stop: 7.8e-3, count: 300 },
            base: recipe_base("graphene", "silicene", 0.6, 1, std::f64::consts::FRAC_PI_2, t_max)?,
            notes: vec![
                "concurrence versus the weak layer's spin-orbit strength against a silicene partner".into(),
                "window brackets the saturation threshold (equal energies: the partner gap, 3.9e-3 eV)".into(),
                "placeholder: relative azimuth fixed at the concurrence maximum".into(),
            ],
        }),
        "fig8" => Ok(SweepSpec {
            variable: SweepVariable::LambdaSo,
            range: SweepRange::Grid { start: 8.6e-3, stop: 8.6e-2, count: 300 },
            base: recipe_base("graphene", "germanene", 0.6, 1, std::f64::consts::FRAC_PI_2, t_max)?,
            notes: vec![
                "concurrence versus the weak layer's spin-orbit strength against a germanene partner".into(),
                "window brackets the saturation threshold (equal energies: the partner gap, 4.3e-2 eV)".into(),
                "the stanene pairing is the same sweep with the partner preset swapped".into(),
            ],
        }),
        "fig9" => Ok(SweepSpec {
            variable: SweepVariable::D2OverL,
            range: grid(0.02, 0.98),
            base: recipe_base("graphene", "silicene", 0.6, 2, 0.0, t_max)?,
            notes: vec![
                "concurrence versus layer positions with mirror-symmetric placement".into(),
                "placeholder: n_max = 2 stands in for the family of cutoff curves".into(),
            ],
        }),
        other => Err(Error::UnknownRecipe { name: other.into(), available: RECIPE_NAMES.join(", ") }),
    }
}

/// Outcome of one post-sweep claim check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub claim: String,
    pub passed: bool,
    pub details: String,
}

impl Verdict {
    pub fn into_check(self) -> CheckResult {
        CheckResult {
            name: self.name,
            kind: CheckKind::Soft,
            passed: Some(self.passed),
            max_residual: 0.0,
            cases: 1,
            details: format!("{} — {}", self.claim, self.details),
        }
    }
}

fn values_of<F: Fn(&SweepRow) -> Option<f64>>(rows: &[SweepRow], f: F) -> Vec<(f64, f64)> {
    rows.iter()
        .filter_map(|r| f(r).map(|y| (r.value, y)))
        .collect()
}

fn monotone_nondecreasing(series: &[(f64, f64)]) -> bool {
    series.windows(2).all(|w| w[1].1 >= w[0].1 - 1e-15)
}

/// First sweep point where the curve has reached its final value to within
/// 1e-9 relative. Above the critical gap the concurrence is exactly constant
/// (the weak layer's gap drops out of the closed form), so the onset of that
/// plateau locates the knee far more robustly than a curvature scan, whose
/// grid-step signal competes with the concave rise before the knee.
fn saturation_onset(series: &[(f64, f64)]) -> Option<f64> {
    if series.len() < 5 {
        return None;
    }
    let last = series.last()?.1;
    let first = series.first()?.1;
    if !(last > first) {
        return None;
    }
    series
        .iter()
        .find(|(_, y)| (last - y).abs() <= 1e-9 * last.abs())
        .map(|(x, _)| *x)
}

/// Evaluate the claim checks the figure datasets are expected to satisfy.
/// Each is reported, never asserted: several underlying parameters are
/// placeholders, so a failed claim is information, not an error.
pub fn figure_verdicts() -> Result<Vec<Verdict>> {
    let mut out = Vec::new();

    // concurrence maximal at right angle
    {
        let spec = figure_recipe("fig6")?;
        let rows = run_sweep(&spec)?;
        let series = values_of(&rows, |r| r.concurrence);
        let (argmax, _) =
            series.iter().fold(
                (0.0, f64::MIN),
                |acc, (x, y)| if *y > acc.1 { (*x, *y) } else { acc },
            );
        let step = series.get(1).map(|p| p.0 - series[0].0).unwrap_or(1.0);
        let target = std::f64::consts::FRAC_PI_2;
        out.push(Verdict {
            name: "concurrence-max-at-right-angle".into(),
            claim: "concurrence versus relative azimuth peaks at pi/2".into(),
            passed: (argmax - target).abs() <= step * 1.5,
            details: format!("argmax {argmax:.6} vs pi/2 = {target:.6}, grid step {step:.3e}"),
        });
    }

    // entropy monotone in the mode cutoff
    {
        let base = figure_recipe("fig2")?.base;
        let spec = SweepSpec {
            variable: SweepVariable::NMax,
            range: SweepRange::Values((1..=6).map(|n| n as f64).collect()),
            base,
            notes: vec![],
        };
        let rows = run_sweep(&spec)?;
        let series = values_of(&rows, |r| r.s2);
        out.push(Verdict {
            name: "entropy-monotone-in-cutoff".into(),
            claim: "entropy grows with the mode cutoff at fixed geometry".into(),
            passed: series.len() == 6 && monotone_nondecreasing(&series),
            details: format!("S2 over n_max 1..6: {series:?}"),
        });
    }

    // entropy grows as the layers approach each other
    {
        let spec = figure_recipe("fig3b")?;
        let rows = run_sweep(&spec)?;
        let series = values_of(&rows, |r| r.s2);
        let decreasing = series.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-15);
        out.push(Verdict {
            name: "entropy-grows-at-short-separation".into(),
            claim: "entropy decreases with interlayer separation (symmetric placement)".into(),
            passed: series.len() > 10 && decreasing,
            details: format!(
                "S2 from {:.3e} at separation {:.3e} m to {:.3e} at {:.3e} m",
                series.first().map(|p| p.1).unwrap_or(f64::NAN),
                series.first().map(|p| p.0).unwrap_or(f64::NAN),
                series.last().map(|p| p.1).unwrap_or(f64::NAN),
                series.last().map(|p| p.0).unwrap_or(f64::NAN),
            ),
        });
    }

    // entropy grows with spin-orbit strength
    {
        let spec = figure_recipe("fig4")?;
        let rows = run_sweep(&spec)?;
        let series = values_of(&rows, |r| r.s1);
        out.push(Verdict {
            name: "entropy-grows-with-soi".into(),
            claim: "entropy of the swept layer grows with its spin-orbit strength".into(),
            passed: series.len() > 10 && monotone_nondecreasing(&series),
            details: format!(
                "S1 from {:.6e} to {:.6e} over the gap range",
                series.first().map(|p| p.1).unwrap_or(f64::NAN),
                series.last().map(|p| p.1).unwrap_or(f64::NAN),
            ),
        });
    }

    // material ordering of the entropy
    {
        let spec = figure_recipe("fig5")?;
        let rows = run_sweep(&spec)?;
        let series = values_of(&rows, |r| r.s2);
        let strictly_decreasing = series.windows(2).all(|w| w[1].1 < w[0].1);
        out.push(Verdict {
            name: "material-ordering".into(),
            claim: "graphene > silicene > germanene > stanene in entanglement entropy".into(),
            passed: series.len() == 4 && strictly_decreasing,
            details: format!("S2 per material (listed order): {series:?}"),
        });
    }

    // saturation knee at the critical gap, both heterostructure sweeps
    for (recipe, partner_gap) in [("fig7", 3.9e-3), ("fig8", 4.3e-2)] {
        let spec = figure_recipe(recipe)?;
        let rows = run_sweep(&spec)?;
        let series = values_of(&rows, |r| r.concurrence);
        // equal electron energies in both layers: threshold = partner gap
        let threshold = partner_gap;
        let knee = saturation_onset(&series);
        let passed = knee
            .map(|k| (k - threshold).abs() <= 0.1 * threshold)
            .unwrap_or(false);
        out.push(Verdict {
            name: format!("saturation-knee-{recipe}"),
            claim: "concurrence grows with the weak gap and saturates exactly at the critical gap"
                .into(),
            passed,
            details: format!("plateau onset at {knee:?} eV vs threshold {threshold:.3e} eV (±10%)"),
        });
    }

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recipes_all_resolve() {
        for name in recipe_names() {
            let spec = figure_recipe(name).unwrap();
            assert!(
                !spec.notes.is_empty(),
                "{name} should document its provenance"
            );
        }
        assert!(matches!(
            figure_recipe("fig1"),
            Err(Error::UnknownRecipe { .. })
        ));
    }

    #[test]
    fn time_sweep_starts_at_zero_entanglement() {
        let spec = figure_recipe("fig2").unwrap();
        let rows = run_sweep(&spec).unwrap();
        assert_eq!(rows.len(), 200);
        let first = &rows[0];
        assert_eq!(first.status, RowStatus::Ok);
        assert_eq!(first.s2, Some(0.0));
        assert_eq!(first.concurrence, Some(0.0));
        assert_eq!(first.purity, Some(1.0));
        // and the window end stays perturbative
        assert!(rows.iter().all(|r| r.status == RowStatus::Ok));
    }

    #[test]
    fn position_sweep_peaks_at_the_midplane() {
        // single-mode antinode at d2/L = 0.5
        let mut spec = figure_recipe("fig3a").unwrap();
        spec.base.cavity =
            CavityGeometry::with_default_mode_volume(1e-6, 0.4e-6, 0.6e-6, 1).unwrap();
        let rows = run_sweep(&spec).unwrap();
        let best = rows
            .iter()
            .max_by(|a, b| a.s2.partial_cmp(&b.s2).unwrap())
            .unwrap();
        assert!((best.value - 0.5).abs() < 0.01, "peak at {}", best.value);
    }

    #[test]
    fn inadmissible_rows_carry_empty_measures() {
        let mut spec = figure_recipe("fig2").unwrap();
        // stretch the time axis far beyond the window
        spec.range = SweepRange::Grid {
            start: 0.0,
            stop: 60.0 * REFERENCE_TIME_WINDOW,
            count: 24,
        };
        let rows = run_sweep(&spec).unwrap();
        let bad: Vec<_> = rows
            .iter()
            .filter(|r| r.status == RowStatus::Inadmissible)
            .collect();
        assert!(!bad.is_empty());
        for row in bad {
            assert!(row.s1.is_none() && row.concurrence.is_none());
            assert!(
                row.delta12.is_some(),
                "propagators stay on inadmissible rows"
            );
        }
    }

    #[test]
    fn csv_is_deterministic_and_shaped() {
        let spec = figure_recipe("fig6").unwrap();
        let a = render_csv(spec.variable, &run_sweep(&spec).unwrap());
        let b = render_csv(spec.variable, &run_sweep(&spec).unwrap());
        assert_eq!(a, b);
        let mut lines = a.lines();
        assert_eq!(
            lines.next().unwrap(),
            "sweep_var,value,S1_nats,S2_nats,concurrence,purity,mutual_info,delta11,delta22,delta12,status"
        );
        let first = lines.next().unwrap();
        assert!(first.starts_with("delta_phi,0"));
        assert_eq!(first.split(',').count(), 11);
        assert!(!a.contains('\r'));
    }

    #[test]
    fn material_sweep_is_ordered_as_listed() {
        let spec = figure_recipe("fig5").unwrap();
        let rows = run_sweep(&spec).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].value, 0.0);
        assert_eq!(rows[3].value, 3.0);
        assert!(rows.iter().all(|r| r.status == RowStatus::Ok));
    }

    #[test]
    fn delta_phi_sweep_on_identical_silicene_peaks_at_right_angle() {
        let mut spec = figure_recipe("fig6").unwrap();
        spec.base.layer1.material = preset("silicene").unwrap();
        spec.base.layer2.material = preset("silicene").unwrap();
        let rows = run_sweep(&spec).unwrap();
        let best = rows
            .iter()
            .max_by(|a, b| a.concurrence.partial_cmp(&b.concurrence).unwrap())
            .unwrap();
        assert!(
            (best.value - std::f64::consts::FRAC_PI_2).abs() < 0.02,
            "peak at {}",
            best.value
        );
    }
}
