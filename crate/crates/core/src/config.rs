//! Run configuration: strict TOML parsing (unknown keys are errors), full
//! validation against the domain types, and a resolved echo that makes every
//! applied default explicit.

use serde::Deserialize;

use crate::cavity::CavityGeometry;
use crate::constants::{DEFAULT_TRANSVERSE_AREA, SPEED_OF_LIGHT};
use crate::density::{LayerConfig, PropagatorMomenta};
use crate::electron::{ElectronState, Sign};
use crate::error::{Error, Result};
use crate::material::{presets_with_overrides, Material, MaterialPreset, PRESET_FILE_ENV};
use crate::sweep::{SweepBase, SweepRange, SweepSpec, SweepVariable};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    cavity: RawCavity,
    layer1: RawLayer,
    layer2: RawLayer,
    propagator: Option<RawPropagator>,
    time: Option<RawTime>,
    units: Option<RawUnits>,
    sweep: Option<RawSweep>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCavity {
    length: f64,
    z1: f64,
    z2: f64,
    n_max: Option<u32>,
    light_speed: Option<f64>,
    mode_volume: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLayer {
    material: Option<String>,
    fermi_velocity: Option<f64>,
    soi_strength: Option<f64>,
    energy: f64,
    angle: Option<f64>,
    spin: Option<i64>,
    valley: Option<i64>,
    band: Option<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPropagator {
    q11: Option<f64>,
    q22: Option<f64>,
    q12: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTime {
    t: Option<f64>,
    t_max: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawUnits {
    system: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    variable: String,
    start: Option<f64>,
    stop: Option<f64>,
    count: Option<usize>,
    log: Option<bool>,
    values: Option<Vec<f64>>,
    materials: Option<Vec<String>>,
    symmetric_placement: Option<bool>,
}

/// Fully validated run configuration with every default resolved.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub cavity: CavityGeometry,
    pub layer1: LayerConfig,
    pub layer2: LayerConfig,
    pub momenta: PropagatorMomenta,
    /// Single evaluation time, s, when the config provides one.
    pub t: Option<f64>,
    /// Override for the time-axis window.
    pub t_max: Option<f64>,
    /// ζ = 1 coupling instead of the mode-volume coupling.
    pub normalized: bool,
    sweep: Option<SweepSectionResolved>,
    /// Keys that were filled with defaults, in echo order.
    pub defaults_applied: Vec<String>,
}

#[derive(Debug, Clone)]
struct SweepSectionResolved {
    variable: SweepVariable,
    range: SweepRange,
    symmetric_placement: bool,
}

fn parse_variable(name: &str) -> Result<SweepVariable> {
    Ok(match name {
        "time" => SweepVariable::Time,
        "d2_over_l" | "d2_over_L" => SweepVariable::D2OverL,
        "lambda_so" => SweepVariable::LambdaSo,
        "delta_phi" => SweepVariable::DeltaPhi,
        "n_max" => SweepVariable::NMax,
        "material_pair" => SweepVariable::MaterialPair,
        "d_separation" => SweepVariable::DSeparation,
        other => {
            return Err(Error::Config(format!(
                "[sweep] unknown variable `{other}` (expected time, d2_over_l, lambda_so, delta_phi, n_max, material_pair or d_separation)"
            )))
        }
    })
}

fn resolve_layer(
    section: &str,
    raw: &RawLayer,
    presets: &[MaterialPreset],
    position: f64,
    defaults: &mut Vec<String>,
) -> Result<LayerConfig> {
    let material = match (&raw.material, raw.fermi_velocity, raw.soi_strength) {
        (Some(name), None, None) => presets
            .iter()
            .find(|p| p.material.name == name.to_ascii_lowercase())
            .map(|p| p.material.clone())
            .ok_or_else(|| Error::Config(format!("[{section}] unknown material preset `{name}`")))?,
        (None, Some(vf), Some(soi)) => Material::new("custom", vf, soi)
            .map_err(|e| Error::Config(format!("[{section}] {e}")))?,
        (Some(_), _, _) => {
            return Err(Error::Config(format!(
                "[{section}] give either `material` or explicit fermi_velocity + soi_strength, not both"
            )))
        }
        _ => {
            return Err(Error::Config(format!(
                "[{section}] needs `material` or both fermi_velocity and soi_strength"
            )))
        }
    };
    let sign_of = |key: &str, v: Option<i64>, defaults: &mut Vec<String>| -> Result<Sign> {
        match v {
            Some(i) => {
                Sign::from_int(i).map_err(|e| Error::Config(format!("[{section}] {key}: {e}")))
            }
            None => {
                defaults.push(format!("{section}.{key} = 1"));
                Ok(Sign::Plus)
            }
        }
    };
    let angle = raw.angle.unwrap_or_else(|| {
        defaults.push(format!("{section}.angle = 0"));
        0.0
    });
    let spin = sign_of("spin", raw.spin, defaults)?;
    let valley = sign_of("valley", raw.valley, defaults)?;
    let band = sign_of("band", raw.band, defaults)?;
    let electron = ElectronState::new(raw.energy, angle, spin, valley, band)
        .map_err(|e| Error::Config(format!("[{section}] {e}")))?;
    Ok(LayerConfig::new(material, electron, position))
}

/// Parse and validate a config document.
///
/// Unknown sections or keys, type mismatches and constraint violations are
/// all errors; syntax and schema errors carry the line number reported by
/// the TOML parser. Material presets may be extended through the file named
/// by the `CAVENT_PRESETS` environment variable.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let preset_path = std::env::var(PRESET_FILE_ENV).ok();
    let presets = presets_with_overrides(preset_path.as_deref())?;
    parse_config_with_presets(text, &presets)
}

/// [`parse_config`] against an explicit preset table.
pub fn parse_config_with_presets(text: &str, presets: &[MaterialPreset]) -> Result<RunConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let mut defaults = Vec::new();

    let normalized = match raw.units.as_ref().and_then(|u| u.system.as_deref()) {
        None => {
            defaults.push("units.system = \"si\"".into());
            false
        }
        Some("si") => false,
        Some("normalized") => true,
        Some(other) => {
            return Err(Error::Config(format!(
                "[units] system must be \"si\" or \"normalized\", got \"{other}\""
            )))
        }
    };

    if normalized && raw.cavity.mode_volume.is_some() {
        return Err(Error::Config(
            "[cavity] mode_volume conflicts with units.system = \"normalized\" (the normalized coupling never uses it)".into(),
        ));
    }

    let light_speed = raw.cavity.light_speed.unwrap_or_else(|| {
        let v = if normalized { 1.0 } else { SPEED_OF_LIGHT };
        defaults.push(format!("cavity.light_speed = {v}"));
        v
    });
    let mode_volume = match raw.cavity.mode_volume {
        Some(v) => v,
        None if normalized => {
            defaults.push("cavity.mode_volume = 1 (unused in normalized mode)".into());
            1.0
        }
        None => {
            let v = DEFAULT_TRANSVERSE_AREA * raw.cavity.length;
            defaults.push(format!(
                "cavity.mode_volume = {v:e} (transverse area {DEFAULT_TRANSVERSE_AREA:e} m^2 x length)"
            ));
            v
        }
    };
    let n_max = raw.cavity.n_max.unwrap_or_else(|| {
        defaults.push("cavity.n_max = 1".into());
        1
    });
    let cavity = CavityGeometry::new(
        raw.cavity.length,
        raw.cavity.z1,
        raw.cavity.z2,
        n_max,
        light_speed,
        mode_volume,
    )
    .map_err(|e| Error::Config(format!("[cavity] {e}")))?;

    let layer1 = resolve_layer("layer1", &raw.layer1, presets, cavity.z1, &mut defaults)?;
    let layer2 = resolve_layer("layer2", &raw.layer2, presets, cavity.z2, &mut defaults)?;

    let momenta = match &raw.propagator {
        Some(p) => {
            let q = |key: &str, v: Option<f64>, defaults: &mut Vec<String>| {
                v.unwrap_or_else(|| {
                    defaults.push(format!("propagator.{key} = 0"));
                    0.0
                })
            };
            PropagatorMomenta {
                q11: q("q11", p.q11, &mut defaults),
                q22: q("q22", p.q22, &mut defaults),
                q12: q("q12", p.q12, &mut defaults),
            }
        }
        None => {
            defaults.push("propagator.q11 = propagator.q22 = propagator.q12 = 0".into());
            PropagatorMomenta::default()
        }
    };
    for (key, q) in [
        ("q11", momenta.q11),
        ("q22", momenta.q22),
        ("q12", momenta.q12),
    ] {
        if !(q >= 0.0) {
            return Err(Error::Config(format!(
                "[propagator] {key} must be >= 0, got {q}"
            )));
        }
    }

    let (t, t_max) = match &raw.time {
        Some(time) => (time.t, time.t_max),
        None => (None, None),
    };
    if let Some(t) = t {
        if !(t >= 0.0) {
            return Err(Error::Config(format!("[time] t must be >= 0, got {t}")));
        }
    }
    if let Some(tm) = t_max {
        if !(tm > 0.0) {
            return Err(Error::Config(format!("[time] t_max must be > 0, got {tm}")));
        }
    }

    let sweep = match &raw.sweep {
        None => None,
        Some(raw_sweep) => Some(resolve_sweep(raw_sweep, &mut defaults)?),
    };

    Ok(RunConfig {
        cavity,
        layer1,
        layer2,
        momenta,
        t,
        t_max,
        normalized,
        sweep,
        defaults_applied: defaults,
    })
}

fn resolve_sweep(raw: &RawSweep, defaults: &mut Vec<String>) -> Result<SweepSectionResolved> {
    let variable = parse_variable(&raw.variable)?;
    let range = match (&raw.values, &raw.materials) {
        (Some(values), None) => SweepRange::Values(values.clone()),
        (None, Some(materials)) => SweepRange::Materials(materials.clone()),
        (Some(_), Some(_)) => {
            return Err(Error::Config(
                "[sweep] give values or materials, not both".into(),
            ))
        }
        (None, None) => {
            let (Some(start), Some(stop)) = (raw.start, raw.stop) else {
                return Err(Error::Config(
                    "[sweep] needs start and stop (or a values/materials list)".into(),
                ));
            };
            let count = raw.count.unwrap_or_else(|| {
                defaults.push("sweep.count = 200".into());
                200
            });
            if raw.log.unwrap_or(false) {
                SweepRange::LogGrid { start, stop, count }
            } else {
                SweepRange::Grid { start, stop, count }
            }
        }
    };
    let symmetric_placement = raw.symmetric_placement.unwrap_or_else(|| {
        defaults.push("sweep.symmetric_placement = false".into());
        false
    });
    Ok(SweepSectionResolved {
        variable,
        range,
        symmetric_placement,
    })
}

impl RunConfig {
    /// Whether the document carried a [sweep] section.
    pub fn has_sweep(&self) -> bool {
        self.sweep.is_some()
    }

    /// Build the sweep spec from the [sweep] section.
    pub fn sweep_spec(&self) -> Result<SweepSpec> {
        let section = self
            .sweep
            .as_ref()
            .ok_or_else(|| Error::Config("config has no [sweep] section".into()))?;
        Ok(SweepSpec {
            variable: section.variable,
            range: section.range.clone(),
            base: SweepBase {
                layer1: self.layer1.clone(),
                layer2: self.layer2.clone(),
                cavity: self.cavity.clone(),
                momenta: self.momenta,
                t: self.t.unwrap_or(0.0),
                t_max: self.t_max,
                normalized: self.normalized,
                symmetric_placement: section.symmetric_placement,
            },
            notes: vec!["sweep defined by config file".into()],
        })
    }

    /// The time-axis window: explicit override, else the interlayer flight
    /// time.
    pub fn time_window(&self) -> Result<f64> {
        match self.t_max {
            Some(t) => Ok(t),
            None => self.cavity.time_of_flight(),
        }
    }

    /// Deterministic listing of the fully resolved configuration, suitable
    /// for echoing before results.
    pub fn echo(&self) -> String {
        let mut out = String::new();
        let layer = |name: &str, l: &LayerConfig, out: &mut String| {
            out.push_str(&format!(
                "{name}: material = {} (v_f = {} m/s, lambda_so = {} eV), energy = {} eV, angle = {} rad, spin = {}, valley = {}, band = {}, position = {} m\n",
                l.material.name,
                l.material.fermi_velocity,
                l.material.soi_strength,
                l.electron.energy,
                l.electron.angle,
                l.electron.spin,
                l.electron.valley,
                l.electron.band,
                l.position,
            ));
        };
        out.push_str(&format!(
            "cavity: length = {} m, z1 = {} m, z2 = {} m, n_max = {}, light_speed = {} m/s, mode_volume = {} m^3\n",
            self.cavity.length,
            self.cavity.z1,
            self.cavity.z2,
            self.cavity.n_max,
            self.cavity.light_speed,
            self.cavity.mode_volume,
        ));
        layer("layer1", &self.layer1, &mut out);
        layer("layer2", &self.layer2, &mut out);
        out.push_str(&format!(
            "propagator: q11 = {} 1/m, q22 = {} 1/m, q12 = {} 1/m\n",
            self.momenta.q11, self.momenta.q22, self.momenta.q12
        ));
        out.push_str(&format!(
            "time: t = {}, t_max = {}\n",
            self.t
                .map(|v| format!("{v} s"))
                .unwrap_or_else(|| "unset".into()),
            self.t_max
                .map(|v| format!("{v} s"))
                .unwrap_or_else(|| "flight time".into()),
        ));
        out.push_str(&format!(
            "units: {}\n",
            if self.normalized {
                "normalized (zeta = 1)"
            } else {
                "si"
            }
        ));
        if !self.defaults_applied.is_empty() {
            out.push_str("defaults applied:\n");
            for d in &self.defaults_applied {
                out.push_str(&format!("  {d}\n"));
            }
        }
        out
    }
}
