//! 2D material parameters and built-in presets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One honeycomb-lattice layer material: Fermi velocity and intrinsic
/// spin-orbit strength.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Material {
    /// Short identifier ("graphene", "custom", ...).
    pub name: String,
    /// Fermi velocity, m/s.
    pub fermi_velocity: f64,
    /// Intrinsic spin-orbit coupling λ_so, eV.
    pub soi_strength: f64,
}

impl Material {
    pub fn new(name: impl Into<String>, fermi_velocity: f64, soi_strength: f64) -> Result<Self> {
        if !(fermi_velocity > 0.0) || !fermi_velocity.is_finite() {
            return Err(Error::Domain(format!(
                "fermi_velocity must be > 0, got {fermi_velocity}"
            )));
        }
        if !(soi_strength >= 0.0) || !soi_strength.is_finite() {
            return Err(Error::Domain(format!(
                "soi_strength must be >= 0, got {soi_strength}"
            )));
        }
        Ok(Self {
            name: name.into(),
            fermi_velocity,
            soi_strength,
        })
    }
}

/// Where a preset value comes from. Spin-orbit strengths for silicene and
/// germanene are literature defaults, not values this crate can verify.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PresetSource {
    Reference,
    LiteraturePlaceholder,
}

/// A built-in material with provenance marking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialPreset {
    pub material: Material,
    pub source: PresetSource,
}

/// The four built-in presets.
///
/// Spin-orbit gaps: graphene 1e-6 eV and stanene 0.1 eV are reference values;
/// silicene 3.9e-3 eV and germanene 4.3e-2 eV are literature placeholders.
/// All four Fermi velocities are literature placeholders.
pub fn builtin_presets() -> Vec<MaterialPreset> {
    let m = |name: &str, vf: f64, soi: f64| Material::new(name, vf, soi).expect("builtin preset");
    vec![
        MaterialPreset {
            material: m("graphene", 1.0e6, 1.0e-6),
            source: PresetSource::Reference,
        },
        MaterialPreset {
            material: m("silicene", 5.5e5, 3.9e-3),
            source: PresetSource::LiteraturePlaceholder,
        },
        MaterialPreset {
            material: m("germanene", 5.24e5, 4.3e-2),
            source: PresetSource::LiteraturePlaceholder,
        },
        MaterialPreset {
            material: m("stanene", 4.7e5, 0.1),
            source: PresetSource::Reference,
        },
    ]
}

/// Look up a built-in preset by name (case-insensitive).
pub fn preset(name: &str) -> Option<Material> {
    let lower = name.to_ascii_lowercase();
    builtin_presets()
        .into_iter()
        .find(|p| p.material.name == lower)
        .map(|p| p.material)
}

/// Preset table serialized in config files and via the
/// `CAVENT_PRESETS` environment variable: `name -> {fermi_velocity, soi_strength}`.
#[derive(Debug, Clone, Deserialize)]
pub struct PresetFileEntry {
    pub fermi_velocity: f64,
    pub soi_strength: f64,
}

/// Load presets, overlaying entries from the TOML file at `path` (if given)
/// on top of the built-ins. File entries win on name collision.
pub fn presets_with_overrides(path: Option<&str>) -> Result<Vec<MaterialPreset>> {
    let mut out = builtin_presets();
    let Some(path) = path else {
        return Ok(out);
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read preset file {path}: {e}")))?;
    let table: std::collections::BTreeMap<String, PresetFileEntry> =
        toml::from_str(&text).map_err(|e| Error::Config(format!("preset file {path}: {e}")))?;
    for (name, entry) in table {
        let material = Material::new(
            name.to_ascii_lowercase(),
            entry.fermi_velocity,
            entry.soi_strength,
        )?;
        let preset = MaterialPreset {
            material,
            source: PresetSource::LiteraturePlaceholder,
        };
        match out
            .iter_mut()
            .find(|p| p.material.name == preset.material.name)
        {
            Some(slot) => *slot = preset,
            None => out.push(preset),
        }
    }
    Ok(out)
}

/// Environment variable naming an extra preset file.
pub const PRESET_FILE_ENV: &str = "CAVENT_PRESETS";
