//! Run configuration: a single JSON document (plus `--set key=value`
//! overrides applied after parsing) validated into a complete description
//! of one computation.

use std::error::Error;
use std::fmt;

use serde::{Deserialize, Serialize};

use abspec::coil::ToroidSpec;
use abspec::constants::PhysicalConstants;
use abspec::molecule::MoleculeSpec;
use abspec::oscillator::CouplingParams;
use abspec::spectrum::{OrientationEnsemble, ProfileMode, SamplingScheme};

/// Default orientation-ensemble size for the spectrum command.
pub const DEFAULT_N_SAMPLES: usize = 4096;

/// Default bin count for the spectrum command.
pub const DEFAULT_N_BINS: usize = 256;

/// Computation selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Eigen,
    Spectrum,
    Coil,
    Design,
    Converge,
}

impl Command {
    /// Parse a CLI command word.
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "eigen" => Some(Command::Eigen),
            "spectrum" => Some(Command::Spectrum),
            "coil" => Some(Command::Coil),
            "design" => Some(Command::Design),
            "converge" => Some(Command::Converge),
            _ => None,
        }
    }

    /// Canonical name.
    pub fn name(self) -> &'static str {
        match self {
            Command::Eigen => "eigen",
            Command::Spectrum => "spectrum",
            Command::Coil => "coil",
            Command::Design => "design",
            Command::Converge => "converge",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Molecule selection: preset name ("HCl") or explicit masses + ħω₀.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MoleculeConfig {
    Preset(String),
    Explicit {
        mass_1: f64,
        mass_2: f64,
        hbar_omega0: f64,
    },
}

/// Scalar coupling source; a toroid block is the third possible source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct CouplingConfig {
    /// Vector potential magnitude (T·m).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a0: Option<f64>,
    /// Dimensionless coupling ratio r₀ = α/ħω₀ at cosθ = 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
}

/// Toroidal-coil block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToroidConfig {
    /// Inner (cross-section) radius a (m).
    pub inner_radius: f64,
    /// Revolution radius b (m).
    pub revolution_radius: f64,
    /// Wire loop count N.
    pub n_loops: u32,
    /// Drive current I (A); optional for the design command, which solves
    /// for it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub current: Option<f64>,
}

/// Orientation-ensemble block for the spectrum command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub n_samples: usize,
    #[serde(default)]
    pub scheme: SchemeConfig,
}

/// Node-placement scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SchemeConfig {
    #[default]
    UniformGrid,
    GaussLegendre,
}

impl SchemeConfig {
    fn to_scheme(self) -> SamplingScheme {
        match self {
            SchemeConfig::UniformGrid => SamplingScheme::UniformGrid,
            SchemeConfig::GaussLegendre => SamplingScheme::GaussLegendre,
        }
    }
}

/// Transition model for the spectrum command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ModeConfig {
    #[default]
    TwoLevel,
    FullNLevel,
}

/// Sampling window along the torus axis for the coil command.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZRangeConfig {
    /// Lowest z (m).
    pub min: f64,
    /// Highest z (m).
    pub max: f64,
    /// Number of evenly spaced samples, at least 2.
    pub points: usize,
}

/// Complete declarative description of one computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub molecule: Option<MoleculeConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<CouplingConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub toroid: Option<ToroidConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_levels: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_levels_list: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<EnsembleConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_bins: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dipole_weighting: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_range: Option<ZRangeConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

/// Configuration failures; all map to exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    /// Undecodable document: syntax error, unknown field, wrong type,
    /// unknown command variant.
    Document(String),
    /// The CLI command word is not one of the five commands.
    UnknownCommand(String),
    /// The config document names a different command than the CLI word.
    CommandMismatch { cli: Command, config: Command },
    /// A field the command requires is absent.
    MissingField { command: Command, field: &'static str },
    /// More than one coupling source supplied.
    ConflictingCoupling,
    /// A present field has a non-admissible value.
    InvalidValue { field: &'static str, message: String },
    /// Unknown molecule preset name.
    UnknownPreset(String),
    /// A `--set` override cannot be applied.
    BadOverride(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Document(m) => write!(f, "bad config document: {m}"),
            ConfigError::UnknownCommand(c) => write!(
                f,
                "unknown command `{c}` (expected eigen, spectrum, coil, design, or converge)"
            ),
            ConfigError::CommandMismatch { cli, config } => write!(
                f,
                "command mismatch: `{cli}` on the command line but `{config}` in the config"
            ),
            ConfigError::MissingField { command, field } => {
                write!(f, "missing field `{field}` required by the {command} command")
            }
            ConfigError::ConflictingCoupling => write!(
                f,
                "conflicting coupling sources: supply exactly one of coupling.a0, \
                 coupling.ratio, or a toroid block"
            ),
            ConfigError::InvalidValue { field, message } => {
                write!(f, "invalid value for `{field}`: {message}")
            }
            ConfigError::UnknownPreset(p) => write!(f, "unknown molecule preset `{p}`"),
            ConfigError::BadOverride(m) => write!(f, "bad --set override: {m}"),
        }
    }
}

impl Error for ConfigError {}

/// Parse and validate a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let cfg: RunConfig =
        serde_json::from_str(text).map_err(|e| ConfigError::Document(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

/// Apply a `--set key=value` override to the raw JSON document. Dotted keys
/// descend into (or create) nested objects; the value is parsed as JSON and
/// falls back to a plain string.
pub fn apply_override(doc: &mut serde_json::Value, spec: &str) -> Result<(), ConfigError> {
    let (key, raw) = spec
        .split_once('=')
        .ok_or_else(|| ConfigError::BadOverride(format!("expected KEY=VALUE, got `{spec}`")))?;
    if key.is_empty() {
        return Err(ConfigError::BadOverride(format!("empty key in `{spec}`")));
    }
    let value: serde_json::Value = serde_json::from_str(raw)
        .unwrap_or_else(|_| serde_json::Value::String(raw.to_string()));
    let parts: Vec<&str> = key.split('.').collect();
    let mut node = doc;
    for part in &parts[..parts.len() - 1] {
        let obj = node.as_object_mut().ok_or_else(|| {
            ConfigError::BadOverride(format!("`{key}` descends through a non-object"))
        })?;
        node = obj
            .entry(part.to_string())
            .or_insert_with(|| serde_json::Value::Object(Default::default()));
    }
    let obj = node.as_object_mut().ok_or_else(|| {
        ConfigError::BadOverride(format!("`{key}` descends through a non-object"))
    })?;
    obj.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

/// Full CLI pipeline: parse the document, inject the CLI command word,
/// apply overrides, then validate.
pub fn load_config(
    cli_command: &str,
    text: &str,
    overrides: &[String],
    out_override: Option<&str>,
) -> Result<RunConfig, ConfigError> {
    let command = Command::parse(cli_command)
        .ok_or_else(|| ConfigError::UnknownCommand(cli_command.to_string()))?;
    let mut doc: serde_json::Value =
        serde_json::from_str(text).map_err(|e| ConfigError::Document(e.to_string()))?;
    if !doc.is_object() {
        return Err(ConfigError::Document(
            "top level must be a JSON object".to_string(),
        ));
    }
    for spec in overrides {
        apply_override(&mut doc, spec)?;
    }
    if let Some(obj) = doc.as_object_mut() {
        obj.entry("command".to_string())
            .or_insert_with(|| serde_json::Value::String(command.name().to_string()));
    }
    let mut cfg: RunConfig =
        serde_json::from_value(doc).map_err(|e| ConfigError::Document(e.to_string()))?;
    if cfg.command != command {
        return Err(ConfigError::CommandMismatch { cli: command, config: cfg.command });
    }
    if let Some(out) = out_override {
        cfg.output = Some(out.to_string());
    }
    cfg.validate()?;
    Ok(cfg)
}

impl RunConfig {
    /// Resolve the molecule block.
    pub fn molecule_spec(&self) -> Result<MoleculeSpec, ConfigError> {
        let m = self.molecule.as_ref().ok_or(ConfigError::MissingField {
            command: self.command,
            field: "molecule",
        })?;
        match m {
            MoleculeConfig::Preset(name) => {
                MoleculeSpec::preset(name).ok_or_else(|| ConfigError::UnknownPreset(name.clone()))
            }
            MoleculeConfig::Explicit { mass_1, mass_2, hbar_omega0 } => {
                MoleculeSpec::new(*mass_1, *mass_2, *hbar_omega0).map_err(|e| {
                    ConfigError::InvalidValue { field: "molecule", message: e.to_string() }
                })
            }
        }
    }

    /// Resolve the toroid block; `current_required` demands a current field.
    pub fn toroid_spec(&self, current_required: bool) -> Result<ToroidSpec, ConfigError> {
        let t = self.toroid.ok_or(ConfigError::MissingField {
            command: self.command,
            field: "toroid",
        })?;
        let current = match (t.current, current_required) {
            (Some(i), _) => i,
            (None, false) => 0.0,
            (None, true) => {
                return Err(ConfigError::MissingField {
                    command: self.command,
                    field: "toroid.current",
                })
            }
        };
        ToroidSpec::new(t.inner_radius, t.revolution_radius, t.n_loops, current)
            .map_err(|e| ConfigError::InvalidValue { field: "toroid", message: e.to_string() })
    }

    fn coupling_source_count(&self) -> usize {
        let c = self.coupling.unwrap_or_default();
        usize::from(c.a0.is_some())
            + usize::from(c.ratio.is_some())
            + usize::from(self.toroid.is_some())
    }

    /// Resolve the vector potential magnitude (T·m) from the single
    /// configured coupling source. Used by eigen, spectrum, and converge.
    pub fn coupling_a0(
        &self,
        mol: &MoleculeSpec,
        k: &PhysicalConstants,
    ) -> Result<f64, ConfigError> {
        match self.coupling_source_count() {
            0 => {
                return Err(ConfigError::MissingField {
                    command: self.command,
                    field: "coupling",
                })
            }
            1 => {}
            _ => return Err(ConfigError::ConflictingCoupling),
        }
        let c = self.coupling.unwrap_or_default();
        if let Some(a0) = c.a0 {
            if !a0.is_finite() {
                return Err(ConfigError::InvalidValue {
                    field: "coupling.a0",
                    message: format!("must be finite, got {a0}"),
                });
            }
            return Ok(a0);
        }
        if let Some(r) = c.ratio {
            if !r.is_finite() {
                return Err(ConfigError::InvalidValue {
                    field: "coupling.ratio",
                    message: format!("must be finite, got {r}"),
                });
            }
            return Ok(CouplingParams::from_ratio(r, mol, k).a0());
        }
        let toroid = self.toroid_spec(true)?;
        Ok(abspec::coil::a_z_on_axis(&toroid, 0.0, k))
    }

    /// The spectrum-command transition model.
    pub fn profile_mode(&self) -> Result<ProfileMode, ConfigError> {
        match self.mode.unwrap_or_default() {
            ModeConfig::TwoLevel => Ok(ProfileMode::TwoLevel),
            ModeConfig::FullNLevel => {
                let n = self.n_levels.ok_or(ConfigError::MissingField {
                    command: self.command,
                    field: "n_levels",
                })?;
                if n < 2 {
                    return Err(ConfigError::InvalidValue {
                        field: "n_levels",
                        message: format!("full_n_level mode needs at least 2 levels, got {n}"),
                    });
                }
                Ok(ProfileMode::FullNLevel(n))
            }
        }
    }

    /// The spectrum-command orientation ensemble (defaults: 4096-node
    /// uniform grid).
    pub fn orientation_ensemble(&self) -> Result<OrientationEnsemble, ConfigError> {
        let e = self.ensemble.unwrap_or(EnsembleConfig {
            n_samples: DEFAULT_N_SAMPLES,
            scheme: SchemeConfig::UniformGrid,
        });
        OrientationEnsemble::new(e.n_samples, e.scheme.to_scheme()).map_err(|err| {
            ConfigError::InvalidValue { field: "ensemble.n_samples", message: err.to_string() }
        })
    }

    /// The spectrum-command bin count (default 256).
    pub fn bin_count(&self) -> Result<usize, ConfigError> {
        let n = self.n_bins.unwrap_or(DEFAULT_N_BINS);
        if n == 0 {
            return Err(ConfigError::InvalidValue {
                field: "n_bins",
                message: "must be at least 1".to_string(),
            });
        }
        Ok(n)
    }

    /// The coil-command z samples (default: 201 points over ±5b).
    pub fn z_samples(&self, toroid: &ToroidSpec) -> Result<Vec<f64>, ConfigError> {
        let zr = self.z_range.unwrap_or(ZRangeConfig {
            min: -5.0 * toroid.revolution_radius(),
            max: 5.0 * toroid.revolution_radius(),
            points: 201,
        });
        if !(zr.min.is_finite() && zr.max.is_finite() && zr.min < zr.max) {
            return Err(ConfigError::InvalidValue {
                field: "z_range",
                message: format!("needs finite min < max, got [{}, {}]", zr.min, zr.max),
            });
        }
        if zr.points < 2 {
            return Err(ConfigError::InvalidValue {
                field: "z_range.points",
                message: format!("needs at least 2 points, got {}", zr.points),
            });
        }
        let step = (zr.max - zr.min) / (zr.points - 1) as f64;
        Ok((0..zr.points).map(|i| zr.min + step * i as f64).collect())
    }

    /// Output path: configured value or `<command>.csv`.
    pub fn output_path(&self) -> String {
        self.output
            .clone()
            .unwrap_or_else(|| format!("{}.csv", self.command.name()))
    }

    /// Check that every field the command needs is present and admissible.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let k = abspec::constants::CODATA_2018;
        match self.command {
            Command::Eigen => {
                let mol = self.molecule_spec()?;
                let n = self.n_levels.ok_or(ConfigError::MissingField {
                    command: self.command,
                    field: "n_levels",
                })?;
                if n == 0 {
                    return Err(ConfigError::InvalidValue {
                        field: "n_levels",
                        message: "must be at least 1".to_string(),
                    });
                }
                self.coupling_a0(&mol, &k)?;
            }
            Command::Spectrum => {
                let mol = self.molecule_spec()?;
                let a0 = self.coupling_a0(&mol, &k)?;
                if a0 < 0.0 {
                    return Err(ConfigError::InvalidValue {
                        field: "coupling",
                        message: format!(
                            "spectrum needs a non-negative potential, got {a0} T*m"
                        ),
                    });
                }
                self.profile_mode()?;
                self.orientation_ensemble()?;
                self.bin_count()?;
            }
            Command::Coil => {
                let toroid = self.toroid_spec(true)?;
                self.z_samples(&toroid)?;
            }
            Command::Design => {
                self.molecule_spec()?;
                self.toroid_spec(false)?;
                let target = self.target_ratio.ok_or(ConfigError::MissingField {
                    command: self.command,
                    field: "target_ratio",
                })?;
                if !(target.is_finite() && target > 0.0) {
                    return Err(ConfigError::InvalidValue {
                        field: "target_ratio",
                        message: format!("must be positive and finite, got {target}"),
                    });
                }
            }
            Command::Converge => {
                let mol = self.molecule_spec()?;
                self.coupling_a0(&mol, &k)?;
                let list = self.n_levels_list.as_ref().ok_or(ConfigError::MissingField {
                    command: self.command,
                    field: "n_levels_list",
                })?;
                if list.is_empty() {
                    return Err(ConfigError::InvalidValue {
                        field: "n_levels_list",
                        message: "must not be empty".to_string(),
                    });
                }
                if let Some(&bad) = list.iter().find(|&&n| n < 2) {
                    return Err(ConfigError::InvalidValue {
                        field: "n_levels_list",
                        message: format!("every level count must be at least 2, got {bad}"),
                    });
                }
            }
        }
        Ok(())
    }
}
