//! Scenario files.
//!
//! A scenario is a TOML document:
//!
//! ```toml
//! [waveguide]
//! wavelength = 1.0
//! rate_unit = "gamma0"        # or "Gamma0"
//!
//! [[emitters]]
//! z = 0.0
//! gamma_wg = 2.0
//! gamma_free = 1.0
//!
//! [[emitters]]
//! z = 0.05
//! gamma_wg = 2.0
//! gamma_free = 1.0
//!
//! [grid]
//! min = -40.0
//! max = 40.0
//! points = 4001
//! ```
//!
//! Optional blocks: `[gradient]`, `[counting]`, `[inversion]`, `[sensing]`.

use serde::{Deserialize, Serialize};
use wqed_core::inversion::{BranchSearch, SeparationSearch};
use wqed_core::prelude::*;
use wqed_core::sensing::{
    DEFAULT_PHYSICAL_WAVELENGTH_PM, DEFAULT_RESOLUTION_FACTOR, DEFAULT_STRAIN_PM_PER_MICROSTRAIN,
    DEFAULT_TEMPERATURE_PM_PER_KELVIN,
};
use wqed_core::spectral_features::DEFAULT_MIN_RELATIVE_PROMINENCE;
use wqed_core::waveguide_model::DEFAULT_GROUP_VELOCITY;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub waveguide: WaveguideBlock,
    #[serde(default)]
    pub emitters: Vec<EmitterBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gradient: Option<GradientBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counting: Option<CountingBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inversion: Option<InversionBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sensing: Option<SensingBlock>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnitName {
    #[serde(rename = "gamma0")]
    FreeSpace,
    #[serde(rename = "Gamma0")]
    Guided,
}

impl From<UnitName> for RateUnit {
    fn from(u: UnitName) -> Self {
        match u {
            UnitName::FreeSpace => RateUnit::FreeSpace,
            UnitName::Guided => RateUnit::Guided,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveguideBlock {
    pub wavelength: f64,
    pub rate_unit: UnitName,
    #[serde(default = "default_group_velocity")]
    pub group_velocity: f64,
}

fn default_group_velocity() -> f64 {
    DEFAULT_GROUP_VELOCITY
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmitterBlock {
    pub z: f64,
    pub gamma_wg: f64,
    #[serde(default)]
    pub gamma_free: f64,
    #[serde(default)]
    pub detuning: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradientBlock {
    /// Detuning change per unit length (rate per λ).
    pub g: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBlock {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegimeName {
    Lossless,
    Lossy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountingBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regime: Option<RegimeName>,
    #[serde(default = "default_relative_prominence")]
    pub min_relative_prominence: f64,
}

fn default_relative_prominence() -> f64 {
    DEFAULT_MIN_RELATIVE_PROMINENCE
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodName {
    LosslessDip,
    LossyFit,
    PerEmitter,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InversionBlock {
    pub method: MethodName,
    /// Fixed branch for the lossless route. Resolved from the gradient
    /// spectrum when absent and `[gradient]` is given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<u32>,
    #[serde(default = "default_max_branch")]
    pub max_branch: u32,
    #[serde(default = "default_search_min")]
    pub search_min: f64,
    #[serde(default = "default_search_max")]
    pub search_max: f64,
    #[serde(default = "default_search_points")]
    pub search_points: usize,
}

fn default_max_branch() -> u32 {
    8
}

fn default_search_min() -> f64 {
    SeparationSearch::default().min
}

fn default_search_max() -> f64 {
    SeparationSearch::default().max
}

fn default_search_points() -> usize {
    SeparationSearch::default().points
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchName {
    Superradiant,
    Subradiant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensingBlock {
    #[serde(default = "default_probe")]
    pub branch: BranchName,
    /// Measured line shifts to convert.
    #[serde(default)]
    pub shifts: Vec<f64>,
    /// Separation changes to convert forward into shifts.
    #[serde(default)]
    pub separation_changes: Vec<f64>,
    #[serde(default = "default_wavelength_pm")]
    pub wavelength_pm: f64,
    #[serde(default = "default_strain")]
    pub strain_pm_per_microstrain: f64,
    #[serde(default = "default_temperature")]
    pub temperature_pm_per_kelvin: f64,
    #[serde(default = "default_alpha")]
    pub resolution_factor: f64,
}

fn default_probe() -> BranchName {
    BranchName::Superradiant
}

fn default_wavelength_pm() -> f64 {
    DEFAULT_PHYSICAL_WAVELENGTH_PM
}

fn default_strain() -> f64 {
    DEFAULT_STRAIN_PM_PER_MICROSTRAIN
}

fn default_temperature() -> f64 {
    DEFAULT_TEMPERATURE_PM_PER_KELVIN
}

fn default_alpha() -> f64 {
    DEFAULT_RESOLUTION_FACTOR
}

/// Parsed scenario together with its source text, for error locations.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub source: String,
}

impl Scenario {
    pub fn parse(source: &str) -> Result<Self, CliError> {
        let config: ScenarioConfig = toml::from_str(source).map_err(|e| {
            let line = e.span().map(|span| line_of_offset(source, span.start));
            CliError::validation("config", line, e.message().to_string())
        })?;
        let scenario = Scenario { config, source: source.to_string() };
        scenario.validate()?;
        Ok(scenario)
    }

    fn fail(&self, table: &str, index: Option<usize>, key: &str, reason: impl Into<String>) -> CliError {
        let field = match index {
            Some(i) => format!("{table}[{i}].{key}"),
            None if table.is_empty() => key.to_string(),
            None => format!("{table}.{key}"),
        };
        CliError::validation(field, locate(&self.source, table, index, key), reason)
    }

    fn validate(&self) -> Result<(), CliError> {
        let c = &self.config;
        let finite = |table: &str, index: Option<usize>, key: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(self.fail(table, index, key, "must be finite"))
            }
        };

        finite("waveguide", None, "wavelength", c.waveguide.wavelength)?;
        if c.waveguide.wavelength <= 0.0 {
            return Err(self.fail("waveguide", None, "wavelength", "must be > 0"));
        }
        finite("waveguide", None, "group_velocity", c.waveguide.group_velocity)?;
        if c.waveguide.group_velocity <= 0.0 {
            return Err(self.fail("waveguide", None, "group_velocity", "must be > 0"));
        }

        if c.emitters.is_empty() {
            return Err(self.fail("", None, "emitters", "at least one emitter is required"));
        }
        for (i, e) in c.emitters.iter().enumerate() {
            for (key, v) in [("z", e.z), ("gamma_wg", e.gamma_wg), ("gamma_free", e.gamma_free), ("detuning", e.detuning)] {
                finite("emitters", Some(i), key, v)?;
            }
            if e.gamma_wg <= 0.0 {
                return Err(self.fail("emitters", Some(i), "gamma_wg", "must be > 0"));
            }
            if e.gamma_free < 0.0 {
                return Err(self.fail("emitters", Some(i), "gamma_free", "must be >= 0"));
            }
            if i > 0 && e.z <= c.emitters[i - 1].z {
                return Err(self.fail("emitters", Some(i), "z", "positions must be strictly increasing"));
            }
        }

        if let Some(g) = &c.gradient {
            finite("gradient", None, "g", g.g)?;
        }
        if let Some(grid) = &c.grid {
            finite("grid", None, "min", grid.min)?;
            finite("grid", None, "max", grid.max)?;
            if grid.max <= grid.min {
                return Err(self.fail("grid", None, "max", "must exceed grid.min"));
            }
            if grid.points < 2 {
                return Err(self.fail("grid", None, "points", "must be at least 2"));
            }
        }
        if let Some(counting) = &c.counting {
            let v = counting.min_relative_prominence;
            if !(0.0..1.0).contains(&v) {
                return Err(self.fail("counting", None, "min_relative_prominence", "must lie in [0, 1)"));
            }
        }
        if let Some(inv) = &c.inversion {
            finite("inversion", None, "search_min", inv.search_min)?;
            finite("inversion", None, "search_max", inv.search_max)?;
            if inv.search_min <= 0.0 {
                return Err(self.fail("inversion", None, "search_min", "must be > 0"));
            }
            if inv.search_max <= inv.search_min {
                return Err(self.fail("inversion", None, "search_max", "must exceed search_min"));
            }
            if inv.search_points < 3 {
                return Err(self.fail("inversion", None, "search_points", "must be at least 3"));
            }
        }
        if let Some(s) = &c.sensing {
            for (key, v) in [
                ("wavelength_pm", s.wavelength_pm),
                ("strain_pm_per_microstrain", s.strain_pm_per_microstrain),
                ("temperature_pm_per_kelvin", s.temperature_pm_per_kelvin),
            ] {
                if !(v.is_finite() && v > 0.0) {
                    return Err(self.fail("sensing", None, key, "must be finite and > 0"));
                }
            }
            if !(s.resolution_factor.is_finite() && s.resolution_factor >= 0.0) {
                return Err(self.fail("sensing", None, "resolution_factor", "must be finite and >= 0"));
            }
            for (key, values) in [("shifts", &s.shifts), ("separation_changes", &s.separation_changes)] {
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(self.fail("sensing", None, key, "entries must be finite"));
                }
            }
        }
        Ok(())
    }

    pub fn waveguide(&self) -> Result<WaveguideParams, CliError> {
        Ok(WaveguideParams::new(self.config.waveguide.wavelength, self.config.waveguide.group_velocity)?)
    }

    /// Emitters as configured, before any gradient field.
    pub fn emitters(&self) -> Result<EmitterArray, CliError> {
        let list = self
            .config
            .emitters
            .iter()
            .map(|e| Emitter::new(e.z, e.gamma_wg, e.gamma_free).with_detuning(e.detuning))
            .collect();
        Ok(EmitterArray::new(list, self.config.waveguide.rate_unit.into())?)
    }

    /// Emitters with the gradient field applied, if one is configured.
    pub fn probed_emitters(&self) -> Result<EmitterArray, CliError> {
        let emitters = self.emitters()?;
        Ok(match &self.config.gradient {
            Some(g) => apply_gradient_field(&emitters, g.g),
            None => emitters,
        })
    }

    /// Configured grid, or the default scan window of `emitters` sampled at
    /// `points`.
    pub fn grid_for(&self, emitters: &EmitterArray, points: Option<usize>) -> Result<Vec<f64>, CliError> {
        let (min, max, configured) = match &self.config.grid {
            Some(g) => (g.min, g.max, g.points),
            None => {
                let (lo, hi) = default_scan_window(emitters, &self.waveguide()?)?;
                (lo, hi, DEFAULT_GRID_POINTS)
            }
        };
        let points = points.unwrap_or(configured);
        if points < 2 {
            return Err(CliError::validation("--grid-points", None, "must be at least 2"));
        }
        Ok(uniform_grid(min, max, points)?)
    }

    pub fn separation_search(&self) -> SeparationSearch {
        match &self.config.inversion {
            Some(inv) => SeparationSearch { min: inv.search_min, max: inv.search_max, points: inv.search_points },
            None => SeparationSearch::default(),
        }
    }

    pub fn branch_search(&self, gamma_wg: f64) -> BranchSearch {
        let mut search = BranchSearch::for_linewidth(gamma_wg);
        if let Some(inv) = &self.config.inversion {
            search.max_branch = inv.max_branch;
        }
        search
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&self.config).expect("scenario serializes")
    }
}

pub const DEFAULT_GRID_POINTS: usize = 4001;

fn line_of_offset(source: &str, offset: usize) -> usize {
    source[..offset.min(source.len())].matches('\n').count() + 1
}

/// 1-based line of `key` inside `[table]` (or the `index`-th `[[table]]`).
/// An empty `table` means the top level. Falls back to the table header,
/// then to `None`.
pub fn locate(source: &str, table: &str, index: Option<usize>, key: &str) -> Option<usize> {
    let mut current = String::new();
    let mut occurrence: Option<usize> = None;
    let mut header_line = None;
    let mut seen: std::collections::HashMap<String, usize> = std::collections::HashMap::new();
    for (n, raw) in source.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if let Some(name) = line.strip_prefix("[[").and_then(|l| l.strip_suffix("]]")) {
            current = name.trim().to_string();
            let count = seen.entry(current.clone()).or_insert(0);
            occurrence = Some(*count);
            *count += 1;
        } else if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            current = name.trim().to_string();
            occurrence = None;
        } else {
            let in_table = current == table && (index.is_none() || occurrence == index);
            if in_table && line.split('=').next().map(str::trim) == Some(key) {
                return Some(n + 1);
            }
            continue;
        }
        if current == table && (index.is_none() || occurrence == index) && header_line.is_none() {
            header_line = Some(n + 1);
        }
    }
    if table.is_empty() {
        return source.lines().position(|l| l.trim().starts_with(&format!("[[{key}]]"))).map(|n| n + 1);
    }
    header_line
}
