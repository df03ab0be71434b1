//! Separation-change sensing from collective peak shifts.
//!
//! Near contact the collective shift Im[V12 e^{i k_a d}] grows like d⁻³, so
//! a tiny change δd moves both collective peaks by many linewidths of the
//! narrow subradiant line. The exact peak position is inverted numerically;
//! the d⁻³ asymptotes are kept only as reference estimates.

use crate::error::{Error, Result};
use crate::numerics::bisect_root;
use crate::waveguide_model::{phased_coupling, CollectiveModes, WaveguideParams};

/// Length change per microstrain in silica fibre at 1.55 μm, in pm.
pub const DEFAULT_STRAIN_PM_PER_MICROSTRAIN: f64 = 1.25;
/// Length change per kelvin in silica fibre at 1.55 μm, in pm.
pub const DEFAULT_TEMPERATURE_PM_PER_KELVIN: f64 = 12.5;
/// 1.55 μm in pm.
pub const DEFAULT_PHYSICAL_WAVELENGTH_PM: f64 = 1.55e6;
/// Shift-to-linewidth ratio at which a shifted line is resolvable.
pub const DEFAULT_RESOLUTION_FACTOR: f64 = 0.9;
/// Room-temperature lattice-vibration floor on temperature readings.
pub const THERMAL_FLOOR_KELVIN: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeBranch {
    Superradiant,
    Subradiant,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensingConfig {
    /// Baseline separation, in units of λ.
    pub baseline: f64,
    pub gamma_wg: f64,
    pub gamma_free: f64,
    pub branch: ProbeBranch,
    /// λ in picometres, for converting δd to physical length.
    pub wavelength_physical_pm: f64,
    pub strain_pm_per_microstrain: f64,
    pub temperature_pm_per_kelvin: f64,
    /// α in the rule |δω| ≥ α·FWHM.
    pub resolution_factor: f64,
    pub waveguide: WaveguideParams,
}

impl SensingConfig {
    pub fn new(baseline: f64, gamma_wg: f64, gamma_free: f64, branch: ProbeBranch) -> Result<Self> {
        let config = Self {
            baseline,
            gamma_wg,
            gamma_free,
            branch,
            wavelength_physical_pm: DEFAULT_PHYSICAL_WAVELENGTH_PM,
            strain_pm_per_microstrain: DEFAULT_STRAIN_PM_PER_MICROSTRAIN,
            temperature_pm_per_kelvin: DEFAULT_TEMPERATURE_PM_PER_KELVIN,
            resolution_factor: DEFAULT_RESOLUTION_FACTOR,
            waveguide: WaveguideParams::default(),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_branch(mut self, branch: ProbeBranch) -> Self {
        self.branch = branch;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("baseline", self.baseline),
            ("gamma_wg", self.gamma_wg),
            ("wavelength_physical_pm", self.wavelength_physical_pm),
            ("strain_pm_per_microstrain", self.strain_pm_per_microstrain),
            ("temperature_pm_per_kelvin", self.temperature_pm_per_kelvin),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, format!("must be finite and > 0, got {v}")));
            }
        }
        if !(self.gamma_free >= 0.0 && self.gamma_free.is_finite()) {
            return Err(Error::invalid("gamma_free", format!("must be >= 0, got {}", self.gamma_free)));
        }
        if !(self.resolution_factor >= 0.0 && self.resolution_factor.is_finite()) {
            return Err(Error::invalid("resolution_factor", "must be finite and >= 0"));
        }
        Ok(())
    }

    fn modes(&self) -> Result<CollectiveModes> {
        CollectiveModes::new(self.baseline, self.gamma_wg, self.gamma_free, &self.waveguide)
    }

    /// +1 if the probed line sits at +Im[V12 e^{i k_a d}], −1 otherwise.
    /// Fixed at the baseline so the same resonance is followed as d moves.
    fn branch_sign(&self) -> Result<f64> {
        let modes = self.modes()?;
        let plus_is_broad = modes.gamma_plus >= modes.gamma_minus;
        Ok(match (self.branch, plus_is_broad) {
            (ProbeBranch::Superradiant, true) | (ProbeBranch::Subradiant, false) => 1.0,
            _ => -1.0,
        })
    }

    /// Center of the probed line for separation `separation`.
    pub fn branch_center(&self, separation: f64) -> Result<f64> {
        let w = phased_coupling(separation, self.gamma_wg, self.gamma_free, &self.waveguide)?;
        Ok(self.branch_sign()? * w.im)
    }

    /// FWHM 2Γ± of the probed line at the baseline.
    pub fn branch_fwhm(&self) -> Result<f64> {
        let modes = self.modes()?;
        Ok(match self.branch {
            ProbeBranch::Superradiant => modes.superradiant().1,
            ProbeBranch::Subradiant => modes.subradiant().1,
        })
    }
}

/// Shift of the probed line when the separation changes by `dd`.
pub fn peak_shift(dd: f64, config: &SensingConfig) -> Result<f64> {
    Ok(config.branch_center(config.baseline + dd)? - config.branch_center(config.baseline)?)
}

/// Separation change that moves the probed line by `shift`.
///
/// Root-finds the exact collective shift over δd ∈ [−d/2, min(d/2, λ/4 − d)].
pub fn peak_shift_to_dd(shift: f64, config: &SensingConfig) -> Result<f64> {
    config.validate()?;
    if shift == 0.0 {
        return Ok(0.0);
    }
    let d = config.baseline;
    let lo = -0.5 * d;
    let hi = (0.5 * d).min(0.25 * config.waveguide.wavelength() - d);
    if !(hi > lo) {
        return Err(Error::RootNotBracketed { lo, hi });
    }
    let origin = config.branch_center(d)?;
    let residual = |dd: f64| Ok(config.branch_center(d + dd)? - origin - shift);
    bisect_root(residual, lo, hi)?.ok_or(Error::RootNotBracketed { lo, hi })
}

/// Ω12 = 3γ/(4(k_a d)³), the near-field collective shift.
pub fn near_field_shift(gamma_free: f64, separation: f64, waveguide: &WaveguideParams) -> f64 {
    0.75 * gamma_free / (waveguide.k_a() * separation).powi(3)
}

/// Reference estimate from δω ≈ ∓3Ω12·δd/d (upper sign for the line at
/// +Im[V12 e^{i k_a d}]).
pub fn dd_estimate_cubic(shift: f64, config: &SensingConfig) -> Result<f64> {
    let omega = near_field_shift(config.gamma_free, config.baseline, &config.waveguide);
    Ok(-config.branch_sign()? * shift * config.baseline / (3.0 * omega))
}

/// Reference estimate δd ≈ ∓δω·d/(2Ω12).
pub fn dd_estimate_half_ratio(shift: f64, config: &SensingConfig) -> Result<f64> {
    let omega = near_field_shift(config.gamma_free, config.baseline, &config.waveguide);
    Ok(-config.branch_sign()? * shift * config.baseline / (2.0 * omega))
}

/// Physical length change in pm for a separation change in units of λ.
pub fn dd_to_picometres(dd: f64, config: &SensingConfig) -> f64 {
    dd * config.wavelength_physical_pm / config.waveguide.wavelength()
}

/// (microstrain, kelvin) readings of a separation change.
pub fn dd_to_strain_temperature(dd: f64, config: &SensingConfig) -> (f64, f64) {
    let pm = dd_to_picometres(dd, config);
    (pm / config.strain_pm_per_microstrain, pm / config.temperature_pm_per_kelvin)
}

pub fn strain_to_dd(microstrain: f64, config: &SensingConfig) -> f64 {
    microstrain * config.strain_pm_per_microstrain * config.waveguide.wavelength() / config.wavelength_physical_pm
}

pub fn temperature_to_dd(kelvin: f64, config: &SensingConfig) -> f64 {
    kelvin * config.temperature_pm_per_kelvin * config.waveguide.wavelength() / config.wavelength_physical_pm
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensingReading {
    pub shift: f64,
    pub dd: f64,
    pub microstrain: f64,
    pub kelvin: f64,
    /// |δω| ≥ α·FWHM of the probed line.
    pub resolvable: bool,
    /// The temperature reading is below the room-temperature vibration floor.
    pub below_thermal_floor: bool,
}

pub fn read_shift(shift: f64, config: &SensingConfig) -> Result<SensingReading> {
    let dd = peak_shift_to_dd(shift, config)?;
    let (microstrain, kelvin) = dd_to_strain_temperature(dd, config);
    let threshold = config.resolution_factor * config.branch_fwhm()?;
    Ok(SensingReading {
        shift,
        dd,
        microstrain,
        kelvin,
        resolvable: shift.abs() >= threshold,
        below_thermal_floor: kelvin.abs() < THERMAL_FLOOR_KELVIN,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinDetectable {
    /// Smallest resolvable |δd|, in units of λ.
    pub dd: f64,
    /// Smallest resolvable |δω|.
    pub shift: f64,
}

/// Smallest resolvable line shift α·FWHM and the separation change that
/// produces it.
pub fn min_detectable(config: &SensingConfig) -> Result<MinDetectable> {
    let shift = config.resolution_factor * config.branch_fwhm()?;
    if shift == 0.0 {
        return Ok(MinDetectable { dd: 0.0, shift });
    }
    let dd = match peak_shift_to_dd(shift, config) {
        Ok(dd) => dd,
        Err(Error::RootNotBracketed { .. }) => peak_shift_to_dd(-shift, config)?,
        Err(e) => return Err(e),
    };
    Ok(MinDetectable { dd: dd.abs(), shift })
}

/// Line shift of a fibre Bragg grating for the same length change,
/// δω_FBG ≈ −ω_a·δd/λ.
pub fn fbg_shift(dd: f64, carrier_frequency: f64, waveguide: &WaveguideParams) -> f64 {
    -carrier_frequency * dd / waveguide.wavelength()
}

/// Sensitivity relative to a fibre Bragg grating, 3λΩ12/(ω_a d).
///
/// `carrier_frequency` ω_a is in the same rate unit as γ.
pub fn fbg_sensitivity_ratio(config: &SensingConfig, carrier_frequency: f64) -> f64 {
    let omega = near_field_shift(config.gamma_free, config.baseline, &config.waveguide);
    3.0 * config.waveguide.wavelength() * omega / (carrier_frequency * config.baseline)
}

/// Same ratio from the exact slope of the probed line: |dω/dd| / |dω_FBG/dd|.
pub fn exact_sensitivity_ratio(config: &SensingConfig, carrier_frequency: f64) -> Result<f64> {
    let h = 1e-6 * config.baseline;
    let slope = (peak_shift(h, config)? - peak_shift(-h, config)?) / (2.0 * h);
    let fbg_slope = fbg_shift(1.0, carrier_frequency, &config.waveguide);
    Ok((slope / fbg_slope).abs())
}

/// Reduced separation x = k_a d at which Ω12 equals `target` for rate γ.
pub fn separation_for_shift(gamma_free: f64, target: f64, waveguide: &WaveguideParams) -> f64 {
    (0.75 * gamma_free / target).cbrt() / waveguide.k_a()
}
