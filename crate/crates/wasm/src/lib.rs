//! Browser bindings: a reflection spectrum for a chain of identical
//! emitters, separation from a measured dip, and displacement readings from
//! a line shift.

use wasm_bindgen::prelude::*;
use wqed_core::prelude::*;
use wqed_core::Error;

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub struct SpectrumView {
    detuning: Vec<f64>,
    reflectivity: Vec<f64>,
    transmissivity: Vec<f64>,
    peaks: Vec<f64>,
    dips: Vec<f64>,
}

#[wasm_bindgen]
impl SpectrumView {
    pub fn detuning(&self) -> Vec<f64> {
        self.detuning.clone()
    }

    pub fn reflectivity(&self) -> Vec<f64> {
        self.reflectivity.clone()
    }

    pub fn transmissivity(&self) -> Vec<f64> {
        self.transmissivity.clone()
    }

    /// Refined peak centers.
    pub fn peaks(&self) -> Vec<f64> {
        self.peaks.clone()
    }

    /// Refined dip centers.
    pub fn dips(&self) -> Vec<f64> {
        self.dips.clone()
    }
}

/// Native counterpart of `reflectionSpectrum`.
pub fn chain_spectrum(
    count: usize,
    separation: f64,
    gamma_wg: f64,
    gamma_free: f64,
    min: f64,
    max: f64,
    points: usize,
) -> Result<SpectrumView, Error> {
    let emitters = EmitterArray::chain(count, separation, gamma_wg, gamma_free, RateUnit::FreeSpace)?;
    let model = ForwardModel::new(emitters, WaveguideParams::default());
    let grid = uniform_grid(min, max, points)?;
    let spectrum = model.spectrum(&grid)?;
    let features = find_extrema(&spectrum, &model)?;
    Ok(SpectrumView {
        detuning: spectrum.grid().to_vec(),
        reflectivity: spectrum.reflectivity().to_vec(),
        transmissivity: spectrum.transmissivity().to_vec(),
        peaks: features.significant_peaks(0.05).iter().map(|p| p.center).collect(),
        dips: features.significant_dips(0.05).iter().map(|d| d.center).collect(),
    })
}

/// Spectrum of `count` identical emitters spaced `separation` wavelengths
/// apart, sampled at `points` detunings in `[min, max]`.
#[wasm_bindgen(js_name = reflectionSpectrum)]
pub fn reflection_spectrum(
    count: usize,
    separation: f64,
    gamma_wg: f64,
    gamma_free: f64,
    min: f64,
    max: f64,
    points: usize,
) -> Result<SpectrumView, JsError> {
    chain_spectrum(count, separation, gamma_wg, gamma_free, min, max, points).map_err(js)
}

/// Separation of two lossless emitters from their reflection dip, on
/// half-wavelength branch `branch`.
#[wasm_bindgen(js_name = separationFromDip)]
pub fn separation_from_dip(dip: f64, gamma_wg: f64, branch: u32) -> Result<f64, JsError> {
    invert_dip_exact(dip, gamma_wg, branch, &WaveguideParams::default()).map_err(js)
}

#[wasm_bindgen]
#[derive(Debug, Clone, Copy)]
pub struct Reading {
    pub dd: f64,
    pub microstrain: f64,
    pub kelvin: f64,
    pub resolvable: bool,
    /// Smallest resolvable |δd| for this pair and line.
    pub limit: f64,
}

/// Native counterpart of `readShift`.
pub fn read(
    baseline: f64,
    gamma_wg: f64,
    gamma_free: f64,
    superradiant: bool,
    shift: f64,
) -> Result<Reading, Error> {
    let branch = if superradiant { ProbeBranch::Superradiant } else { ProbeBranch::Subradiant };
    let config = SensingConfig::new(baseline, gamma_wg, gamma_free, branch)?;
    let r = read_shift(shift, &config)?;
    Ok(Reading {
        dd: r.dd,
        microstrain: r.microstrain,
        kelvin: r.kelvin,
        resolvable: r.resolvable,
        limit: min_detectable(&config)?.dd,
    })
}

/// Separation change, strain and temperature behind a shift of the
/// super- or subradiant line.
#[wasm_bindgen(js_name = readShift)]
pub fn read_line_shift(
    baseline: f64,
    gamma_wg: f64,
    gamma_free: f64,
    superradiant: bool,
    shift: f64,
) -> Result<Reading, JsError> {
    read(baseline, gamma_wg, gamma_free, superradiant, shift).map_err(js)
}
