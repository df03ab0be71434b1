//! Reflection peaks and dips: grid detection, sub-grid refinement on the
//! continuous model, half-maximum linewidths and emitter counting.

use crate::error::{Error, Result};
use crate::numerics::{bisect_root, golden_section_min, parabolic_vertex};
use crate::waveguide_model::{phased_coupling, validate_grid, EmitterArray, ForwardModel, Spectrum, WaveguideParams};

/// Grid extrema with a smaller prominence are floating-point ripple.
pub const MIN_PROMINENCE: f64 = 1e-6;

/// Default share of the tallest peak a feature's prominence must reach to
/// be counted as an emitter signature.
pub const DEFAULT_MIN_RELATIVE_PROMINENCE: f64 = 0.05;

/// Loss level above which a spectrum is not lossless.
pub const LOSSLESS_TOLERANCE: f64 = 1e-6;

/// Reflectivity as a continuous function of probe detuning.
pub trait ReflectivityModel {
    fn reflectivity(&self, detuning: f64) -> Result<f64>;
}

impl ReflectivityModel for ForwardModel {
    fn reflectivity(&self, detuning: f64) -> Result<f64> {
        Ok(self.amplitudes(detuning)?.reflectivity())
    }
}

impl<F: Fn(f64) -> f64> ReflectivityModel for F {
    fn reflectivity(&self, detuning: f64) -> Result<f64> {
        Ok(self(detuning))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakDescriptor {
    pub center: f64,
    pub height: f64,
    /// Full width at half height (measured from R = 0). `None` when a
    /// half-height crossing lies outside the scan window or beyond a taller
    /// neighbouring feature.
    pub fwhm: Option<f64>,
    pub prominence: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipDescriptor {
    pub center: f64,
    pub depth: f64,
    pub prominence: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSet {
    pub peaks: Vec<PeakDescriptor>,
    pub dips: Vec<DipDescriptor>,
    /// Scan window `(min, max)` of the source spectrum.
    pub window: (f64, f64),
    /// Smallest grid spacing of the source spectrum.
    pub resolution: f64,
    /// Largest 1 − R − T seen on the grid.
    pub max_loss: f64,
}

impl FeatureSet {
    pub fn tallest_height(&self) -> f64 {
        self.peaks.iter().map(|p| p.height).fold(0.0, f64::max)
    }

    /// Peaks whose prominence is at least `fraction` of the tallest peak,
    /// in order of center.
    pub fn significant_peaks(&self, fraction: f64) -> Vec<PeakDescriptor> {
        let floor = fraction * self.tallest_height();
        self.peaks.iter().copied().filter(|p| p.prominence >= floor).collect()
    }

    pub fn significant_dips(&self, fraction: f64) -> Vec<DipDescriptor> {
        let scale = if self.peaks.is_empty() { 1.0 } else { self.tallest_height() };
        let floor = fraction * scale;
        self.dips.iter().copied().filter(|d| d.prominence >= floor).collect()
    }

    /// The `count` tallest peaks, returned in order of center.
    pub fn tallest_peaks(&self, count: usize) -> Vec<PeakDescriptor> {
        let mut peaks = self.peaks.clone();
        peaks.sort_by(|a, b| b.height.total_cmp(&a.height).then(a.center.total_cmp(&b.center)));
        peaks.truncate(count);
        peaks.sort_by(|a, b| a.center.total_cmp(&b.center));
        peaks
    }

    /// The lowest dip, if any.
    pub fn deepest_dip(&self) -> Option<DipDescriptor> {
        self.dips.iter().copied().min_by(|a, b| a.depth.total_cmp(&b.depth))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy)]
struct GridExtremum {
    kind: Kind,
    /// First index of the (possibly flat) extremal run.
    start: usize,
    end: usize,
}

fn grid_extrema(y: &[f64]) -> Vec<GridExtremum> {
    let n = y.len();
    let mut out = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        let mut j = i;
        while j + 1 < n && y[j + 1] == y[i] {
            j += 1;
        }
        if j + 1 >= n {
            break;
        }
        let (left, right) = (y[i - 1], y[j + 1]);
        if y[i] > left && y[i] > right {
            out.push(GridExtremum { kind: Kind::Max, start: i, end: j });
        } else if y[i] < left && y[i] < right {
            out.push(GridExtremum { kind: Kind::Min, start: i, end: j });
        }
        i = j + 1;
    }
    out
}

/// Topographic prominence on the sampled values.
fn prominence(y: &[f64], ext: &GridExtremum) -> f64 {
    let v = y[ext.start];
    match ext.kind {
        Kind::Max => {
            let mut left = v;
            for &s in y[..ext.start].iter().rev() {
                if s > v {
                    break;
                }
                left = left.min(s);
            }
            let mut right = v;
            for &s in &y[ext.end + 1..] {
                if s > v {
                    break;
                }
                right = right.min(s);
            }
            v - left.max(right)
        }
        Kind::Min => {
            let mut left = v;
            for &s in y[..ext.start].iter().rev() {
                if s < v {
                    break;
                }
                left = left.max(s);
            }
            let mut right = v;
            for &s in &y[ext.end + 1..] {
                if s < v {
                    break;
                }
                right = right.max(s);
            }
            left.min(right) - v
        }
    }
}

/// Parabolic estimate followed by golden-section polish inside the
/// bracketing grid points. Returns `(center, value)`.
fn refine<M: ReflectivityModel + ?Sized>(
    grid: &[f64],
    y: &[f64],
    ext: &GridExtremum,
    model: &M,
) -> Result<(f64, f64)> {
    let lo = grid[ext.start - 1];
    let hi = grid[ext.end + 1];
    let sign = if ext.kind == Kind::Max { -1.0 } else { 1.0 };
    let objective = |x: f64| model.reflectivity(x).map(|r| sign * r);

    let anchor = grid[ext.start];
    let anchor_value = model.reflectivity(anchor)?;
    let scale = y[ext.start].abs().max(1.0);
    if (anchor_value - y[ext.start]).abs() > 1e-9 * scale {
        // The model does not describe this spectrum.
        return Err(Error::RefinementFailure { lo, hi });
    }

    let mut best = (anchor, sign * anchor_value);
    if ext.start == ext.end {
        let i = ext.start;
        if let Some(v) = parabolic_vertex([grid[i - 1], grid[i], grid[i + 1]], [y[i - 1], y[i], y[i + 1]]) {
            if v > lo && v < hi {
                let fv = objective(v)?;
                if fv < best.1 {
                    best = (v, fv);
                }
            }
        }
    }
    let spacing = 0.5 * (hi - lo);
    let (x, fx) = golden_section_min(objective, lo, hi, 1e-6 * spacing)?;
    if fx < best.1 {
        best = (x, fx);
    }
    if !(best.0 > lo && best.0 < hi) {
        return Err(Error::RefinementFailure { lo, hi });
    }
    Ok((best.0, sign * best.1))
}

fn validate_samples(grid: &[f64], y: &[f64]) -> Result<()> {
    validate_grid(grid)?;
    if y.len() != grid.len() {
        return Err(Error::invalid(
            "reflectivity",
            format!("{} samples for {} grid points", y.len(), grid.len()),
        ));
    }
    Ok(())
}

fn min_spacing(grid: &[f64]) -> f64 {
    grid.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
}

/// Detects local maxima and minima of R on the grid and refines each one
/// against the continuous `model`.
///
/// Each center is first estimated by the parabola through the extremal grid
/// triple and then polished by golden-section search within the bracketing
/// grid points to 1e−6 of the grid spacing. Flat runs are assigned to their
/// first index. Features with prominence below [`MIN_PROMINENCE`] are
/// dropped, and refined features of one kind closer than half the grid
/// spacing are merged.
pub fn find_extrema<M: ReflectivityModel + ?Sized>(spectrum: &Spectrum, model: &M) -> Result<FeatureSet> {
    let mut features = find_extrema_in(spectrum.grid(), spectrum.reflectivity(), model)?;
    features.max_loss = spectrum.max_loss();
    Ok(features)
}

/// [`find_extrema`] on bare reflectivity samples. `max_loss` is reported as
/// NaN since transmission is unknown.
pub fn find_extrema_in<M: ReflectivityModel + ?Sized>(
    grid: &[f64],
    y: &[f64],
    model: &M,
) -> Result<FeatureSet> {
    validate_samples(grid, y)?;
    let resolution = if grid.len() > 1 { min_spacing(grid) } else { 0.0 };
    let mut peaks = Vec::new();
    let mut dips = Vec::new();

    for ext in grid_extrema(y) {
        let prom = prominence(y, &ext);
        if prom < MIN_PROMINENCE {
            continue;
        }
        let (center, value) = refine(grid, y, &ext, model).map_err(|e| e.at_index(ext.start))?;
        // bases come from the samples, the extremum from the refined model
        let prom = prom + (value - y[ext.start]).abs();
        match ext.kind {
            Kind::Max => peaks.push(PeakDescriptor { center, height: value, fwhm: None, prominence: prom }),
            Kind::Min => dips.push(DipDescriptor { center, depth: value.max(0.0), prominence: prom }),
        }
    }

    let merge = 0.5 * resolution;
    peaks.dedup_by(|later, kept| {
        if (later.center - kept.center).abs() < merge {
            if later.height > kept.height {
                *kept = *later;
            }
            true
        } else {
            false
        }
    });
    dips.dedup_by(|later, kept| {
        if (later.center - kept.center).abs() < merge {
            if later.depth < kept.depth {
                *kept = *later;
            }
            true
        } else {
            false
        }
    });

    for peak in &mut peaks {
        peak.fwhm = match measure_fwhm_in(grid, y, model, peak) {
            Ok(w) => Some(w),
            Err(Error::HalfHeightOutOfRange { .. }) => None,
            Err(e) => return Err(e),
        };
    }

    Ok(FeatureSet {
        peaks,
        dips,
        window: (grid[0], grid[grid.len() - 1]),
        resolution,
        max_loss: f64::NAN,
    })
}

/// Full width of `peak` at half its height, measured from R = 0.
///
/// The grid is walked outward from the peak until R drops below half
/// height; each crossing is then located by bisection on the model.
pub fn measure_fwhm<M: ReflectivityModel + ?Sized>(
    spectrum: &Spectrum,
    model: &M,
    peak: &PeakDescriptor,
) -> Result<f64> {
    measure_fwhm_in(spectrum.grid(), spectrum.reflectivity(), model, peak)
}

pub fn measure_fwhm_in<M: ReflectivityModel + ?Sized>(
    grid: &[f64],
    y: &[f64],
    model: &M,
    peak: &PeakDescriptor,
) -> Result<f64> {
    let half = 0.5 * peak.height;
    let ceiling = peak.height + 1e-12;
    let out_of_range = Error::HalfHeightOutOfRange { center: peak.center };
    let excess = |x: f64| model.reflectivity(x).map(|r| r - half);

    // First grid index strictly to the right of the center.
    let split = grid.partition_point(|&x| x <= peak.center);

    let mut left = None;
    let mut inner = peak.center;
    for j in (0..split).rev() {
        if y[j] > ceiling {
            break;
        }
        if y[j] < half {
            left = Some((grid[j], inner));
            break;
        }
        inner = grid[j];
    }
    let mut right = None;
    let mut inner = peak.center;
    for j in split..grid.len() {
        if y[j] > ceiling {
            break;
        }
        if y[j] < half {
            right = Some((inner, grid[j]));
            break;
        }
        inner = grid[j];
    }
    let (Some((l_out, l_in)), Some((r_in, r_out))) = (left, right) else {
        return Err(out_of_range);
    };
    let lo_cross = bisect_root(&excess, l_out, l_in)?.ok_or(out_of_range.clone())?;
    let hi_cross = bisect_root(&excess, r_in, r_out)?.ok_or(out_of_range)?;
    Ok(hi_cross - lo_cross)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// γ = 0: emitters = dips + 1.
    Lossless,
    /// γ > 0: emitters = peaks.
    Lossy,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountPolicy {
    /// Minimum feature prominence as a share of the tallest peak height.
    pub min_relative_prominence: f64,
}

impl Default for CountPolicy {
    fn default() -> Self {
        Self { min_relative_prominence: DEFAULT_MIN_RELATIVE_PROMINENCE }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CountWarning {
    /// Lossless counting requested but R + T falls below one.
    LossInLosslessSpectrum { max_loss: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmitterCount {
    pub emitters: usize,
    /// Number of dips (lossless) or peaks (lossy) that were counted.
    pub features: usize,
    pub warnings: Vec<CountWarning>,
}

pub fn count_emitters(features: &FeatureSet, regime: Regime) -> EmitterCount {
    count_emitters_with(features, regime, &CountPolicy::default())
}

pub fn count_emitters_with(features: &FeatureSet, regime: Regime, policy: &CountPolicy) -> EmitterCount {
    let mut warnings = Vec::new();
    let (emitters, counted) = match regime {
        Regime::Lossless => {
            if features.max_loss > LOSSLESS_TOLERANCE {
                warnings.push(CountWarning::LossInLosslessSpectrum { max_loss: features.max_loss });
            }
            let dips = features.significant_dips(policy.min_relative_prominence).len();
            (dips + 1, dips)
        }
        Regime::Lossy => {
            let peaks = features.significant_peaks(policy.min_relative_prominence).len();
            (peaks, peaks)
        }
    };
    EmitterCount { emitters, features: counted, warnings }
}

/// Scan window wide enough to hold every collective resonance of `emitters`:
/// ±max(4(Γ+γ), 3·|Im V e^{i k_a d}|) around the span of transition
/// frequencies, maximized over emitters and neighbouring pairs.
pub fn default_scan_window(emitters: &EmitterArray, waveguide: &WaveguideParams) -> Result<(f64, f64)> {
    let es = emitters.emitters();
    let mut half = es
        .iter()
        .map(|e| 4.0 * (e.gamma_wg + e.gamma_free))
        .fold(0.0, f64::max);
    for w in es.windows(2) {
        let d = w[1].position - w[0].position;
        let gamma_wg = (w[0].gamma_wg * w[1].gamma_wg).sqrt();
        let gamma_free = (w[0].gamma_free * w[1].gamma_free).sqrt();
        let shift = phased_coupling(d, gamma_wg, gamma_free, waveguide)?.im.abs();
        half = half.max(2.0 * shift * 1.5);
    }
    let lo = es.iter().map(|e| e.detuning).fold(f64::INFINITY, f64::min);
    let hi = es.iter().map(|e| e.detuning).fold(f64::NEG_INFINITY, f64::max);
    Ok((lo - half, hi + half))
}

/// `points` evenly spaced detunings covering `[min, max]`.
pub fn uniform_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::invalid("points", format!("need at least 2 grid points, got {points}")));
    }
    if !(min.is_finite() && max.is_finite() && max > min) {
        return Err(Error::invalid("grid", format!("need finite min < max, got [{min}, {max}]")));
    }
    let step = (max - min) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| if i + 1 == points { max } else { min + i as f64 * step })
        .collect())
}
