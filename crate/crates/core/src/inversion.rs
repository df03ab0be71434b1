//! Recovering emitter separation and decay rates from spectral features.
//!
//! Three routes are provided:
//!
//! * **Lossless dip.** With γ = 0 two emitters reflect nothing at
//!   δω = −(Γ/2)·tan(kd), so the dip position fixes d modulo λ/2.
//!   A gradient field splits the two resonances by G·d and picks the branch.
//! * **Lossy fit.** With γ > 0 the spectrum shows a broad superradiant and a
//!   narrow subradiant peak. Their widths and positions give
//!   Re/Im[V12 e^{i k_a d}], the superradiant height gives Γ/(Γ+γ), and d
//!   is the minimizer of the squared mismatch δS.
//! * **Per emitter.** A strong gradient field separates non-identical
//!   emitters into independent single-emitter lines, each yielding its own
//!   Γ_i and γ_i.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::golden_section_min;
use crate::spectral_features::{FeatureSet, PeakDescriptor, DEFAULT_MIN_RELATIVE_PROMINENCE};
use crate::waveguide_model::{phased_coupling, WaveguideParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InversionMethod {
    LosslessDip,
    LossyFit,
    PerEmitter,
}

impl InversionMethod {
    pub fn tag(self) -> &'static str {
        match self {
            InversionMethod::LosslessDip => "lossless-dip",
            InversionMethod::LossyFit => "lossy-fit",
            InversionMethod::PerEmitter => "per-emitter",
        }
    }
}

/// Periodic branch index n in d = nλ/2 + d₀.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Resolved(u32),
    /// d is only known modulo λ/2.
    Unresolved,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmitterRates {
    pub gamma_wg: f64,
    pub gamma_free: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RateEstimate {
    Identical(EmitterRates),
    PerEmitter(Vec<EmitterRates>),
}

/// A local minimum of the separation fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub separation: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InversionResult {
    pub separation: f64,
    pub branch: Branch,
    pub rates: RateEstimate,
    /// δS for the lossy fit; zero for the closed-form routes.
    pub residual: f64,
    pub method: InversionMethod,
    /// Competing minima within 10% of the best residual. Non-empty means the
    /// fit is ambiguous.
    pub alternatives: Vec<Candidate>,
}

// ---------------------------------------------------------------------------
// Lossless dip

/// Separation from the reflection-dip detuning of two lossless emitters,
/// d = nλ/2 + (λ/2π)·arctan(−2Δ_dip/Γ).
///
/// Uses k ≈ k_a; see [`invert_dip_exact`] for the δk-corrected form.
pub fn invert_dip_lossless(dip: f64, gamma_wg: f64, branch: u32, waveguide: &WaveguideParams) -> Result<f64> {
    if !(gamma_wg > 0.0) {
        return Err(Error::invalid("gamma_wg", format!("must be > 0, got {gamma_wg}")));
    }
    let lambda = waveguide.wavelength();
    let d = branch as f64 * lambda / 2.0 + lambda * (-2.0 * dip / gamma_wg).atan() / (2.0 * PI);
    if !(d > 0.0) {
        return Err(Error::NonPositiveResult(d));
    }
    Ok(d)
}

/// Solves δω_dip = −(Γ/2)·tan((k_a + δk)d) for d with δk = Δ_dip/v_g.
pub fn invert_dip_exact(dip: f64, gamma_wg: f64, branch: u32, waveguide: &WaveguideParams) -> Result<f64> {
    if !(gamma_wg > 0.0) {
        return Err(Error::invalid("gamma_wg", format!("must be > 0, got {gamma_wg}")));
    }
    let phase = (-2.0 * dip / gamma_wg).atan() + branch as f64 * PI;
    let d = phase / waveguide.wavenumber(dip);
    if !(d > 0.0) {
        return Err(Error::NonPositiveResult(d));
    }
    Ok(d)
}

/// Predicted lossless dip detuning for separation `d`.
pub fn lossless_dip_law(separation: f64, gamma_wg: f64, waveguide: &WaveguideParams) -> f64 {
    -0.5 * gamma_wg * (waveguide.k_a() * separation).tan()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchSearch {
    /// Largest n tried.
    pub max_branch: u32,
    /// Splitting mismatch within which a branch counts as matching.
    pub tolerance: f64,
}

impl BranchSearch {
    /// Branches 0..=8 matched to within 5% of the guided linewidth.
    pub fn for_linewidth(gamma_wg: f64) -> Self {
        Self { max_branch: 8, tolerance: 0.05 * gamma_wg }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchMatch {
    pub branch: u32,
    pub separation: f64,
    /// |measured − predicted| splitting.
    pub residual: f64,
}

/// Splitting between the two tallest peaks.
pub fn peak_splitting(features: &FeatureSet) -> Result<f64> {
    let peaks = features.tallest_peaks(2);
    match peaks.as_slice() {
        [a, b] => Ok(b.center - a.center),
        _ => Err(Error::MissingFeatures { kind: "peaks", needed: 2, found: peaks.len() }),
    }
}

/// Picks n such that G·(nλ/2 + d₀) best matches the measured splitting of
/// the two resonances under a gradient field `gradient` (rate per λ).
pub fn match_branch(
    splitting: f64,
    gradient: f64,
    base_separation: f64,
    search: &BranchSearch,
    waveguide: &WaveguideParams,
) -> Result<BranchMatch> {
    if gradient == 0.0 || !gradient.is_finite() {
        return Err(Error::invalid("gradient", "must be finite and non-zero"));
    }
    let half = waveguide.wavelength() / 2.0;
    let candidates: Vec<BranchMatch> = (0..=search.max_branch)
        .map(|n| {
            let separation = n as f64 * half + base_separation;
            let predicted = gradient.abs() * separation;
            BranchMatch { branch: n, separation, residual: (splitting.abs() - predicted).abs() }
        })
        .filter(|c| c.separation > 0.0)
        .collect();
    let matching: Vec<u32> = candidates
        .iter()
        .filter(|c| c.residual <= search.tolerance)
        .map(|c| c.branch)
        .collect();
    if matching.len() > 1 {
        return Err(Error::UnresolvedBranch { candidates: matching, tolerance: search.tolerance });
    }
    candidates
        .into_iter()
        .min_by(|a, b| a.residual.total_cmp(&b.residual))
        .ok_or(Error::NonPositiveResult(base_separation))
}

/// [`match_branch`] using the splitting of the two tallest peaks of a
/// spectrum taken under the gradient field.
pub fn disambiguate_branch(
    features_under_gradient: &FeatureSet,
    gradient: f64,
    base_separation: f64,
    search: &BranchSearch,
    waveguide: &WaveguideParams,
) -> Result<BranchMatch> {
    let splitting = peak_splitting(features_under_gradient)?;
    match_branch(splitting, gradient, base_separation, search, waveguide)
}

/// Lossless pipeline: deepest significant dip → separation.
///
/// With `branch = None` the result is the n = 0 representative and is only
/// meaningful modulo λ/2.
pub fn invert_lossless(
    features: &FeatureSet,
    gamma_wg: f64,
    branch: Option<u32>,
    waveguide: &WaveguideParams,
) -> Result<InversionResult> {
    let dip = features
        .significant_dips(DEFAULT_MIN_RELATIVE_PROMINENCE)
        .into_iter()
        .min_by(|a, b| a.depth.total_cmp(&b.depth))
        .ok_or(Error::MissingFeatures { kind: "dips", needed: 1, found: 0 })?;
    let separation = invert_dip_exact(dip.center, gamma_wg, branch.unwrap_or(0), waveguide)?;
    Ok(InversionResult {
        separation,
        branch: branch.map_or(Branch::Unresolved, Branch::Resolved),
        rates: RateEstimate::Identical(EmitterRates { gamma_wg, gamma_free: 0.0 }),
        residual: 0.0,
        method: InversionMethod::LosslessDip,
        alternatives: Vec::new(),
    })
}

// ---------------------------------------------------------------------------
// Lossy fit

/// Quantities read off a two-peak lossy spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitTargets {
    /// (FWHM_sup − FWHM_sub)/4, the measured Re[V12 e^{i k_a d}].
    pub re_target: f64,
    /// (ω_sup − ω_sub)/2, the measured Im[V12 e^{i k_a d}].
    pub im_target: f64,
    /// Superradiant peak reflectivity.
    pub r_max: f64,
    /// FWHM_sup + FWHM_sub.
    pub fwhm_sum: f64,
}

impl FitTargets {
    pub fn new(re_target: f64, im_target: f64, r_max: f64, fwhm_sum: f64) -> Result<Self> {
        if !(fwhm_sum > 0.0) {
            return Err(Error::invalid("fwhm_sum", format!("must be > 0, got {fwhm_sum}")));
        }
        if !(r_max > 0.0 && r_max <= 1.0) {
            return Err(Error::DegenerateReflectivity(r_max));
        }
        Ok(Self { re_target, im_target, r_max, fwhm_sum })
    }

    /// Targets from a measured superradiant and subradiant peak.
    pub fn from_peaks(superradiant: &PeakDescriptor, subradiant: &PeakDescriptor) -> Result<Self> {
        let (Some(w_sup), Some(w_sub)) = (superradiant.fwhm, subradiant.fwhm) else {
            return Err(Error::MissingFeatures { kind: "peak linewidths", needed: 2, found: 0 });
        };
        Self::new(
            (w_sup - w_sub) / 4.0,
            (superradiant.center - subradiant.center) / 2.0,
            superradiant.height,
            w_sup + w_sub,
        )
    }

    /// Targets from the two tallest peaks; the broader one is superradiant.
    pub fn from_features(features: &FeatureSet) -> Result<Self> {
        let (superradiant, subradiant) = collective_peaks(features)?;
        Self::from_peaks(&superradiant, &subradiant)
    }
}

/// The two tallest peaks as (superradiant, subradiant), the wider line
/// being superradiant.
pub fn collective_peaks(features: &FeatureSet) -> Result<(PeakDescriptor, PeakDescriptor)> {
    let peaks = features.tallest_peaks(2);
    let [a, b] = peaks.as_slice() else {
        return Err(Error::MissingFeatures { kind: "peaks", needed: 2, found: peaks.len() });
    };
    let (wa, wb) = (a.fwhm.unwrap_or(0.0), b.fwhm.unwrap_or(0.0));
    Ok(if wa >= wb { (*a, *b) } else { (*b, *a) })
}

/// Γ and γ from the superradiant height and the linewidth sum:
/// Γ/(Γ+γ) = sqrt(r_max) and Γ + γ = fwhm_sum / 2.
pub fn extract_rates(targets: &FitTargets) -> Result<EmitterRates> {
    let r = targets.r_max;
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::DegenerateReflectivity(r));
    }
    let total = 0.5 * targets.fwhm_sum;
    let ratio = r.sqrt();
    Ok(EmitterRates { gamma_wg: ratio * total, gamma_free: (1.0 - ratio) * total })
}

/// Separation search interval and coarse-grid density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationSearch {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Default for SeparationSearch {
    fn default() -> Self {
        Self { min: 0.001, max: 0.5, points: 10_000 }
    }
}

/// δS(d) = (Re W − re_target)² + (Im W − im_target)², W = V12 e^{i k_a d},
/// in squared reference-rate units.
pub fn separation_residual(
    separation: f64,
    targets: &FitTargets,
    rates: &EmitterRates,
    waveguide: &WaveguideParams,
) -> Result<f64> {
    let w = phased_coupling(separation, rates.gamma_wg, rates.gamma_free, waveguide)?;
    Ok((w.re - targets.re_target).powi(2) + (w.im - targets.im_target).powi(2))
}

/// Local minima of δS on the coarse grid, each polished by golden section.
/// Sorted by residual, ties broken toward smaller d.
pub fn residual_minima(
    targets: &FitTargets,
    rates: &EmitterRates,
    search: &SeparationSearch,
    waveguide: &WaveguideParams,
) -> Result<Vec<Candidate>> {
    if !(search.min > 0.0 && search.max > search.min) || search.points < 3 {
        return Err(Error::invalid("search", "need 0 < min < max and at least 3 points"));
    }
    let step = (search.max - search.min) / (search.points - 1) as f64;
    let ds: Vec<f64> = (0..search.points).map(|i| search.min + i as f64 * step).collect();
    let values = ds
        .iter()
        .map(|&d| separation_residual(d, targets, rates, waveguide))
        .collect::<Result<Vec<f64>>>()?;

    let n = ds.len();
    let mut minima = Vec::new();
    for i in 0..n {
        let left_ok = i == 0 || values[i] < values[i - 1];
        let right_ok = i + 1 == n || values[i] <= values[i + 1];
        if !(left_ok && right_ok) {
            continue;
        }
        let lo = ds[i.saturating_sub(1)];
        let hi = ds[(i + 1).min(n - 1)];
        let objective = |d: f64| separation_residual(d, targets, rates, waveguide);
        let (d, value) = golden_section_min(objective, lo, hi, 1e-13)?;
        let best = if value <= values[i] { Candidate { separation: d, residual: value } } else {
            Candidate { separation: ds[i], residual: values[i] }
        };
        minima.push(best);
    }
    minima.sort_by(|a, b| a.residual.total_cmp(&b.residual).then(a.separation.total_cmp(&b.separation)));
    Ok(minima)
}

/// Separation minimizing δS for known rates.
///
/// Competing minima whose residual differs from the best by less than 10%
/// are returned in `alternatives`.
pub fn invert_separation_lossy(
    targets: &FitTargets,
    rates: &EmitterRates,
    search: &SeparationSearch,
    waveguide: &WaveguideParams,
) -> Result<InversionResult> {
    let minima = residual_minima(targets, rates, search, waveguide)?;
    let best = *minima.first().ok_or(Error::MissingFeatures { kind: "residual minima", needed: 1, found: 0 })?;
    let alternatives = minima[1..]
        .iter()
        .copied()
        .filter(|c| (c.residual - best.residual).abs() < 0.1 * c.residual.max(best.residual))
        .collect();
    Ok(InversionResult {
        separation: best.separation,
        branch: Branch::Resolved(0),
        rates: RateEstimate::Identical(*rates),
        residual: best.residual,
        method: InversionMethod::LossyFit,
        alternatives,
    })
}

/// Lossy pipeline: features → targets → rates → separation.
pub fn invert_lossy(
    features: &FeatureSet,
    search: &SeparationSearch,
    waveguide: &WaveguideParams,
) -> Result<InversionResult> {
    let targets = FitTargets::from_features(features)?;
    let rates = extract_rates(&targets)?;
    invert_separation_lossy(&targets, &rates, search, waveguide)
}

// ---------------------------------------------------------------------------
// Per emitter

/// Γ and γ of a lone emitter from its resonant reflectivity
/// (1 + γ/Γ)⁻² and linewidth Γ + γ.
pub fn single_emitter_rates(height: f64, fwhm: f64) -> Result<EmitterRates> {
    if !(height > 0.0 && height <= 1.0) {
        return Err(Error::DegenerateReflectivity(height));
    }
    if !(fwhm > 0.0) {
        return Err(Error::invalid("fwhm", format!("must be > 0, got {fwhm}")));
    }
    let ratio = height.sqrt();
    Ok(EmitterRates { gamma_wg: ratio * fwhm, gamma_free: (1.0 - ratio) * fwhm })
}

/// Rates of two non-identical emitters whose lines are split apart by a
/// gradient field, and their separation from the splitting.
pub fn extract_per_emitter(features: &FeatureSet, gradient: f64) -> Result<InversionResult> {
    if gradient == 0.0 || !gradient.is_finite() {
        return Err(Error::invalid("gradient", "must be finite and non-zero"));
    }
    let peaks = features.tallest_peaks(2);
    let [left, right] = peaks.as_slice() else {
        return Err(Error::MissingFeatures { kind: "peaks", needed: 2, found: peaks.len() });
    };
    let (Some(w_left), Some(w_right)) = (left.fwhm, right.fwhm) else {
        return Err(Error::MissingFeatures { kind: "peak linewidths", needed: 2, found: 0 });
    };
    let splitting = right.center - left.center;
    let max_fwhm = w_left.max(w_right);
    if !(splitting > max_fwhm) {
        return Err(Error::NotSeparable { splitting, max_fwhm });
    }
    // Left peak belongs to the emitter with the lower detuning.
    let mut rates = vec![
        single_emitter_rates(left.height, w_left)?,
        single_emitter_rates(right.height, w_right)?,
    ];
    if gradient < 0.0 {
        rates.reverse();
    }
    Ok(InversionResult {
        separation: splitting / gradient.abs(),
        branch: Branch::Resolved(0),
        rates: RateEstimate::PerEmitter(rates),
        residual: 0.0,
        method: InversionMethod::PerEmitter,
        alternatives: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn wg() -> WaveguideParams {
        WaveguideParams::default()
    }

    #[test]
    fn dip_inversion_worked_values() {
        let d = invert_dip_lossless(-0.162, 1.0, 0, &wg()).unwrap();
        assert!((d - 0.05).abs() < 5e-4, "{d}");
        let d = invert_dip_lossless(-0.688, 1.0, 0, &wg()).unwrap();
        assert!((d - 0.15).abs() < 5e-4, "{d}");
        assert_relative_eq!(invert_dip_lossless(0.0, 1.0, 1, &wg()).unwrap(), 0.5);
    }

    #[test]
    fn dip_inversion_rejects_non_positive_results() {
        assert_eq!(invert_dip_lossless(0.0, 1.0, 0, &wg()), Err(Error::NonPositiveResult(0.0)));
        assert!(matches!(invert_dip_lossless(0.3, 1.0, 0, &wg()), Err(Error::NonPositiveResult(_))));
        assert!(invert_dip_lossless(-0.1, 0.0, 0, &wg()).is_err());
    }

    #[test]
    fn exact_and_approximate_dip_inversions_agree_for_fast_light() {
        let a = invert_dip_lossless(-0.4, 1.0, 0, &wg()).unwrap();
        let b = invert_dip_exact(-0.4, 1.0, 0, &wg()).unwrap();
        assert!((a - b).abs() / a < 1e-6);
    }

    #[test]
    fn branch_matching_worked_values() {
        let search = BranchSearch::for_linewidth(1.0);
        let m = match_branch(1.1, 2.0, 0.05, &search, &wg()).unwrap();
        assert_eq!(m.branch, 1);
        assert_relative_eq!(m.separation, 0.55);
        let m = match_branch(2.1, 2.0, 0.05, &search, &wg()).unwrap();
        assert_eq!(m.branch, 2);
        assert_relative_eq!(m.separation, 1.05);
        let m = match_branch(0.1, 2.0, 0.05, &search, &wg()).unwrap();
        assert_eq!(m.branch, 0);
    }

    #[test]
    fn weak_gradient_leaves_branch_unresolved() {
        let search = BranchSearch { max_branch: 4, tolerance: 0.05 };
        let err = match_branch(0.11, 0.1, 0.05, &search, &wg()).unwrap_err();
        assert!(matches!(err, Error::UnresolvedBranch { .. }));
    }

    #[test]
    fn rate_extraction_worked_values() {
        let r = extract_rates(&FitTargets::new(1.44, 23.388, 0.44, 6.0).unwrap()).unwrap();
        assert!((r.gamma_wg - 1.99).abs() < 5e-3 && (r.gamma_free - 1.01).abs() < 5e-3, "{r:?}");
        let r = extract_rates(&FitTargets::new(1.36, 5.742, 0.44, 6.08).unwrap()).unwrap();
        assert!((r.gamma_wg - 2.02).abs() < 5e-3 && (r.gamma_free - 1.02).abs() < 5e-3, "{r:?}");
        let r = extract_rates(&FitTargets::new(0.0, 1.0, 1.0, 7.0).unwrap()).unwrap();
        assert_eq!((r.gamma_wg, r.gamma_free), (3.5, 0.0));
    }

    #[test]
    fn degenerate_reflectivity_is_rejected() {
        assert_eq!(FitTargets::new(0.0, 1.0, 0.0, 1.0), Err(Error::DegenerateReflectivity(0.0)));
        assert!(FitTargets::new(0.0, 1.0, 1.2, 1.0).is_err());
        let bad = FitTargets { re_target: 0.0, im_target: 1.0, r_max: -0.1, fwhm_sum: 1.0 };
        assert!(extract_rates(&bad).is_err());
    }

    #[test]
    fn lossy_separation_worked_values() {
        let rates = EmitterRates { gamma_wg: 1.99, gamma_free: 1.01 };
        let t = FitTargets::new(1.44, 23.388, 0.44, 6.0).unwrap();
        let res = invert_separation_lossy(&t, &rates, &SeparationSearch::default(), &wg()).unwrap();
        assert!((res.separation - 0.0502).abs() < 5e-4, "{res:?}");
        assert!(res.residual <= 0.01);
        assert!(res.alternatives.is_empty());

        let rates = EmitterRates { gamma_wg: 2.02, gamma_free: 1.02 };
        let t = FitTargets::new(1.36, 5.742, 0.44, 6.08).unwrap();
        let res = invert_separation_lossy(&t, &rates, &SeparationSearch::default(), &wg()).unwrap();
        assert!((res.separation - 0.0808).abs() < 1e-3, "{res:?}");
        assert!(res.residual <= 0.01);
    }

    #[test]
    fn exact_targets_round_trip() {
        let rates = EmitterRates { gamma_wg: 2.0, gamma_free: 1.0 };
        for d in [0.03, 0.05, 0.0777, 0.12] {
            let w = phased_coupling(d, 2.0, 1.0, &wg()).unwrap();
            let t = FitTargets::new(w.re, w.im, 0.44, 6.0).unwrap();
            let res = invert_separation_lossy(&t, &rates, &SeparationSearch::default(), &wg()).unwrap();
            assert!((res.separation - d).abs() / d < 1e-6, "{d}: {res:?}");
            assert!(res.residual < 1e-10);
        }
    }

    #[test]
    fn per_emitter_rates_worked_values() {
        let r = single_emitter_rates(0.45, 1.45).unwrap();
        assert!((r.gamma_wg - 0.97).abs() < 5e-3 && (r.gamma_free - 0.48).abs() < 5e-3, "{r:?}");
        let r = single_emitter_rates(0.41, 2.46).unwrap();
        assert!((r.gamma_wg - 1.58).abs() < 5e-3 && (r.gamma_free - 0.88).abs() < 5e-3, "{r:?}");
    }

    fn two_peaks(c1: f64, w1: f64, c2: f64, w2: f64) -> FeatureSet {
        let p = |c, w, h| PeakDescriptor { center: c, height: h, fwhm: Some(w), prominence: h };
        FeatureSet {
            peaks: vec![p(c1, w1, 0.45), p(c2, w2, 0.41)],
            dips: vec![],
            window: (-10.0, 30.0),
            resolution: 1e-3,
            max_loss: 0.5,
        }
    }

    #[test]
    fn per_emitter_separation_from_splitting() {
        let res = extract_per_emitter(&two_peaks(0.0, 1.45, 12.6, 2.46), 6.0).unwrap();
        assert_relative_eq!(res.separation, 2.1, max_relative = 1e-12);
        assert_eq!(res.method, InversionMethod::PerEmitter);
        let RateEstimate::PerEmitter(rates) = res.rates else { panic!() };
        assert_eq!(rates.len(), 2);
    }

    #[test]
    fn overlapping_lines_are_not_separable() {
        let err = extract_per_emitter(&two_peaks(0.0, 1.45, 2.0, 2.46), 6.0).unwrap_err();
        assert!(matches!(err, Error::NotSeparable { .. }));
    }
}
