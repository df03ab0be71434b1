#![allow(dead_code)]

use wqed_core::prelude::*;
use wqed_core::waveguide_model::CollectiveModes;

pub fn wg() -> WaveguideParams {
    WaveguideParams::default()
}

pub fn pair(d: f64, gamma_wg: f64, gamma_free: f64) -> EmitterArray {
    EmitterArray::pair(d, gamma_wg, gamma_free, RateUnit::FreeSpace).unwrap()
}

/// Uniform grid over the default window, densified around both collective
/// lines so the subradiant peak is resolved even when it is very narrow.
pub fn resolving_grid(d: f64, gamma_wg: f64, gamma_free: f64, points: usize) -> Vec<f64> {
    let arr = pair(d, gamma_wg, gamma_free);
    let (lo, hi) = default_scan_window(&arr, &wg()).unwrap();
    let mut grid = uniform_grid(lo, hi, points).unwrap();
    let modes = CollectiveModes::new(d, gamma_wg, gamma_free, &wg()).unwrap();
    for (center, width) in [modes.superradiant(), modes.subradiant()] {
        let half = 6.0 * width.max(1e-9);
        grid.extend(uniform_grid(center - half, center + half, 801).unwrap());
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * b.abs().max(1.0));
    grid
}

pub fn features_for(arr: EmitterArray, grid: &[f64]) -> FeatureSet {
    let model = ForwardModel::new(arr, wg());
    let spectrum = model.spectrum(grid).unwrap();
    find_extrema(&spectrum, &model).unwrap()
}

pub fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
