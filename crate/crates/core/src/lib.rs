//! Waveguide-QED spectroscopy: single-photon reflection and transmission of
//! emitters coupled to a one-dimensional waveguide, and the inverse problems
//! of reading deep-subwavelength separations, emitter counts, decay rates
//! and tiny separation changes back out of the spectra.
//!
//! ```
//! use wqed_core::prelude::*;
//!
//! let waveguide = WaveguideParams::default();
//! let pair = EmitterArray::pair(0.05, 1.0, 0.0, RateUnit::Guided).unwrap();
//! let model = ForwardModel::new(pair, waveguide);
//! let grid = uniform_grid(-2.0, 2.0, 2001).unwrap();
//! let spectrum = model.spectrum(&grid).unwrap();
//! let features = find_extrema(&spectrum, &model).unwrap();
//! let dip = features.deepest_dip().unwrap();
//! let d = invert_dip_lossless(dip.center, 1.0, 0, &waveguide).unwrap();
//! assert!((d - 0.05).abs() < 1e-6);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod inversion;
pub mod numerics;
pub mod sensing;
pub mod spectral_features;
pub mod waveguide_model;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::error::{Error, Result};
    pub use crate::inversion::{
        disambiguate_branch, extract_per_emitter, extract_rates, invert_dip_exact, invert_dip_lossless,
        invert_lossless, invert_lossy, invert_separation_lossy, match_branch, Branch, BranchSearch,
        EmitterRates, FitTargets, InversionMethod, InversionResult, RateEstimate, SeparationSearch,
    };
    pub use crate::sensing::{
        dd_to_strain_temperature, fbg_sensitivity_ratio, min_detectable, peak_shift, peak_shift_to_dd,
        read_shift, ProbeBranch, SensingConfig, SensingReading,
    };
    pub use crate::spectral_features::{
        count_emitters, default_scan_window, find_extrema, measure_fwhm, uniform_grid, DipDescriptor,
        EmitterCount, FeatureSet, PeakDescriptor, ReflectivityModel, Regime,
    };
    pub use crate::waveguide_model::{
        apply_gradient_field, compute_spectrum, dipole_coupling, m_matrix, phased_coupling,
        scattering_amplitudes, CollectiveModes, Emitter, EmitterArray, ForwardModel, RateUnit, Spectrum,
        WaveguideParams,
    };
}
