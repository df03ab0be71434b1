use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dipole coupling undefined at k_a*d = {0} (coincident or unordered emitters)")]
    NonPositiveSeparation(f64),

    #[error("scattering matrix is singular at detuning {detuning} (condition number {condition:e})")]
    SingularMatrix { detuning: f64, condition: f64 },

    #[error("at grid index {index}: {source}")]
    AtGridPoint { index: usize, source: Box<Error> },

    #[error("extremum refinement failed inside bracket [{lo}, {hi}]")]
    RefinementFailure { lo: f64, hi: f64 },

    #[error("half-height crossing of the peak at {center} lies outside the scan window")]
    HalfHeightOutOfRange { center: f64 },

    #[error("separation {0} is not positive")]
    NonPositiveResult(f64),

    #[error("branch index unresolved: candidates {candidates:?} all match within {tolerance}")]
    UnresolvedBranch { candidates: Vec<u32>, tolerance: f64 },

    #[error("peak reflectivity {0} outside (0, 1]")]
    DegenerateReflectivity(f64),

    #[error("peaks not separable: splitting {splitting} <= widest linewidth {max_fwhm}")]
    NotSeparable { splitting: f64, max_fwhm: f64 },

    #[error("no root of the peak-shift equation within [{lo}, {hi}]")]
    RootNotBracketed { lo: f64, hi: f64 },

    #[error("expected at least {needed} {kind}, found {found}")]
    MissingFeatures { kind: &'static str, needed: usize, found: usize },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }

    pub(crate) fn at_index(self, index: usize) -> Self {
        Error::AtGridPoint { index, source: Box::new(self) }
    }

    /// True for failures of the numerics (singular systems, refinement,
    /// root finding, ambiguous fits) as opposed to rejected inputs.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::InvalidParameter { .. }
            | Error::NonPositiveSeparation(_)
            | Error::DegenerateReflectivity(_) => false,
            Error::AtGridPoint { source, .. } => source.is_numerical(),
            _ => true,
        }
    }
}
