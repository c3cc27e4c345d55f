use thiserror::Error;

/// Errors raised by the library. Every variant names the operation that
/// produced it so diagnostics can be traced back to a module.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("{op}: argument out of domain: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("{op}: invalid argument: {detail}")]
    InvalidArgument { op: &'static str, detail: String },

    #[error("meanfield::integrate_trajectory: initial point is off the Kummer surface (|C| = {residual:e})")]
    OffSurface { residual: f64 },

    #[error("{op}: energy {energy} is at a saddle energy; the period diverges logarithmically")]
    SaddleSingularity { op: &'static str, energy: f64 },

    #[error("{op}: energy {energy} lies outside the band [{lo}, {hi}]")]
    OutOfBand {
        op: &'static str,
        energy: f64,
        lo: f64,
        hi: f64,
    },

    #[error("semiclassics::quantize_single_well: action is not monotone over the band ({detail}); use the double-well quantizer")]
    NotSingleWell { detail: String },

    #[error("{op}: found {found} levels, expected {expected} ({detail})")]
    LevelCount {
        op: &'static str,
        expected: usize,
        found: usize,
        detail: String,
    },

    #[error("{op}: inconsistent turning-point branches: {detail}")]
    BranchInconsistency { op: &'static str, detail: String },

    #[error("semiclassics::tunneling_integral: branch discontinuity across the barrier top (jump {jump:e})")]
    BranchDiscontinuity { jump: f64 },

    #[error("{op}: no convergence: {detail}")]
    NoConvergence { op: &'static str, detail: String },

    #[error("quantum::dos_histogram: empty spectrum")]
    EmptySpectrum,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }

    pub(crate) fn invalid(op: &'static str, detail: impl Into<String>) -> Self {
        Error::InvalidArgument {
            op,
            detail: detail.into(),
        }
    }
}
