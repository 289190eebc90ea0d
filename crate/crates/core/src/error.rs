use thiserror::Error;

use crate::magnetostatics::Segment;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("flux bias {phi} Φ₀ is outside the supported range [0, {limit}]")]
    FluxDomain { phi: f64, limit: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("both envelope rates vanish, so there is no finite optimum")]
    NoFiniteOptimum,

    #[error("posterior mass underflowed after a readout of {readout}; check the readout widths")]
    DegenerateLikelihood { readout: f64 },

    #[error("field point ({x:e}, {y:e}) m lies on the conductor of segment {segment:?}")]
    OnConductor { segment: Segment, x: f64, y: f64 },

    #[error(
        "quadrature did not converge: estimated error {achieved:e} exceeds requested {requested:e}"
    )]
    Quadrature { achieved: f64, requested: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
