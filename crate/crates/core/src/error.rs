use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The transfer series only converges for R < 1.
    #[error("reflectance {0} must be below 1 for the cavity series to converge")]
    ReflectanceTooHigh(f64),

    #[error("curve is under-sampled: step {step:.3e} s exceeds {max_step:.3e} s needed to resolve regions")]
    UnderSampled { step: f64, max_step: f64 },

    #[error("interference regions at {first:.6e} s and {second:.6e} s are closer than 4 sigma ({min_gap:.3e} s)")]
    OverlappingRegions {
        first: f64,
        second: f64,
        min_gap: f64,
    },

    #[error(
        "sweep range [{min:.6e}, {max:.6e}] is not symmetric about zero with an odd sample count"
    )]
    AsymmetricSweep { min: f64, max: f64 },

    #[error("quadrature did not converge: doubling the grid changed the result by {change:.3e}")]
    NonConvergence { change: f64 },

    #[error("oracle mismatch: relative deviation {deviation:.3e} exceeds {tolerance:.3e}")]
    OracleMismatch { deviation: f64, tolerance: f64 },

    #[error("malformed curve data: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Numerical failures as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::UnderSampled { .. }
                | Error::OverlappingRegions { .. }
                | Error::NonConvergence { .. }
                | Error::OracleMismatch { .. }
        )
    }
}
