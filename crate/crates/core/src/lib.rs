//! Monte Carlo engine for a two-line non-life insurer: dependent aggregate
//! claims (lognormal marginals coupled by a Frank copula), a jump-diffusion
//! risky asset next to a riskless bond, regulatory balance sheets under the
//! French and Solvency-2-style regimes, and the one-dimensional allocation
//! study maximizing expected economic equity per unit of regulatory capital.
//!
//! Every result is a pure function of the model parameters and a 64-bit
//! seed: each Monte Carlo path draws from its own random substream, so
//! outputs are bit-identical for any worker count and with the `parallel`
//! feature on or off.

pub mod assets;
pub mod claims;
mod exec;
pub mod mfpe;
pub mod regimes;
pub mod stochastic;

/// Errors produced by model constructors and solvers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("empty sample set")]
    EmptySamples,
    #[error("capital search did not converge within {max_iterations} iterations")]
    NoConvergence { max_iterations: u32 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::invalid(name, format!("must be finite, got {value}")))
    }
}
