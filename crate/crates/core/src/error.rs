use thiserror::Error;

/// Errors raised by the toolkit. Variants carry enough context to print a
/// useful message without the caller re-deriving anything.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("degenerate orbit: s0 = 0 has no ellipse")]
    DegenerateOrbit,

    #[error("step dt = {dt:e} exceeds the stability guard {limit:e} set by the {rate} rate")]
    StepTooLarge {
        dt: f64,
        limit: f64,
        rate: &'static str,
    },

    #[error("trajectory window: {0}")]
    Window(String),

    #[error("stationary-point polish failed, best residual {residual:e}")]
    RootPolish { residual: f64 },

    #[error("state is not stationary, residual {residual:e} above {tolerance:e}")]
    NotStationary { residual: f64, tolerance: f64 },

    #[error("operation needs the four-point regime, found {0}")]
    Regime(String),

    #[error("pendulum reached the horizontal (theta >= pi/2) at t = {t}")]
    Domain { t: f64 },

    #[error("tridiagonal eigensolver did not converge for eigenvalue {index}")]
    NoConvergence { index: usize },

    #[error("eigenpair {index} residual {residual:e} exceeds {bound:e}")]
    EigenResidual {
        index: usize,
        residual: f64,
        bound: f64,
    },

    #[error("generalized LMG case, supply pendulum parameters directly")]
    UnsupportedLmg,

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("squeezing time outside the usable window: {0}")]
    SqueezeWindow(String),
}

impl Error {
    /// True when the error is caused by the caller's inputs rather than a
    /// numerical failure inside the toolkit.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::RootPolish { .. }
                | Error::NotStationary { .. }
                | Error::NoConvergence { .. }
                | Error::EigenResidual { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be finite, got {value}"),
        })
    }
}

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<()> {
    ensure_finite(name, value)?;
    if value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be > 0, got {value}"),
        })
    }
}
