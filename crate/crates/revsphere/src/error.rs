//! Crate-wide error type.
//!
//! Numerical routines that can fail in documented ways return
//! [`Result`]; errors carry enough state to diagnose the failure
//! (the best estimate so far, the last good ODE state, and so on).

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature exhausted its panel budget. The payload holds
    /// the best value and error estimate reached, so callers that can
    /// tolerate a degraded estimate may still use it.
    #[error("quadrature budget exhausted: value ~ {value:.6e}, error estimate {err_estimate:.3e} after {evaluations} evaluations")]
    QuadBudget {
        value: f64,
        err_estimate: f64,
        evaluations: usize,
    },

    /// The regularized part of a square-root-singular integrand blows up
    /// at the singular endpoint, i.e. the singularity is stronger than
    /// `1/sqrt`.
    #[error("integrand is not 1/sqrt-singular at the endpoint: {0}")]
    SingularityOrder(String),

    /// An integrand or objective produced a non-finite value.
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    /// Inversion target lies outside the range spanned by the bracket.
    #[error("target {y:.6e} outside function range [{f_lo:.6e}, {f_hi:.6e}]")]
    OutOfRange { y: f64, f_lo: f64, f_hi: f64 },

    /// Samples taken during inversion contradict monotonicity.
    #[error("function is not monotone over the bracket (violation near x = {x:.6e})")]
    NonMonotone { x: f64 },

    /// The ODE step size underflowed; `state` is the last accepted state.
    #[error("ODE step size underflow at s = {s:.6e}")]
    StepUnderflow { s: f64, state: Vec<f64> },

    /// A scan that was expected to locate something (threshold index,
    /// minimality loss, ...) came up empty.
    #[error("not found: {0}")]
    NotFound(String),

    /// The fan distance oracle found no connecting geodesic.
    #[error("no geodesic from start reached the target within length {searched:.6e}")]
    Unreachable { searched: f64 },

    /// Evaluation requested too close to a pole for the formula in use.
    #[error("evaluation too close to a pole: {0}")]
    NearPole(String),
}

pub type Result<T> = std::result::Result<T, Error>;
