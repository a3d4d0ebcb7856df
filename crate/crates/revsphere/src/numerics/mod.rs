//! Domain-agnostic numerical kernels.
//!
//! Everything downstream (profiles, curvature, half-periods, geodesics)
//! is built on the routines in this module: adaptive Gauss-Kronrod
//! quadrature with an explicit panel budget, a substitution-based rule
//! for `1/sqrt` endpoint singularities, bracketed monotone inversion,
//! golden-section minimization, sign-change scanning, and an embedded
//! Runge-Kutta integrator with dense output.
//!
//! All routines are deterministic: identical inputs produce bitwise
//! identical outputs.

mod minimize;
mod ode;
mod quad;
mod root;

pub use minimize::minimize_scalar;
pub use ode::{ode_solve, ode_solve_sampled, OdeTrajectory};
pub use quad::{integrate_adaptive, integrate_sqrt_singular, SingularEnd};
pub use root::{invert_monotone, refine_sign_change, sign_changes};

use crate::error::{Error, Result};

/// Result of a quadrature: the value, a bound-style error estimate and
/// the number of integrand evaluations spent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Estimated absolute error, always >= 0.
    pub err_estimate: f64,
    /// Integrand evaluations, always >= 1.
    pub evaluations: usize,
}

/// A nonempty ordered interval `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Domain(format!(
                "interval requires finite lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// `n` points splitting the interval into `n+1` equal parts, with both
    /// endpoints excluded by a half step: the first point is `lo + w/(2n)`
    /// and the last is `hi - w/(2n)`. Used wherever a condition is open at
    /// one or both ends.
    pub fn open_grid(&self, n: usize) -> Vec<f64> {
        let w = self.width();
        let n = n.max(1);
        let step = w / n as f64;
        (0..n).map(|i| self.lo + (i as f64 + 0.5) * step).collect()
    }

    /// `n >= 2` points including both endpoints.
    pub fn closed_grid(&self, n: usize) -> Vec<f64> {
        let n = n.max(2);
        let step = self.width() / (n - 1) as f64;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.hi
                } else {
                    self.lo + i as f64 * step
                }
            })
            .collect()
    }
}

/// Default absolute tolerance used by quadrature callers in this crate.
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;
