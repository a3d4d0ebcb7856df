//! The half-period function of a profile.
//!
//! A unit-speed geodesic that is not a meridian oscillates between two
//! parallels `r = x0` and `r = pi - x0`, where `x0` is determined by its
//! Clairaut constant `nu` through `m(x0) = nu`. Over half an oscillation
//! the geodesic advances in `theta` by the half-period
//!
//! `phi(nu) = 2 * integral from x0 to pi/2 of nu / (m sqrt(m^2 - nu^2)) dx`.
//!
//! Two independent routes compute it:
//!
//! * [`half_period`]: substitute
//!   `u(sigma) = nu^2 / (cos^2 sigma + (nu/a)^2 sin^2 sigma)`, which
//!   absorbs the turning-point singularity and leaves
//!   `phi(nu) = (2/a) * integral over sigma in [0, pi/2] of A(x(u))`,
//!   where `x(u) = f^{-1}(sqrt u)` inverts the profile on `[0, pi/2]`
//!   and `A(x) = sqrt(a^2 - m^2) / m'` (here in its per-family closed
//!   form, [`a_closed`], which is singularity-free). This is the
//!   production path and works for every `nu` in `(0, a]`.
//! * [`half_period_direct`]: evaluate the defining improper integral,
//!   with the `1/sqrt` turning-point singularity handled by the
//!   square-root endpoint rule and a Taylor-stabilized difference
//!   quotient. Slower and capped at `nu <= a (1 - 1e-3)`, it exists to
//!   cross-check the first route.
//!
//! The weighted mean of the curvature inside the band swept by the
//! geodesic makes `phi` strictly decreasing for the steeper profiles
//! here; [`monotonicity_report`] measures that on a `nu`-grid with
//! margins expressed in units of the quadrature error estimates.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::numerics::{
    integrate_adaptive, integrate_sqrt_singular, invert_monotone, Interval, QuadResult,
    SingularEnd,
};
use crate::profiles::MetricProfile;

/// Relative distance from the equator radius beyond which the direct
/// route refuses to integrate: `nu <= a * (1 - DIRECT_NU_MARGIN)`.
pub const DIRECT_NU_MARGIN: f64 = 1e-3;

/// Distance from the equator below which [`a_function`] switches to its
/// limit value; closer than this the defining quotient loses half its
/// digits to cancellation.
const EQUATOR_GUARD: f64 = 1e-5;

/// Closed-form `A(x) = sqrt(a^2 - m^2) / m'` per family, valid on all of
/// `[0, pi/2]`:
///
/// * round sphere: `1`;
/// * lambda family: `(1 + lambda cos^2 x) / sqrt(lambda + 1)`;
/// * generator profiles `m = a sin h`: `1 / h'(x)`.
pub fn a_closed(p: &MetricProfile, x: f64) -> f64 {
    if let Some(gen) = p.generator() {
        return 1.0 / gen.h_d1(x);
    }
    match p.lambda() {
        Some(lambda) => (1.0 + lambda * x.cos().powi(2)) / (lambda + 1.0).sqrt(),
        None => 1.0,
    }
}

/// Derivative of [`a_closed`].
pub fn a_closed_derivative(p: &MetricProfile, x: f64) -> f64 {
    if let Some(gen) = p.generator() {
        return -gen.h_d2(x) / gen.h_d1(x).powi(2);
    }
    match p.lambda() {
        Some(lambda) => -lambda * (2.0 * x).sin() / (lambda + 1.0).sqrt(),
        None => 0.0,
    }
}

/// Generic `A(x) = sqrt(a^2 - m^2) / m'` straight from the defining
/// quotient, independent of any per-family simplification. Within
/// `1e-5` of the equator the quotient is `0/0` and the limit
/// `sqrt(a / -m''(pi/2))` is returned instead (second-order accurate).
pub fn a_function(p: &MetricProfile, x: f64) -> Result<f64> {
    if !(0.0..=FRAC_PI_2).contains(&x) {
        return Err(Error::Domain(format!(
            "A is defined on [0, pi/2], got x = {x}"
        )));
    }
    let a = p.equator_radius();
    if FRAC_PI_2 - x < EQUATOR_GUARD {
        return Ok((a / -p.d2m(FRAC_PI_2)).sqrt());
    }
    let m = p.m(x);
    Ok(((a - m) * (a + m)).sqrt() / p.dm(x))
}

/// Meridian distance `x0` of the turning parallel: the unique solution of
/// `m(x0) = nu` in `[0, pi/2]`.
pub fn turning_point(p: &MetricProfile, nu: f64, tol: f64) -> Result<f64> {
    let a = p.equator_radius();
    if !(nu > 0.0 && nu <= a) {
        return Err(Error::Domain(format!(
            "Clairaut constant must lie in (0, a = {a}], got {nu}"
        )));
    }
    invert_monotone(|x| p.m(x), nu, Interval::new(0.0, FRAC_PI_2)?, tol)
}

fn check_nu(nu: f64, a: f64) -> Result<()> {
    if !(nu > 0.0 && nu <= a) {
        return Err(Error::Domain(format!(
            "Clairaut constant must lie in (0, a = {a}], got {nu}"
        )));
    }
    Ok(())
}

/// Half-period by the compactified route; accepts any `nu` in `(0, a]`.
/// The returned error estimate covers the quadrature only (profile
/// inversion is solved three orders tighter than `tol`).
pub fn half_period(p: &MetricProfile, nu: f64, tol: f64) -> Result<QuadResult> {
    let a = p.equator_radius();
    check_nu(nu, a)?;
    let ratio2 = (nu / a).powi(2);
    let invert_tol = (tol * 1e-3).min(1e-13);

    let mut inner: Result<()> = Ok(());
    let integrand = |sigma: f64| -> f64 {
        let (s, c) = sigma.sin_cos();
        let root_u = (nu / (c * c + ratio2 * s * s).sqrt()).min(a);
        match invert_monotone(|x| p.m(x), root_u, Interval::new(0.0, FRAC_PI_2).unwrap(), invert_tol)
        {
            Ok(x) => a_closed(p, x),
            Err(e) => {
                if inner.is_ok() {
                    inner = Err(e);
                }
                f64::NAN
            }
        }
    };
    let quad = integrate_adaptive(integrand, 0.0, FRAC_PI_2, tol * a / 2.0);
    inner?;
    let q = quad?;
    Ok(QuadResult {
        value: 2.0 * q.value / a,
        err_estimate: 2.0 * q.err_estimate / a,
        evaluations: q.evaluations,
    })
}

/// Half-period by the defining improper integral. The turning-point
/// factor is written `m^2 - nu^2 = (x - x0) * dq(x) * (m + nu)` with
/// `dq(x) = (m(x) - m(x0)) / (x - x0)` evaluated through a third-order
/// Taylor form near `x0`, so the integrable `1/sqrt` singularity can be
/// handed to the square-root endpoint rule without cancellation.
pub fn half_period_direct(p: &MetricProfile, nu: f64, tol: f64) -> Result<QuadResult> {
    let a = p.equator_radius();
    check_nu(nu, a)?;
    if nu > a * (1.0 - DIRECT_NU_MARGIN) {
        return Err(Error::Domain(format!(
            "direct route needs nu <= a (1 - {DIRECT_NU_MARGIN}); got nu = {nu}, a = {a}"
        )));
    }
    let x0 = turning_point(p, nu, 1e-13)?;
    let (m0, dm0, d2m0, d3m0) = (p.m(x0), p.dm(x0), p.d2m(x0), p.d3m(x0));

    // Difference quotient (m(x) - m(x0)) / (x - x0), Taylor-stabilized
    // where direct subtraction would cancel.
    let dq = |x: f64| -> f64 {
        let d = x - x0;
        if d.abs() < 1e-4 {
            dm0 + d2m0 * d / 2.0 + d3m0 * d * d / 6.0
        } else {
            (p.m(x) - m0) / d
        }
    };

    let xm = 0.5 * (x0 + FRAC_PI_2);
    let lower = integrate_sqrt_singular(
        |x| {
            let m = p.m(x);
            nu / (m * (dq(x) * (m + nu)).sqrt())
        },
        x0,
        xm,
        SingularEnd::Lower,
        tol / 4.0,
    )?;
    let upper = integrate_adaptive(
        |x| {
            let m = p.m(x);
            nu / (m * ((m - nu) * (m + nu)).sqrt())
        },
        xm,
        FRAC_PI_2,
        tol / 4.0,
    )?;

    Ok(QuadResult {
        value: 2.0 * (lower.value + upper.value),
        err_estimate: 2.0 * (lower.err_estimate + upper.err_estimate),
        evaluations: lower.evaluations + upper.evaluations,
    })
}

/// One evaluated half-period on the `nu`-grid.
#[derive(Debug, Clone, Copy)]
pub struct HalfPeriodSample {
    pub nu: f64,
    pub value: f64,
    pub err_estimate: f64,
}

/// Decrease certificate for `phi` on a uniform `nu`-grid spanning
/// `[a/100, a * 99/100]`.
#[derive(Debug, Clone)]
pub struct MonotonicityReport {
    pub samples: Vec<HalfPeriodSample>,
    /// Every consecutive pair decreased by more than ten times the sum of
    /// the two quadrature error estimates.
    pub strictly_decreasing: bool,
    /// Minimum over pairs of `drop - 10 * (err_i + err_{i+1})`; positive
    /// iff `strictly_decreasing`.
    pub min_excess: f64,
}

pub fn monotonicity_report(
    p: &MetricProfile,
    sample_count: usize,
    tol: f64,
) -> Result<MonotonicityReport> {
    if sample_count < 2 {
        return Err(Error::Domain(format!(
            "monotonicity needs at least 2 samples, got {sample_count}"
        )));
    }
    let a = p.equator_radius();
    let (lo, hi) = (a / 100.0, a * 0.99);
    let mut samples = Vec::with_capacity(sample_count);
    for i in 0..sample_count {
        let nu = lo + (hi - lo) * i as f64 / (sample_count - 1) as f64;
        let q = half_period(p, nu, tol)?;
        samples.push(HalfPeriodSample { nu, value: q.value, err_estimate: q.err_estimate });
    }
    let mut min_excess = f64::INFINITY;
    for w in samples.windows(2) {
        let drop = w[0].value - w[1].value;
        let excess = drop - 10.0 * (w[0].err_estimate + w[1].err_estimate);
        min_excess = min_excess.min(excess);
    }
    Ok(MonotonicityReport { samples, strictly_decreasing: min_excess > 0.0, min_excess })
}
