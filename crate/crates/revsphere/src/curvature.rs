//! Gaussian curvature along meridians, its derivative, and grid
//! certificates for the sign alternation produced by a corrugated
//! generator.
//!
//! For a profile `m` the curvature at meridian distance `r` is
//! `G = -m''/m`, with the pole limit `-m'''(0)` (the profile has unit
//! slope there). For generator-built profiles `m = a sin h` the same
//! quantity can be written entirely in terms of `h`:
//!
//! `G = h'^2 - h'' cot h`,
//!
//! and its derivative satisfies the identity
//!
//! `2 G' sin^2 h = 2 (2 - cos 2h) h' h'' - sin 2h * h'''`.
//!
//! Both routes are implemented separately so they can cross-check each
//! other; nothing here falls back to finite differences.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::numerics::{refine_sign_change, sign_changes, Interval};
use crate::profiles::{
    derivative_sup_bounds, BFunction, HGenerator, MetricProfile, MIN_GRID,
};

/// Distance from a pole below which curvature switches to the limit
/// formula `-m'''/m'` (second-order accurate, exact at the pole).
const POLE_GUARD: f64 = 1e-4;

/// Gaussian curvature `G(r) = -m''(r)/m(r)` with pole handling.
pub fn gaussian_curvature(p: &MetricProfile, r: f64) -> f64 {
    debug_assert!((0.0..=PI).contains(&r), "meridian distance out of range: {r}");
    let from_pole = r.min(PI - r);
    if from_pole < POLE_GUARD {
        // -m''/m and -m'''/m' share the pole limit, but the latter stays
        // well conditioned as m -> 0.
        -p.d3m(r) / p.dm(r)
    } else {
        -p.d2m(r) / p.m(r)
    }
}

/// Curvature through the generator: `G = h'^2 - h'' cot h`.
///
/// Only valid where `sin h` is bounded away from zero; the caller keeps
/// `x` away from the poles.
pub fn curvature_via_h(gen: &HGenerator, x: f64) -> f64 {
    let h = gen.h(x);
    gen.h_d1(x).powi(2) - gen.h_d2(x) * h.cos() / h.sin()
}

/// Derivative of the curvature, `G'(r) = (m' m'' - m m''') / m^2`.
pub fn curvature_derivative(p: &MetricProfile, r: f64) -> Result<f64> {
    let m = p.m(r);
    if m.abs() < 1e-8 {
        return Err(Error::NearPole(format!(
            "curvature derivative is indeterminate at r = {r:.6e} (m = {m:.3e})"
        )));
    }
    Ok((p.dm(r) * p.d2m(r) - m * p.d3m(r)) / (m * m))
}

/// Derivative of the curvature through the generator identity
/// `2 G' sin^2 h = 2 (2 - cos 2h) h' h'' - sin 2h * h'''`.
pub fn curvature_derivative_via_h(gen: &HGenerator, x: f64) -> Result<f64> {
    let h = gen.h(x);
    let sh = h.sin();
    if sh.abs() < 1e-8 {
        return Err(Error::NearPole(format!(
            "curvature derivative is indeterminate at x = {x:.6e} (sin h = {sh:.3e})"
        )));
    }
    let numerator = 2.0 * (2.0 - (2.0 * h).cos()) * gen.h_d1(x) * gen.h_d2(x)
        - (2.0 * h).sin() * gen.h_d3(x);
    Ok(numerator / (2.0 * sh * sh))
}

/// `h'''` at the corrugation node `t_k = k pi / (2 n^2)`, where the
/// oscillatory phase is a multiple of pi and the third derivative
/// collapses to
///
/// `h'''(t_k) = 8 alpha cos 2 t_k + (-1)^k (6 B''(t_k)/n^3 - 8 n B(t_k))`.
pub fn h_triple_prime_at_node(gen: &HGenerator, k: u32) -> Result<f64> {
    let t = gen.t_k(k)?;
    let n = gen.n as f64;
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    Ok(8.0 * gen.alpha * (2.0 * t).cos()
        + sign * (6.0 * gen.b.d2(t) / n.powi(3) - 8.0 * n * gen.b.eval(t)))
}

/// Constants controlling where the corrugation dominates the curvature
/// derivative:
///
/// * `epsilon0 = (2 delta - sin 2 delta) / 8`, a lower bound on how far
///   `h` can drift from `x` inside `[delta, pi/2 - delta]` before the
///   corrugation matters;
/// * `c_delta = min(sin 6 epsilon0, sin(delta - 2 epsilon0))`, a
///   positive floor for `sin 2h` on that window;
/// * `n0`, the smallest corrugation count whose perturbation stays below
///   `epsilon0` in the sup norm.
#[derive(Debug, Clone, Copy)]
pub struct AlternationConstants {
    pub epsilon0: f64,
    pub c_delta: f64,
    pub n0: u32,
}

pub fn alternation_constants(
    delta: f64,
    b: &BFunction,
    n_max: u32,
    grid_size: usize,
) -> Result<AlternationConstants> {
    if !(delta > 0.0 && delta < FRAC_PI_2) {
        return Err(Error::Domain(format!(
            "window margin must lie in (0, pi/2), got {delta}"
        )));
    }
    let epsilon0 = (2.0 * delta - (2.0 * delta).sin()) / 8.0;
    let c_delta = (6.0 * epsilon0).sin().min((delta - 2.0 * epsilon0).sin());

    let g = grid_size.max(MIN_GRID);
    let mut n0 = None;
    for n in 1..=n_max {
        let w = 2.0 * (n as f64).powi(2);
        let n5 = (n as f64).powi(5);
        let grid = g.max(4 * (n as usize).pow(2));
        let step = PI / (grid - 1) as f64;
        let mut sup: f64 = 0.0;
        for i in 0..grid {
            let x = (i as f64 * step).min(PI);
            sup = sup.max((b.eval(x) * (w * x).sin() / n5).abs());
        }
        if sup < epsilon0 {
            n0 = Some(n);
            break;
        }
    }
    let n0 = n0.ok_or_else(|| {
        Error::NotFound(format!(
            "no n <= {n_max} brings the corrugation below epsilon0 = {epsilon0:.3e}"
        ))
    })?;
    Ok(AlternationConstants { epsilon0, c_delta, n0 })
}

/// Diagnostics at one corrugation node `t_k`.
#[derive(Debug, Clone)]
pub struct NodeDiagnostic {
    pub k: u32,
    pub t: f64,
    /// The smooth remainder
    /// `f = 2 (2 - cos 2h) h' h'' - sin 2h (8 alpha cos 2 t_k + (-1)^k 6 B''/n^3)`,
    /// i.e. everything in `2 G' sin^2 h` except the dominant envelope
    /// term `(-1)^k 8 n B sin 2h`.
    pub f: f64,
    /// `f / ((-1)^k 8 n B sin 2h)`; `None` when the envelope vanishes at
    /// the node and no sign is forced.
    pub epsilon: Option<f64>,
    /// `G'(t_k)` by the generator identity.
    pub derivative: f64,
    /// `+1` for even `k`, `-1` for odd `k`: the sign the envelope forces.
    pub expected_sign: i8,
    pub sign_ok: bool,
    /// `|2 G' sin^2 h - (f + envelope)|`, a residual between the two
    /// routes to the same number; should sit at rounding level.
    pub identity_residual: f64,
}

/// Certificate that the curvature derivative alternates in sign across
/// the corrugation nodes inside a window.
#[derive(Debug, Clone)]
pub struct AlternationReport {
    pub delta: f64,
    pub constants: AlternationConstants,
    pub nodes: Vec<NodeDiagnostic>,
    /// Every node with a nonvanishing envelope carried the forced sign.
    pub strict_alternation: bool,
    pub max_abs_epsilon: f64,
    /// `max |epsilon| < 1/2`, the condition that forces the signs.
    pub epsilon_ok: bool,
    pub max_abs_f: f64,
    /// A-priori bound `24 + 8 alpha + 6 sup|B''| / n^3` on `|f|`, using
    /// the certified derivative bound `sup h', sup h'' <= 2`.
    pub f_bound: f64,
    pub f_ok: bool,
    pub min_sin_2h: f64,
    /// `sin 2h >= c_delta` across the nodes.
    pub sin_ok: bool,
    /// Grid suprema of `h'` and `h''` really are within the bound 2 used
    /// by `f_bound`.
    pub sup_ok: bool,
    /// `n >= n0`, so the window constants apply to this generator.
    pub n_ok: bool,
    /// Nodes where the envelope vanished (no sign forced there).
    pub gap_count: usize,
}

/// Evaluate the alternation certificate for `gen` on `window`, which must
/// sit inside `[delta, pi/2 - delta]`.
pub fn alternation_report(
    gen: &HGenerator,
    window: Interval,
    delta: f64,
) -> Result<AlternationReport> {
    if gen.n == 0 {
        return Err(Error::Domain("alternation needs a corrugated generator (n > 0)".into()));
    }
    if window.lo() < delta || window.hi() > FRAC_PI_2 - delta {
        return Err(Error::Domain(format!(
            "window [{}, {}] must sit inside [{delta}, {}]",
            window.lo(),
            window.hi(),
            FRAC_PI_2 - delta
        )));
    }
    let constants = alternation_constants(delta, &gen.b, 50.max(gen.n), MIN_GRID)?;

    let n = gen.n as f64;
    let spacing = PI / (2.0 * n * n);
    let k_lo = (window.lo() / spacing).ceil() as u32;
    let k_hi = (window.hi() / spacing).floor() as u32;

    let sups = derivative_sup_bounds(gen, MIN_GRID);
    let sup_b2 = {
        let g = MIN_GRID;
        let step = PI / (g - 1) as f64;
        (0..g)
            .map(|i| gen.b.d2((i as f64 * step).min(PI)).abs())
            .fold(0.0f64, f64::max)
    };
    let f_bound = 24.0 + 8.0 * gen.alpha + 6.0 * sup_b2 / n.powi(3);

    let mut nodes = Vec::new();
    let mut max_abs_epsilon: f64 = 0.0;
    let mut max_abs_f: f64 = 0.0;
    let mut min_sin_2h = f64::INFINITY;
    let mut strict = true;
    let mut gap_count = 0usize;

    for k in k_lo..=k_hi {
        let t = gen.t_k(k)?;
        let h = gen.h(t);
        let sin2h = (2.0 * h).sin();
        let parity = if k % 2 == 0 { 1.0 } else { -1.0 };
        let f = 2.0 * (2.0 - (2.0 * h).cos()) * gen.h_d1(t) * gen.h_d2(t)
            - sin2h * (8.0 * gen.alpha * (2.0 * t).cos() + parity * 6.0 * gen.b.d2(t) / n.powi(3));
        let envelope = parity * 8.0 * n * gen.b.eval(t) * sin2h;
        let derivative = curvature_derivative_via_h(gen, t)?;
        let identity_residual =
            (2.0 * derivative * h.sin().powi(2) - (f + envelope)).abs();

        let epsilon = if envelope.abs() > 1e-12 { Some(f / envelope) } else { None };
        let expected_sign = if k % 2 == 0 { 1i8 } else { -1i8 };
        let sign_ok = match epsilon {
            Some(_) => (derivative > 0.0) == (expected_sign > 0),
            None => true,
        };
        if epsilon.is_none() {
            gap_count += 1;
        }
        if !sign_ok {
            strict = false;
        }
        if let Some(e) = epsilon {
            max_abs_epsilon = max_abs_epsilon.max(e.abs());
        }
        max_abs_f = max_abs_f.max(f.abs());
        min_sin_2h = min_sin_2h.min(sin2h);

        nodes.push(NodeDiagnostic {
            k,
            t,
            f,
            epsilon,
            derivative,
            expected_sign,
            sign_ok,
            identity_residual,
        });
    }

    if nodes.is_empty() {
        return Err(Error::NotFound(format!(
            "no corrugation nodes inside [{}, {}]",
            window.lo(),
            window.hi()
        )));
    }

    Ok(AlternationReport {
        delta,
        constants,
        strict_alternation: strict,
        max_abs_epsilon,
        epsilon_ok: max_abs_epsilon < 0.5,
        max_abs_f,
        f_bound,
        f_ok: max_abs_f <= f_bound,
        min_sin_2h,
        sin_ok: min_sin_2h >= constants.c_delta,
        sup_ok: sups.sup_d1 <= 2.0 && sups.sup_d2 <= 2.0,
        n_ok: gen.n >= constants.n0,
        gap_count,
        nodes,
    })
}

/// Sign behavior of the curvature along `(0, pi/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    NotMonotone,
}

/// Classify whether the curvature is monotone on `interval` by sampling
/// its derivative on a grid (raised to `8 n^2` for corrugated profiles).
/// Zero samples (up to `1e-11`) are tolerated inside runs of one sign;
/// the round sphere, identically flat, reports `Increasing` vacuously.
pub fn curvature_monotonicity(
    p: &MetricProfile,
    interval: Interval,
    grid_size: usize,
) -> Result<Monotonicity> {
    if interval.lo() <= POLE_GUARD || interval.hi() >= PI - POLE_GUARD {
        return Err(Error::Domain(format!(
            "monotonicity interval [{}, {}] must avoid the poles",
            interval.lo(),
            interval.hi()
        )));
    }
    let g = match p.generator() {
        Some(gen) => grid_size.max(MIN_GRID).max(8 * (gen.n as usize).pow(2)),
        None => grid_size.max(MIN_GRID),
    };
    let step = interval.width() / (g - 1) as f64;
    let (mut any_pos, mut any_neg) = (false, false);
    for i in 0..g {
        let x = interval.lo() + i as f64 * step;
        let d = match p.generator() {
            Some(gen) => curvature_derivative_via_h(gen, x)?,
            None => curvature_derivative(p, x)?,
        };
        if d > 1e-11 {
            any_pos = true;
        } else if d < -1e-11 {
            any_neg = true;
        }
    }
    Ok(match (any_pos, any_neg) {
        (true, true) => Monotonicity::NotMonotone,
        (false, true) => Monotonicity::Decreasing,
        _ => Monotonicity::Increasing,
    })
}

/// A localized interior extremum of the curvature along a meridian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub location: f64,
    pub kind: ExtremumKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumKind {
    Minimum,
    Maximum,
}

/// Count and locate the interior extrema of the curvature on `interval`
/// by scanning `G'` for sign changes and bisecting each bracket.
///
/// The grid is raised to at least `8 n^2` points for corrugated profiles
/// so no oscillation can hide between samples. Sign changes where either
/// bracketing sample has `|G'| <= 1e-9` are treated as plateaus (for the
/// round sphere `G'` vanishes identically) and skipped.
pub fn count_extrema(
    p: &MetricProfile,
    interval: Interval,
    grid_size: usize,
) -> Result<Vec<Extremum>> {
    if interval.lo() <= POLE_GUARD || interval.hi() >= PI - POLE_GUARD {
        return Err(Error::Domain(format!(
            "extremum scan interval [{}, {}] must avoid the poles",
            interval.lo(),
            interval.hi()
        )));
    }
    let deriv: Box<dyn Fn(f64) -> Result<f64>> = match p.generator() {
        Some(gen) => Box::new(move |x| curvature_derivative_via_h(gen, x)),
        None => Box::new(move |x| curvature_derivative(p, x)),
    };

    let g = match p.generator() {
        Some(gen) => grid_size.max(MIN_GRID).max(8 * (gen.n as usize).pow(2)),
        None => grid_size.max(MIN_GRID),
    };
    let step = interval.width() / (g - 1) as f64;
    let xs: Vec<f64> = (0..g).map(|i| interval.lo() + i as f64 * step).collect();
    let mut values = Vec::with_capacity(g);
    for &x in &xs {
        values.push(deriv(x)?);
    }

    let mut extrema = Vec::new();
    for (i, j) in sign_changes(&values) {
        if values[i].abs() <= 1e-9 || values[j].abs() <= 1e-9 {
            continue; // plateau, not a transversal crossing
        }
        let location = refine_sign_change(|x| deriv(x).unwrap_or(f64::NAN), xs[i], xs[j], 1e-9)?;
        let kind = if values[i] > 0.0 { ExtremumKind::Maximum } else { ExtremumKind::Minimum };
        extrema.push(Extremum { location, kind });
    }
    Ok(extrema)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
        (f(x + h) - f(x - h)) / (2.0 * h)
    }

    /// Closed-form curvature of the lambda family, used as a test oracle:
    /// `G = (lambda + 1)(1 - 2 lambda cos^2 r) / (1 + lambda cos^2 r)^2`.
    fn lambda_curvature(lambda: f64, r: f64) -> f64 {
        let c2 = r.cos().powi(2);
        (lambda + 1.0) * (1.0 - 2.0 * lambda * c2) / (1.0 + lambda * c2).powi(2)
    }

    #[test]
    fn unit_sphere_curvature_is_one() {
        let p = MetricProfile::unit_sphere();
        for i in 0..=200 {
            let r = PI * i as f64 / 200.0;
            assert!((gaussian_curvature(&p, r) - 1.0).abs() < 1e-9, "at r = {r}");
        }
    }

    #[test]
    fn lambda_curvature_matches_closed_form() {
        for lambda in [1.0, 4.0, 8.0] {
            let p = MetricProfile::lambda_family(lambda).unwrap();
            for i in 0..=300 {
                let r = PI * i as f64 / 300.0;
                let expect = lambda_curvature(lambda, r);
                let got = gaussian_curvature(&p, r);
                assert!(
                    (got - expect).abs() < 1e-9 * (1.0 + expect.abs()),
                    "lambda = {lambda}, r = {r}: {got} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn pole_curvature_of_lambda_family() {
        // limit (1 - 2 lambda) / (1 + lambda) at both poles
        for lambda in [0.0, 1.0, 8.0] {
            let p = MetricProfile::lambda_family(lambda).unwrap();
            let expect = (1.0 - 2.0 * lambda) / (1.0 + lambda);
            assert!((gaussian_curvature(&p, 0.0) - expect).abs() < 1e-12);
            assert!((gaussian_curvature(&p, PI) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn pole_curvature_of_corrugated_family() {
        // G(0) = 1/9 - 8 - 144/n^3 for alpha = 1/3 with envelope sin^2 2x.
        for n in [4u32, 10] {
            let p = MetricProfile::corrugated_family(n).unwrap();
            let expect = 1.0 / 9.0 - 8.0 - 144.0 / (n as f64).powi(3);
            let got = gaussian_curvature(&p, 0.0);
            assert!((got - expect).abs() < 1e-10, "n = {n}: {got} vs {expect}");
        }
        // frozen: n = 10 gives 1/9 - 8 - 0.144 = -8.03288...
        let p = MetricProfile::corrugated_family(10).unwrap();
        assert!((gaussian_curvature(&p, 0.0) + 8.032888888888889).abs() < 1e-12);
    }

    #[test]
    fn curvature_is_continuous_across_the_pole_guard() {
        for p in [
            MetricProfile::lambda_family(8.0).unwrap(),
            MetricProfile::corrugated_family(6).unwrap(),
        ] {
            let inside = gaussian_curvature(&p, POLE_GUARD * 0.99);
            let outside = gaussian_curvature(&p, POLE_GUARD * 1.01);
            assert!(
                (inside - outside).abs() < 1e-4,
                "{}: {inside} vs {outside}",
                p.family_tag()
            );
        }
    }

    #[test]
    fn generator_route_matches_profile_route() {
        let p = MetricProfile::corrugated_family(6).unwrap();
        let gen = p.generator().unwrap();
        for i in 1..80 {
            let x = 0.05 + (PI - 0.1) * i as f64 / 80.0;
            let a = gaussian_curvature(&p, x);
            let b = curvature_via_h(gen, x);
            assert!((a - b).abs() < 1e-9 * (1.0 + a.abs()), "x = {x}: {a} vs {b}");
        }
    }

    #[test]
    fn equator_curvature_via_h_has_closed_form() {
        // At x = pi/2: h = pi/2, h'' contributes nothing (cot = 0), so
        // G = h'(pi/2)^2 = (1 + 2 alpha)^2; alpha = 1/3 gives 25/9.
        let p = MetricProfile::h_family(1.0 / 3.0, 0, BFunction::Zero).unwrap();
        let got = curvature_via_h(p.generator().unwrap(), FRAC_PI_2);
        assert!((got - 25.0 / 9.0).abs() < 1e-12, "got {got}");
    }

    #[test]
    fn derivative_routes_agree_for_corrugated_profiles() {
        let p = MetricProfile::corrugated_family(8).unwrap();
        let gen = p.generator().unwrap();
        for i in 1..120 {
            let x = 0.05 + (FRAC_PI_2 - 0.06) * i as f64 / 120.0;
            let a = curvature_derivative(&p, x).unwrap();
            let b = curvature_derivative_via_h(gen, x).unwrap();
            assert!((a - b).abs() < 1e-8 * (1.0 + a.abs()), "x = {x}: {a} vs {b}");
        }
    }

    #[test]
    fn derivative_matches_finite_differences_of_curvature() {
        let p = MetricProfile::corrugated_family(6).unwrap();
        let gen = p.generator().unwrap();
        // probe at corrugation nodes, where |G'| is large and the
        // relative comparison is meaningful
        for k in 20..52 {
            let t = gen.t_k(k).unwrap();
            if gen.b.eval(t) < 0.05 {
                continue;
            }
            let got = curvature_derivative_via_h(gen, t).unwrap();
            let oracle = fd(|x| gaussian_curvature(&p, x), t, 1e-5);
            assert!(
                (got - oracle).abs() < 1e-5 * (1.0 + got.abs()),
                "k = {k}: {got} vs {oracle}"
            );
        }
    }

    #[test]
    fn derivative_matches_finite_differences_for_lambda() {
        let p = MetricProfile::lambda_family(8.0).unwrap();
        for i in 1..60 {
            let r = 0.05 + (PI - 0.1) * i as f64 / 60.0;
            let got = curvature_derivative(&p, r).unwrap();
            let oracle = fd(|x| lambda_curvature(8.0, x), r, 1e-6);
            assert!((got - oracle).abs() < 1e-6 * (1.0 + got.abs()), "r = {r}");
        }
    }

    #[test]
    fn derivative_near_pole_is_an_error() {
        let p = MetricProfile::lambda_family(4.0).unwrap();
        assert!(matches!(curvature_derivative(&p, 1e-9), Err(Error::NearPole(_))));
        let c = MetricProfile::corrugated_family(4).unwrap();
        assert!(matches!(
            curvature_derivative_via_h(c.generator().unwrap(), 1e-9),
            Err(Error::NearPole(_))
        ));
    }

    #[test]
    fn node_third_derivative_closed_form() {
        // frozen: n = 4, k = 8 sits at t = pi/4 where the alpha term
        // drops out: 6 B''/64 - 32 B = -0.75 - 32 = -32.75.
        let p = MetricProfile::corrugated_family(4).unwrap();
        let gen = p.generator().unwrap();
        let v = h_triple_prime_at_node(gen, 8).unwrap();
        assert!((v - (-32.75)).abs() < 1e-12, "got {v}");
        // the closed form is the same number the generic derivative gives
        for k in [1u32, 5, 11, 16, 27] {
            let closed = h_triple_prime_at_node(gen, k).unwrap();
            let generic = gen.h_d3(gen.t_k(k).unwrap());
            assert!((closed - generic).abs() < 1e-9 * (1.0 + closed.abs()), "k = {k}");
        }
    }

    #[test]
    fn alternation_constants_frozen_values() {
        // delta = pi/6: epsilon0 = (pi/3 - sin(pi/3)) / 8
        let c = alternation_constants(PI / 6.0, &BFunction::SinSq, 50, 1000).unwrap();
        let eps_expect = (PI / 3.0 - (PI / 3.0).sin()) / 8.0;
        assert!((c.epsilon0 - eps_expect).abs() < 1e-15);
        assert!((c.epsilon0 - 0.0226465184).abs() < 1e-9);
        let c_expect = (6.0 * eps_expect).sin().min((PI / 6.0 - 2.0 * eps_expect).sin());
        assert!((c.c_delta - c_expect).abs() < 1e-15);
        assert!((c.c_delta - 0.1354612).abs() < 1e-6);

        // delta = 0.5: the sup of |B sin(2n^2 x)| / n^5 first drops below
        // epsilon0 = (1 - sin 1)/8 at n = 3.
        let c = alternation_constants(0.5, &BFunction::SinSq, 50, 1000).unwrap();
        assert!((c.epsilon0 - (1.0 - 1f64.sin()) / 8.0).abs() < 1e-15);
        assert_eq!(c.n0, 3);
    }

    #[test]
    fn alternation_constants_reject_bad_margin() {
        assert!(alternation_constants(0.0, &BFunction::SinSq, 10, 1000).is_err());
        assert!(alternation_constants(FRAC_PI_2, &BFunction::SinSq, 10, 1000).is_err());
    }

    #[test]
    fn alternation_certificate_for_n12() {
        let p = MetricProfile::corrugated_family(12).unwrap();
        let gen = p.generator().unwrap();
        let window = Interval::new(0.6, 0.9).unwrap();
        let rep = alternation_report(gen, window, 0.5).unwrap();

        assert!(rep.nodes.len() > 20, "nodes: {}", rep.nodes.len());
        assert!(rep.strict_alternation);
        assert!(rep.epsilon_ok, "max |epsilon| = {}", rep.max_abs_epsilon);
        assert!(rep.max_abs_epsilon < 0.1, "max |epsilon| = {}", rep.max_abs_epsilon);
        assert!(rep.f_ok, "max |f| = {} vs bound {}", rep.max_abs_f, rep.f_bound);
        assert!(rep.sin_ok, "min sin 2h = {} vs c = {}", rep.min_sin_2h, rep.constants.c_delta);
        assert!(rep.sup_ok);
        assert!(rep.n_ok);
        assert_eq!(rep.gap_count, 0);
        for node in &rep.nodes {
            assert!(
                node.identity_residual < 1e-9 * (1.0 + node.derivative.abs()),
                "residual {} at k = {}",
                node.identity_residual,
                node.k
            );
        }
    }

    #[test]
    fn alternation_window_must_fit_the_margin() {
        let p = MetricProfile::corrugated_family(12).unwrap();
        let gen = p.generator().unwrap();
        let too_wide = Interval::new(0.2, 0.9).unwrap();
        assert!(alternation_report(gen, too_wide, 0.5).is_err());
    }

    #[test]
    fn lambda8_has_one_interior_extremum_at_the_known_location() {
        // G has its minimum where cos^2 r = 2/lambda; lambda = 8 puts it
        // at r = pi/3.
        let p = MetricProfile::lambda_family(8.0).unwrap();
        let found = count_extrema(&p, Interval::new(0.2, 1.5).unwrap(), 2000).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].kind, ExtremumKind::Minimum);
        assert!(
            (found[0].location - PI / 3.0).abs() < 1e-6,
            "location {}",
            found[0].location
        );
    }

    #[test]
    fn round_sphere_and_mild_lambda_have_no_interior_extrema() {
        let span = Interval::new(0.2, 1.5).unwrap();
        let u = MetricProfile::unit_sphere();
        assert!(count_extrema(&u, span, 2000).unwrap().is_empty());
        // for lambda < 2 the minimum condition cos^2 r = 2/lambda has no
        // solution, so G is monotone up to the equator
        let p = MetricProfile::lambda_family(1.0).unwrap();
        assert!(count_extrema(&p, span, 2000).unwrap().is_empty());
    }

    #[test]
    fn corrugated_extrema_alternate_and_scale_with_n() {
        let span = Interval::new(0.3, 1.2).unwrap();
        let mut prev = 0usize;
        for n in [4u32, 6, 8] {
            let p = MetricProfile::corrugated_family(n).unwrap();
            let found = count_extrema(&p, span, 1000).unwrap();
            // one sign change between consecutive corrugation nodes
            let expected_floor = (2.0 * (n as f64).powi(2) * span.width() / PI - 2.0) as usize;
            assert!(
                found.len() >= expected_floor,
                "n = {n}: {} extrema, floor {expected_floor}",
                found.len()
            );
            assert!(found.len() > prev, "n = {n}");
            prev = found.len();
            for pair in found.windows(2) {
                assert_ne!(pair[0].kind, pair[1].kind, "kinds must alternate");
                assert!(pair[0].location < pair[1].location);
            }
        }
    }

    #[test]
    fn monotonicity_classification() {
        let span = Interval::new(0.2, 1.5).unwrap();
        // lambda = 1: curvature climbs from (1 - 2)/2 at the pole to 2 at
        // the equator with no interior turning point
        let mild = MetricProfile::lambda_family(1.0).unwrap();
        assert_eq!(curvature_monotonicity(&mild, span, 2000).unwrap(), Monotonicity::Increasing);
        // lambda = 8 dips through a minimum at pi/3
        let steep = MetricProfile::lambda_family(8.0).unwrap();
        assert_eq!(curvature_monotonicity(&steep, span, 2000).unwrap(), Monotonicity::NotMonotone);
        // flat derivative everywhere
        let u = MetricProfile::unit_sphere();
        assert_eq!(curvature_monotonicity(&u, span, 2000).unwrap(), Monotonicity::Increasing);
    }

    #[test]
    fn extremum_scan_rejects_pole_touching_intervals() {
        let p = MetricProfile::lambda_family(8.0).unwrap();
        assert!(count_extrema(&p, Interval::new(0.0, 1.0).unwrap(), 1000).is_err());
    }
}
