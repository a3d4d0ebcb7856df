//! Bracketed inversion of monotone functions and sign-change scanning.

use crate::error::{Error, Result};

use super::Interval;

/// Solve `f(x) = y` for `x` in `bracket`, assuming `f` is continuous and
/// monotone there. Secant steps are taken whenever they fall safely
/// inside the current bracket, with bisection as fallback, so the
/// iteration always converges. Returns `x` with
/// `|f(x) - y| <= tol * (1 + |y|)`.
///
/// Errors: `OutOfRange` if `y` is not between `f(lo)` and `f(hi)`;
/// `NonMonotone` if an interior sample contradicts monotonicity by more
/// than floating-point slack.
pub fn invert_monotone(
    mut f: impl FnMut(f64) -> f64,
    y: f64,
    bracket: Interval,
    tol: f64,
) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("inversion tol must be > 0, got {tol}")));
    }
    let (mut xl, mut xr) = (bracket.lo(), bracket.hi());
    let check = |x: f64, v: f64| -> Result<f64> {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite(format!("function value at x = {x:.17e}")))
        }
    };
    let f_lo = check(xl, f(xl))?;
    let f_hi = check(xr, f(xr))?;
    let target_tol = tol * (1.0 + y.abs());

    // Orient so that residuals run negative -> positive across [xl, xr].
    let dir = if f_hi >= f_lo { 1.0 } else { -1.0 };
    let (mut gl, mut gr) = (dir * (f_lo - y), dir * (f_hi - y));
    if gl.abs() <= target_tol {
        return Ok(xl);
    }
    if gr.abs() <= target_tol {
        return Ok(xr);
    }
    if gl > 0.0 || gr < 0.0 {
        return Err(Error::OutOfRange { y, f_lo, f_hi });
    }

    // Slack for the interior monotonicity check: generous enough to
    // ignore roundoff on flat stretches, tight enough to catch a real
    // fold like sin on [0, 3].
    let scale = 1.0 + f_lo.abs().max(f_hi.abs()) + y.abs();
    let slack = 1e-9 * scale;

    let (mut best_x, mut best_g) = if gl.abs() < gr.abs() { (xl, gl.abs()) } else { (xr, gr.abs()) };
    for _ in 0..200 {
        // Secant proposal, clipped away from the bracket ends; bisection
        // when the proposal is unusable.
        let mid = 0.5 * (xl + xr);
        let width = xr - xl;
        let mut x = if gr != gl { xl - gl * width / (gr - gl) } else { mid };
        let margin = 0.01 * width;
        if !(x > xl + margin && x < xr - margin) {
            x = mid;
        }
        let g = dir * (check(x, f(x))? - y);
        if g.abs() < best_g {
            best_g = g.abs();
            best_x = x;
        }
        if g.abs() <= target_tol {
            return Ok(x);
        }
        if g < gl - slack || g > gr + slack {
            return Err(Error::NonMonotone { x });
        }
        if g < 0.0 {
            xl = x;
            gl = g;
        } else {
            xr = x;
            gr = g;
        }
        if xr - xl <= f64::EPSILON * (1.0 + xl.abs().max(xr.abs())) {
            // Bracket collapsed to adjacent floats; the residual is now
            // limited by the conditioning of f, so return the best seen.
            return Ok(best_x);
        }
    }
    Ok(best_x)
}

/// Indices `(i, i+1)` where the sampled values change sign. Exact zeros
/// carry the sign of the nearest preceding nonzero sample, so a run
/// `+ 0 -` reports one change at its final pair and `+ 0 +` reports
/// none. Leading zeros have no sign and never produce a change.
pub fn sign_changes(values: &[f64]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut carried: f64 = 0.0; // effective sign of the previous sample
    for (i, &v) in values.iter().enumerate() {
        let s = if v > 0.0 {
            1.0
        } else if v < 0.0 {
            -1.0
        } else {
            carried
        };
        if i > 0 && carried != 0.0 && s != 0.0 && s != carried {
            out.push((i - 1, i));
        }
        carried = s;
    }
    out
}

/// Bisect a bracketed sign change of `f` down to width `tol` and return
/// the midpoint of the final bracket. `f(xl)` and `f(xr)` must have
/// opposite signs.
pub fn refine_sign_change(mut f: impl FnMut(f64) -> f64, xl: f64, xr: f64, tol: f64) -> Result<f64> {
    let (mut xl, mut xr) = (xl.min(xr), xl.max(xr));
    let (mut vl, vr) = (f(xl), f(xr));
    if !(vl.is_finite() && vr.is_finite()) {
        return Err(Error::NonFinite("bracket endpoint value".into()));
    }
    if vl == 0.0 {
        return Ok(xl);
    }
    if vr == 0.0 {
        return Ok(xr);
    }
    if vl.signum() == vr.signum() {
        return Err(Error::Domain(format!(
            "refine_sign_change bracket [{xl}, {xr}] has no sign change"
        )));
    }
    while xr - xl > tol {
        let mid = 0.5 * (xl + xr);
        if mid <= xl || mid >= xr {
            break;
        }
        let vm = f(mid);
        if vm == 0.0 {
            return Ok(mid);
        }
        if vm.signum() == vl.signum() {
            xl = mid;
            vl = vm;
        } else {
            xr = mid;
        }
    }
    Ok(0.5 * (xl + xr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Interval;

    #[test]
    fn inverts_an_increasing_profile() {
        // m(r) = sqrt(5) sin r / sqrt(1 + 4 cos^2 r), increasing on [0, pi/2].
        let m = |r: f64| 5f64.sqrt() * r.sin() / (1.0 + 4.0 * r.cos().powi(2)).sqrt();
        let x = invert_monotone(m, 1.0, Interval::new(0.0, std::f64::consts::FRAC_PI_2).unwrap(), 1e-12)
            .unwrap();
        assert!((m(x) - 1.0).abs() <= 1e-12 * 2.0);
    }

    #[test]
    fn inverts_a_decreasing_function() {
        let f = |x: f64| (-x).exp();
        let x = invert_monotone(f, 0.3, Interval::new(0.0, 5.0).unwrap(), 1e-13).unwrap();
        assert!((x - (1.0f64 / 0.3).ln()).abs() < 1e-10);
    }

    #[test]
    fn out_of_range_target_is_rejected() {
        let e = invert_monotone(
            |x| x.sin(),
            2.0,
            Interval::new(0.0, std::f64::consts::FRAC_PI_2).unwrap(),
            1e-10,
        )
        .unwrap_err();
        assert!(matches!(e, Error::OutOfRange { .. }));
    }

    #[test]
    fn interior_fold_is_detected() {
        // sin on [0, 3] is not monotone; the first interior sample lands
        // far above both endpoint values.
        let e = invert_monotone(|x| x.sin(), 0.07, Interval::new(0.0, 3.0).unwrap(), 1e-10)
            .unwrap_err();
        assert!(matches!(e, Error::NonMonotone { .. }));
    }

    #[test]
    fn sign_changes_on_shifted_sine_grid() {
        let xs: Vec<f64> = (0..=6)
            .map(|k| k as f64 * std::f64::consts::FRAC_PI_2 + 0.1)
            .collect();
        let vs: Vec<f64> = xs.iter().map(|&x| x.sin()).collect();
        let changes = sign_changes(&vs);
        assert_eq!(changes, vec![(1, 2), (3, 4), (5, 6)]);
    }

    #[test]
    fn zeros_attach_to_the_preceding_sign() {
        assert_eq!(sign_changes(&[1.0, 0.0, -1.0]), vec![(1, 2)]);
        assert_eq!(sign_changes(&[1.0, 0.0, 1.0]), vec![]);
        assert_eq!(sign_changes(&[0.0, 0.0, 1.0, -2.0]), vec![(2, 3)]);
        assert_eq!(sign_changes(&[-1.0, 0.0, 0.0, 2.0]), vec![(2, 3)]);
    }

    #[test]
    fn refine_finds_the_root() {
        let x = refine_sign_change(|x| x * x - 2.0, 1.0, 2.0, 1e-12).unwrap();
        assert!((x - 2f64.sqrt()).abs() < 1e-11);
    }
}
