//! Adaptive explicit Runge-Kutta integration (Dormand-Prince 5(4)) with
//! dense output.
//!
//! The pair is FSAL: the last stage of an accepted step is the first
//! stage of the next. Each accepted step stores five interpolation
//! vectors from which the solution can be evaluated anywhere inside the
//! step at the interpolant's native fourth order, so callers can sample
//! trajectories densely or locate events without constraining step size.
//!
//! Step acceptance charges the local error against a budget of
//! `tol * h` per step (error per unit step, clamped between
//! `QUOTA_FLOOR * tol` and `tol`): the accumulated error over a span of
//! length `L` then stays near `tol * L` instead of growing with the
//! step count, which is what callers tracking conserved quantities over
//! long arcs need.

use crate::error::{Error, Result};

use super::Interval;

// Stage coefficients.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19_372.0 / 6_561.0;
const A52: f64 = -25_360.0 / 2_187.0;
const A53: f64 = 64_448.0 / 6_561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9_017.0 / 3_168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46_732.0 / 5_247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5_103.0 / 18_656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1_113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2_187.0 / 6_784.0;
const A76: f64 = 11.0 / 84.0;

// Error coefficients: fifth-order weights minus the embedded fourth-order
// weights.
const E1: f64 = 71.0 / 57_600.0;
const E3: f64 = -71.0 / 16_695.0;
const E4: f64 = 71.0 / 1_920.0;
const E5: f64 = -17_253.0 / 339_200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// Dense-output weights for the fifth interpolation vector.
const D1: f64 = -12_715_105_075.0 / 11_282_082_432.0;
const D3: f64 = 87_487_479_700.0 / 32_700_410_799.0;
const D4: f64 = -10_690_763_975.0 / 1_880_347_072.0;
const D5: f64 = 701_980_252_875.0 / 199_316_789_632.0;
const D6: f64 = -1_453_857_185.0 / 822_651_844.0;
const D7: f64 = 69_997_945.0 / 29_380_423.0;

const SAFETY: f64 = 0.9;
const MIN_SCALE: f64 = 0.2;
const MAX_SCALE: f64 = 5.0;
const MAX_STEPS: usize = 50_000_000;

// Per-step error budget is tol * h, clamped to [QUOTA_FLOOR * tol, tol].
// The floor matters in thin boundary layers (for the geodesic field:
// turning points grazing a pole), where the unresolved estimate decays
// only like h; a budget proportional to h could then never be met and
// the step size would underflow. Steps small enough to hit the floor
// contribute at most QUOTA_FLOOR * tol each, so they do not disturb the
// tol * span accumulation law.
const QUOTA_FLOOR: f64 = 1e-3;

/// One accepted step with its interpolation vectors.
#[derive(Debug, Clone)]
struct DenseStep<const N: usize> {
    s: f64,
    h: f64,
    cont: [[f64; N]; 5],
}

impl<const N: usize> DenseStep<N> {
    /// Evaluate the interpolant at fraction `theta` in `[0, 1]` of the step.
    fn eval(&self, theta: f64) -> [f64; N] {
        let t1 = 1.0 - theta;
        let mut y = [0.0; N];
        for i in 0..N {
            let c = &self.cont;
            y[i] = c[0][i]
                + theta * (c[1][i] + t1 * (c[2][i] + theta * (c[3][i] + t1 * c[4][i])));
        }
        y
    }
}

/// Dense solution of an initial value problem over a span.
#[derive(Debug, Clone)]
pub struct OdeTrajectory<const N: usize> {
    s0: f64,
    s_end: f64,
    y_end: [f64; N],
    steps: Vec<DenseStep<N>>,
    pub evaluations: usize,
}

impl<const N: usize> OdeTrajectory<N> {
    pub fn s_start(&self) -> f64 {
        self.s0
    }

    pub fn s_end(&self) -> f64 {
        self.s_end
    }

    pub fn y_end(&self) -> [f64; N] {
        self.y_end
    }

    pub fn n_steps(&self) -> usize {
        self.steps.len()
    }

    /// States at the accepted step boundaries: every step start plus the
    /// final state. These carry only integration error, with none of the
    /// interpolation error of [`sample`](Self::sample), so they are the
    /// right places to measure drift of conserved quantities.
    pub fn step_states(&self) -> impl Iterator<Item = (f64, [f64; N])> + '_ {
        self.steps
            .iter()
            .map(|st| (st.s, st.cont[0]))
            .chain(std::iter::once((self.s_end, self.y_end)))
    }

    /// Interpolated state at `s`, which is clamped into the integrated
    /// span.
    pub fn sample(&self, s: f64) -> [f64; N] {
        let s = s.clamp(self.s0, self.s_end);
        let idx = self
            .steps
            .partition_point(|st| st.s + st.h < s)
            .min(self.steps.len() - 1);
        let st = &self.steps[idx];
        let theta = if st.h > 0.0 { ((s - st.s) / st.h).clamp(0.0, 1.0) } else { 0.0 };
        st.eval(theta)
    }

    /// First `s` in `[s_from, s_end]` where `g(s, y(s))` crosses zero, or
    /// `None`. Each step is scanned in quarters, so events closer than a
    /// quarter step to each other may be merged.
    pub fn find_first_root(
        &self,
        g: impl Fn(f64, &[f64; N]) -> f64,
        s_from: f64,
    ) -> Option<f64> {
        let eval = |s: f64| g(s, &self.sample(s));
        let mut prev_s = s_from.max(self.s0);
        let mut prev_v = eval(prev_s);
        for st in &self.steps {
            let step_end = st.s + st.h;
            if step_end <= prev_s {
                continue;
            }
            for q in 1..=4 {
                let s = (st.s + st.h * q as f64 / 4.0).min(self.s_end);
                if s <= prev_s {
                    continue;
                }
                let v = eval(s);
                if prev_v == 0.0 {
                    return Some(prev_s);
                }
                if v == 0.0 {
                    return Some(s);
                }
                if v.signum() != prev_v.signum() {
                    let (mut a, mut b, mut va) = (prev_s, s, prev_v);
                    for _ in 0..200 {
                        if b - a <= 1e-13 * (1.0 + a.abs()) {
                            break;
                        }
                        let m = 0.5 * (a + b);
                        let vm = eval(m);
                        if vm == 0.0 {
                            return Some(m);
                        }
                        if vm.signum() == va.signum() {
                            a = m;
                            va = vm;
                        } else {
                            b = m;
                        }
                    }
                    return Some(0.5 * (a + b));
                }
                prev_s = s;
                prev_v = v;
            }
        }
        None
    }
}

/// Data produced by one successful step attempt.
struct StepOutcome<const N: usize> {
    ynew: [f64; N],
    k7: [f64; N],
    err_norm: f64,
    cont: [[f64; N]; 5],
}

fn try_step<const N: usize>(
    f: &mut dyn FnMut(f64, &[f64; N]) -> [f64; N],
    s: f64,
    y: &[f64; N],
    k1: &[f64; N],
    h: f64,
    tol: f64,
    evaluations: &mut usize,
) -> Option<StepOutcome<N>> {
    let mut eval = |s: f64, y: &[f64; N]| -> Option<[f64; N]> {
        *evaluations += 1;
        let v = f(s, y);
        if v.iter().all(|c| c.is_finite()) {
            Some(v)
        } else {
            None
        }
    };
    let mut yt = [0.0; N];

    for i in 0..N {
        yt[i] = y[i] + h * A21 * k1[i];
    }
    let k2 = eval(s + C2 * h, &yt)?;

    for i in 0..N {
        yt[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
    }
    let k3 = eval(s + C3 * h, &yt)?;

    for i in 0..N {
        yt[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
    }
    let k4 = eval(s + C4 * h, &yt)?;

    for i in 0..N {
        yt[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
    }
    let k5 = eval(s + C5 * h, &yt)?;

    for i in 0..N {
        yt[i] =
            y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
    }
    let k6 = eval(s + h, &yt)?;

    let mut ynew = [0.0; N];
    for i in 0..N {
        ynew[i] =
            y[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
    }
    let k7 = eval(s + h, &ynew)?;

    let mut err_acc = 0.0;
    for i in 0..N {
        let e = h
            * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        let sc = tol + tol * y[i].abs().max(ynew[i].abs());
        let r = e / sc;
        err_acc += r * r;
    }
    let err_norm = (err_acc / N as f64).sqrt();

    let mut cont = [[0.0; N]; 5];
    for i in 0..N {
        let ydiff = ynew[i] - y[i];
        let bspl = h * k1[i] - ydiff;
        cont[0][i] = y[i];
        cont[1][i] = ydiff;
        cont[2][i] = bspl;
        cont[3][i] = ydiff - h * k7[i] - bspl;
        cont[4][i] = h
            * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
    }

    Some(StepOutcome { ynew, k7, err_norm, cont })
}

/// Hairer-style starting step size.
fn initial_h<const N: usize>(
    f: &mut dyn FnMut(f64, &[f64; N]) -> [f64; N],
    s0: f64,
    y0: &[f64; N],
    f0: &[f64; N],
    span: f64,
    tol: f64,
    evaluations: &mut usize,
) -> f64 {
    let rms = |v: &[f64; N], sc: &[f64; N]| -> f64 {
        let acc: f64 = (0..N).map(|i| (v[i] / sc[i]).powi(2)).sum();
        (acc / N as f64).sqrt()
    };
    let mut sc = [0.0; N];
    for i in 0..N {
        sc[i] = tol + tol * y0[i].abs();
    }
    let d0 = rms(y0, &sc);
    let d1 = rms(f0, &sc);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { (0.01 * d0 / d1).min(span) };
    let mut y1 = [0.0; N];
    for i in 0..N {
        y1[i] = y0[i] + h0 * f0[i];
    }
    *evaluations += 1;
    let f1 = f(s0 + h0, &y1);
    if f1.iter().any(|c| !c.is_finite()) {
        return (h0 * 1e-2).min(span);
    }
    let mut df = [0.0; N];
    for i in 0..N {
        df[i] = f1[i] - f0[i];
    }
    let d2 = rms(&df, &sc) / h0;
    let dm = d1.max(d2);
    let h1 = if dm <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / dm).powf(0.2) };
    h1.min(100.0 * h0).min(span)
}

/// Integrate `dy/ds = f(s, y)` across `span` with absolute and relative
/// tolerance `tol`, collecting dense output for later interpolation.
pub fn ode_solve<const N: usize>(
    mut f: impl FnMut(f64, &[f64; N]) -> [f64; N],
    y0: [f64; N],
    span: Interval,
    tol: f64,
) -> Result<OdeTrajectory<N>> {
    let mut steps = Vec::new();
    let (y_end, evaluations) =
        drive(&mut f, y0, span, tol, |st: DenseStep<N>| steps.push(st))?;
    Ok(OdeTrajectory {
        s0: span.lo(),
        s_end: span.hi(),
        y_end,
        steps,
        evaluations,
    })
}

/// Integrate as [`ode_solve`] but stream interpolated states at the
/// uniform grid `s0, s0 + ds, s0 + 2 ds, ...` (excluding the endpoint,
/// which is emitted once at the exact final state) into `sink` instead of
/// storing the trajectory. Returns the final state and the evaluation
/// count.
pub fn ode_solve_sampled<const N: usize>(
    mut f: impl FnMut(f64, &[f64; N]) -> [f64; N],
    y0: [f64; N],
    span: Interval,
    tol: f64,
    ds: f64,
    mut sink: impl FnMut(f64, &[f64; N]),
) -> Result<([f64; N], usize)> {
    if !(ds > 0.0) {
        return Err(Error::Domain(format!("sample spacing must be > 0, got {ds}")));
    }
    let s0 = span.lo();
    sink(s0, &y0);
    let mut next_k = 1u64;
    let (y_end, evaluations) = drive(&mut f, y0, span, tol, |st: DenseStep<N>| {
        let step_end = st.s + st.h;
        loop {
            let s = s0 + next_k as f64 * ds;
            if s > step_end || s >= span.hi() {
                break;
            }
            let theta = ((s - st.s) / st.h).clamp(0.0, 1.0);
            sink(s, &st.eval(theta));
            next_k += 1;
        }
    })?;
    sink(span.hi(), &y_end);
    Ok((y_end, evaluations))
}

/// Core integration loop shared by the collecting and streaming fronts.
fn drive<const N: usize>(
    f: &mut dyn FnMut(f64, &[f64; N]) -> [f64; N],
    y0: [f64; N],
    span: Interval,
    tol: f64,
    mut on_step: impl FnMut(DenseStep<N>),
) -> Result<([f64; N], usize)> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("ODE tol must be > 0, got {tol}")));
    }
    let (s0, s1) = (span.lo(), span.hi());
    let mut evaluations = 0usize;

    let mut s = s0;
    let mut y = y0;
    evaluations += 1;
    let mut k1 = f(s, &y);
    if k1.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite(format!("ODE right-hand side at s = {s:.17e}")));
    }
    let mut h = initial_h(f, s, &y, &k1, s1 - s0, tol, &mut evaluations);
    let mut just_rejected = false;

    let mut n_steps = 0usize;
    loop {
        let remaining = s1 - s;
        let s_resolution = 4.0 * f64::EPSILON * (1.0 + s.abs());
        if remaining <= s_resolution {
            break; // endpoint reached to floating-point resolution
        }
        n_steps += 1;
        if n_steps > MAX_STEPS {
            return Err(Error::Domain("ODE step budget exceeded".into()));
        }
        if h < s_resolution {
            return Err(Error::StepUnderflow { s, state: y.to_vec() });
        }
        if h > remaining {
            h = remaining;
        }

        // Error-per-unit-step acceptance: the estimate (which is O(h^5))
        // must fit in a budget proportional to h, so the optimal rescale
        // exponent is -1/4 rather than the -1/5 of per-step control.
        let quota = h.clamp(QUOTA_FLOOR, 1.0);
        match try_step(f, s, &y, &k1, h, tol, &mut evaluations) {
            Some(out) if out.err_norm <= quota => {
                on_step(DenseStep { s, h, cont: out.cont });
                s += h;
                y = out.ynew;
                k1 = out.k7; // FSAL
                let ratio = (out.err_norm / quota).max(1e-30);
                let mut scale = SAFETY * ratio.powf(-0.25);
                scale = scale.clamp(MIN_SCALE, MAX_SCALE);
                if just_rejected {
                    scale = scale.min(1.0);
                }
                h *= scale;
                just_rejected = false;
            }
            Some(out) => {
                let ratio = out.err_norm / quota;
                let scale = (SAFETY * ratio.powf(-0.25)).max(MIN_SCALE);
                h *= scale;
                just_rejected = true;
            }
            None => {
                // Non-finite stage value: treat as a hard reject.
                h *= 0.5;
                just_rejected = true;
            }
        }
    }
    Ok((y, evaluations))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth_hits_e() {
        let tol = 1e-10;
        let traj = ode_solve(
            |_, y: &[f64; 1]| [y[0]],
            [1.0],
            Interval::new(0.0, 1.0).unwrap(),
            tol,
        )
        .unwrap();
        assert!((traj.y_end()[0] - std::f64::consts::E).abs() <= 10.0 * tol);
    }

    #[test]
    fn dense_output_tracks_the_exponential() {
        let tol = 1e-10;
        let traj = ode_solve(
            |_, y: &[f64; 1]| [y[0]],
            [1.0],
            Interval::new(0.0, 1.0).unwrap(),
            tol,
        )
        .unwrap();
        let mut worst: f64 = 0.0;
        for k in 0..=100 {
            let s = k as f64 / 100.0;
            worst = worst.max((traj.sample(s)[0] - s.exp()).abs());
        }
        assert!(worst <= 100.0 * tol, "dense deviation {worst}");
    }

    #[test]
    fn full_turn_of_the_circle_field() {
        let tol = 1e-10;
        let traj = ode_solve(
            |_, y: &[f64; 2]| [-y[1], y[0]],
            [1.0, 0.0],
            Interval::new(0.0, 2.0 * std::f64::consts::PI).unwrap(),
            tol,
        )
        .unwrap();
        let [c, s] = traj.y_end();
        assert!((c - 1.0).abs() <= 100.0 * tol, "cos dev {}", (c - 1.0).abs());
        assert!(s.abs() <= 100.0 * tol, "sin dev {}", s.abs());
    }

    #[test]
    fn blow_up_ends_in_step_underflow() {
        let r = ode_solve(
            |_, y: &[f64; 1]| [y[0] * y[0]],
            [1.0],
            Interval::new(0.0, 2.0).unwrap(),
            1e-10,
        );
        match r {
            Err(Error::StepUnderflow { s, state }) => {
                assert!((s - 1.0).abs() < 1e-2, "underflow at s = {s}");
                assert!(state[0] > 1e6);
            }
            other => panic!("expected step underflow, got {other:?}"),
        }
    }

    #[test]
    fn sampled_variant_matches_dense_trajectory() {
        let tol = 1e-10;
        let span = Interval::new(0.0, 3.0).unwrap();
        let traj =
            ode_solve(|s: f64, y: &[f64; 1]| [s.cos() * y[0]], [1.0], span, tol).unwrap();
        let mut samples = Vec::new();
        ode_solve_sampled(
            |s: f64, y: &[f64; 1]| [s.cos() * y[0]],
            [1.0],
            span,
            tol,
            0.25,
            |s, y| samples.push((s, y[0])),
        )
        .unwrap();
        assert_eq!(samples.len(), 13); // 0.0, 0.25, ..., 2.75 and the endpoint
        for &(s, v) in &samples {
            assert!((v - traj.sample(s)[0]).abs() < 1e-12);
            assert!((v - s.sin().exp()).abs() < 1e-8);
        }
    }

    #[test]
    fn root_finding_on_the_trajectory() {
        let traj = ode_solve(
            |_, y: &[f64; 2]| [-y[1], y[0]],
            [1.0, 0.0],
            Interval::new(0.0, 4.0).unwrap(),
            1e-10,
        )
        .unwrap();
        // First zero of the cosine component is at pi/2.
        let root = traj.find_first_root(|_, y| y[0], 0.0).unwrap();
        assert!((root - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
        // Starting past it finds nothing before s = 4 < 3pi/2.
        let next = traj.find_first_root(|_, y| y[0], 2.0);
        assert!(next.is_none());
    }
}
