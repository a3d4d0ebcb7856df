//! Metric profiles `m` for two-spheres of revolution.
//!
//! A profile lives on `r in [0, pi]` and satisfies `m(0) = m(pi) = 0`,
//! `m'(0) = 1` and the equatorial symmetry `m(pi - r) = m(r) > 0`. Three
//! families are built here:
//!
//! * the round sphere `m = sin r`;
//! * the one-parameter family
//!   `m(r) = sqrt(lambda + 1) sin r / sqrt(1 + lambda cos^2 r)`, whose
//!   curvature has a closed form;
//! * generator-built profiles `m = a sin h(r)` with
//!   `h(x) = x - alpha sin 2x + B(x) sin(2 n^2 x) / n^5` and
//!   `a = 1 / h'(0) = 1 / (1 - 2 alpha)`, where the envelope `B` vanishes
//!   at `0` and `pi/2` and is symmetric about `pi/2`. The `n`-dependent
//!   term is a small high-frequency corrugation; `n = 0` switches it off.
//!
//! All derivatives up to third order are closed-form; finite differences
//! appear only in tests, as independent oracles.

use std::f64::consts::{FRAC_PI_2, PI};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Minimum number of grid points used by the validators below.
pub const MIN_GRID: usize = 1000;

/// Corrugation envelope `B` together with its first three derivatives.
///
/// The variants cover the envelopes the families need: `Zero` (no
/// corrugation), the default `sin^2 2x`, and products
/// `sin^2 2x * f(cos^2 x)` with `f` polynomial, which stay admissible
/// because the `sin^2 2x` factor already enforces the boundary and
/// symmetry conditions.
#[derive(Debug, Clone, PartialEq)]
pub enum BFunction {
    Zero,
    SinSq,
    SinSqPoly(Vec<f64>),
}

impl BFunction {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            BFunction::Zero => 0.0,
            BFunction::SinSq => (2.0 * x).sin().powi(2),
            BFunction::SinSqPoly(c) => {
                let s = (2.0 * x).sin().powi(2);
                s * poly(c, x.cos().powi(2))
            }
        }
    }

    pub fn d1(&self, x: f64) -> f64 {
        match self {
            BFunction::Zero => 0.0,
            BFunction::SinSq => 2.0 * (4.0 * x).sin(),
            BFunction::SinSqPoly(c) => {
                let (s, s1) = ((2.0 * x).sin().powi(2), 2.0 * (4.0 * x).sin());
                let (f, f1) = env_poly(c, x);
                s1 * f + s * f1
            }
        }
    }

    pub fn d2(&self, x: f64) -> f64 {
        match self {
            BFunction::Zero => 0.0,
            BFunction::SinSq => 8.0 * (4.0 * x).cos(),
            BFunction::SinSqPoly(c) => {
                let s = (2.0 * x).sin().powi(2);
                let s1 = 2.0 * (4.0 * x).sin();
                let s2 = 8.0 * (4.0 * x).cos();
                let (f, f1) = env_poly(c, x);
                let f2 = env_poly_d2(c, x);
                s2 * f + 2.0 * s1 * f1 + s * f2
            }
        }
    }

    pub fn d3(&self, x: f64) -> f64 {
        match self {
            BFunction::Zero => 0.0,
            BFunction::SinSq => -32.0 * (4.0 * x).sin(),
            BFunction::SinSqPoly(c) => {
                let s = (2.0 * x).sin().powi(2);
                let s1 = 2.0 * (4.0 * x).sin();
                let s2 = 8.0 * (4.0 * x).cos();
                let s3 = -32.0 * (4.0 * x).sin();
                let (f, f1) = env_poly(c, x);
                let f2 = env_poly_d2(c, x);
                let f3 = env_poly_d3(c, x);
                s3 * f + 3.0 * s2 * f1 + 3.0 * s1 * f2 + s * f3
            }
        }
    }

    /// Short stable name used in reports.
    pub fn describe(&self) -> String {
        match self {
            BFunction::Zero => "zero".into(),
            BFunction::SinSq => "sin2sq".into(),
            BFunction::SinSqPoly(c) => {
                let coeffs: Vec<String> = c.iter().map(|v| format!("{v}")).collect();
                format!("sin2sq-poly:{}", coeffs.join(","))
            }
        }
    }
}

impl FromStr for BFunction {
    type Err = Error;

    /// Accepts `sin2sq` or `sin2sq-poly:c0,c1,...`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "sin2sq" {
            return Ok(BFunction::SinSq);
        }
        if let Some(rest) = s.strip_prefix("sin2sq-poly:") {
            let coeffs: std::result::Result<Vec<f64>, _> =
                rest.split(',').map(|t| t.trim().parse::<f64>()).collect();
            let coeffs = coeffs
                .map_err(|e| Error::Domain(format!("bad coefficient list {rest:?}: {e}")))?;
            if coeffs.is_empty() {
                return Err(Error::Domain("sin2sq-poly needs at least one coefficient".into()));
            }
            return Ok(BFunction::SinSqPoly(coeffs));
        }
        Err(Error::Domain(format!(
            "unknown envelope {s:?}; expected sin2sq or sin2sq-poly:c0,c1,..."
        )))
    }
}

fn poly(c: &[f64], u: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ck| acc * u + ck)
}

fn poly_d(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &ck)| k as f64 * ck)
        .collect()
}

/// `F(x) = f(cos^2 x)` and `F'(x)` for the polynomial envelope factor.
fn env_poly(c: &[f64], x: f64) -> (f64, f64) {
    let u = x.cos().powi(2);
    let f = poly(c, u);
    let f1 = -poly(&poly_d(c), u) * (2.0 * x).sin();
    (f, f1)
}

fn env_poly_d2(c: &[f64], x: f64) -> f64 {
    let u = x.cos().powi(2);
    let d1 = poly_d(c);
    let d2 = poly_d(&d1);
    poly(&d2, u) * (2.0 * x).sin().powi(2) - 2.0 * poly(&d1, u) * (2.0 * x).cos()
}

fn env_poly_d3(c: &[f64], x: f64) -> f64 {
    let u = x.cos().powi(2);
    let d1 = poly_d(c);
    let d2 = poly_d(&d1);
    let d3 = poly_d(&d2);
    let s2 = (2.0 * x).sin();
    -poly(&d3, u) * s2.powi(3) + 3.0 * poly(&d2, u) * (4.0 * x).sin() + 4.0 * poly(&d1, u) * s2
}

/// Generator `h` of a profile `m = a sin h`, with derivatives up to third
/// order assembled in closed form.
#[derive(Debug, Clone)]
pub struct HGenerator {
    pub alpha: f64,
    pub n: u32,
    pub b: BFunction,
}

impl HGenerator {
    pub fn new(alpha: f64, n: u32, b: BFunction) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 0.5) {
            return Err(Error::Domain(format!(
                "generator slope parameter must lie in (0, 1/2), got {alpha}"
            )));
        }
        Ok(Self { alpha, n, b })
    }

    fn omega(&self) -> f64 {
        2.0 * (self.n as f64).powi(2)
    }

    fn n5(&self) -> f64 {
        (self.n as f64).powi(5)
    }

    /// Corrugation `R(x) = B(x) sin(2 n^2 x) / n^5` (zero when `n = 0`).
    pub fn r(&self, x: f64) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        self.b.eval(x) * (self.omega() * x).sin() / self.n5()
    }

    pub fn r_d1(&self, x: f64) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        let w = self.omega();
        let (sn, cs) = (w * x).sin_cos();
        (self.b.d1(x) * sn + w * self.b.eval(x) * cs) / self.n5()
    }

    pub fn r_d2(&self, x: f64) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        let w = self.omega();
        let (sn, cs) = (w * x).sin_cos();
        ((self.b.d2(x) - w * w * self.b.eval(x)) * sn + 2.0 * w * self.b.d1(x) * cs) / self.n5()
    }

    pub fn r_d3(&self, x: f64) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        let w = self.omega();
        let (sn, cs) = (w * x).sin_cos();
        ((self.b.d3(x) - 3.0 * w * w * self.b.d1(x)) * sn
            + (3.0 * w * self.b.d2(x) - w * w * w * self.b.eval(x)) * cs)
            / self.n5()
    }

    pub fn h(&self, x: f64) -> f64 {
        x - self.alpha * (2.0 * x).sin() + self.r(x)
    }

    pub fn h_d1(&self, x: f64) -> f64 {
        1.0 - 2.0 * self.alpha * (2.0 * x).cos() + self.r_d1(x)
    }

    pub fn h_d2(&self, x: f64) -> f64 {
        4.0 * self.alpha * (2.0 * x).sin() + self.r_d2(x)
    }

    pub fn h_d3(&self, x: f64) -> f64 {
        8.0 * self.alpha * (2.0 * x).cos() + self.r_d3(x)
    }

    /// Slope at the pole, `h'(0) = 1 - 2 alpha`.
    pub fn slope_at_zero(&self) -> f64 {
        1.0 - 2.0 * self.alpha
    }

    /// Node `t_k = k pi / (2 n^2)` where the corrugation phase hits a
    /// multiple of pi. Requires `n > 0`.
    pub fn t_k(&self, k: u32) -> Result<f64> {
        if self.n == 0 {
            return Err(Error::Domain("corrugation nodes need n > 0".into()));
        }
        Ok(k as f64 * PI / (2.0 * (self.n as f64).powi(2)))
    }
}

#[derive(Debug, Clone)]
enum Kind {
    UnitSphere,
    Lambda { lambda: f64 },
    H { gen: HGenerator, corrugated: bool },
}

/// A metric profile with closed-form derivatives up to third order.
#[derive(Debug, Clone)]
pub struct MetricProfile {
    kind: Kind,
    a: f64,
}

impl MetricProfile {
    /// The round sphere, `m = sin r`.
    pub fn unit_sphere() -> Self {
        Self { kind: Kind::UnitSphere, a: 1.0 }
    }

    /// `m(r) = sqrt(lambda + 1) sin r / sqrt(1 + lambda cos^2 r)` for
    /// `lambda >= 0`; `lambda = 0` coincides with the round sphere.
    pub fn lambda_family(lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::Domain(format!("lambda must be >= 0, got {lambda}")));
        }
        Ok(Self { kind: Kind::Lambda { lambda }, a: (lambda + 1.0).sqrt() })
    }

    /// Profile generated by `m = a sin h` with
    /// `h = x - alpha sin 2x + B(x) sin(2 n^2 x)/n^5`.
    pub fn h_family(alpha: f64, n: u32, b: BFunction) -> Result<Self> {
        let gen = HGenerator::new(alpha, n, b)?;
        let a = 1.0 / gen.slope_at_zero();
        Ok(Self { kind: Kind::H { gen, corrugated: false }, a })
    }

    /// The corrugated family with `alpha = 1/3` and envelope `sin^2 2x`:
    /// `m(r) = 3 sin(r - sin 2r / 3 + sin^2 2r sin(2 n^2 r)/n^5)`, `n >= 2`.
    pub fn corrugated_family(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("corrugated family needs n >= 2, got {n}")));
        }
        let gen = HGenerator::new(1.0 / 3.0, n, BFunction::SinSq)?;
        let a = 1.0 / gen.slope_at_zero();
        Ok(Self { kind: Kind::H { gen, corrugated: true }, a })
    }

    /// Equatorial radius `a = m(pi/2)`.
    pub fn equator_radius(&self) -> f64 {
        self.a
    }

    pub fn family_tag(&self) -> &'static str {
        match &self.kind {
            Kind::UnitSphere => "unit-sphere",
            Kind::Lambda { .. } => "lambda",
            Kind::H { corrugated: false, .. } => "h",
            Kind::H { corrugated: true, .. } => "corrugated",
        }
    }

    /// The generator when the profile is of the form `a sin h`.
    pub fn generator(&self) -> Option<&HGenerator> {
        match &self.kind {
            Kind::H { gen, .. } => Some(gen),
            _ => None,
        }
    }

    pub fn lambda(&self) -> Option<f64> {
        match &self.kind {
            Kind::Lambda { lambda } => Some(*lambda),
            _ => None,
        }
    }

    pub fn m(&self, r: f64) -> f64 {
        match &self.kind {
            Kind::UnitSphere => r.sin(),
            Kind::Lambda { lambda } => {
                let q = lambda + 1.0;
                q.sqrt() * r.sin() / (1.0 + lambda * r.cos().powi(2)).sqrt()
            }
            Kind::H { gen, .. } => self.a * gen.h(r).sin(),
        }
    }

    pub fn dm(&self, r: f64) -> f64 {
        match &self.kind {
            Kind::UnitSphere => r.cos(),
            Kind::Lambda { lambda } => {
                let q = lambda + 1.0;
                let lam2 = 1.0 + lambda * r.cos().powi(2);
                // q^(3/2) / lam2^(3/2) without powf: this sits on the hot
                // path of geodesic integration
                let ratio = q / lam2;
                ratio * ratio.sqrt() * r.cos()
            }
            Kind::H { gen, .. } => self.a * gen.h_d1(r) * gen.h(r).cos(),
        }
    }

    pub fn d2m(&self, r: f64) -> f64 {
        match &self.kind {
            Kind::UnitSphere => -r.sin(),
            Kind::Lambda { lambda } => {
                let q = lambda + 1.0;
                let c2 = r.cos().powi(2);
                let lam2 = 1.0 + lambda * c2;
                let qr = q * q.sqrt();
                let l2 = lam2 * lam2;
                qr * r.sin() * (2.0 * lambda * c2 - 1.0) / (l2 * lam2.sqrt())
            }
            Kind::H { gen, .. } => {
                let h = gen.h(r);
                let (sh, ch) = h.sin_cos();
                self.a * (gen.h_d2(r) * ch - gen.h_d1(r).powi(2) * sh)
            }
        }
    }

    pub fn d3m(&self, r: f64) -> f64 {
        match &self.kind {
            Kind::UnitSphere => -r.cos(),
            Kind::Lambda { lambda } => {
                let q = lambda + 1.0;
                let (s, c) = r.sin_cos();
                let (s2, c2) = (s * s, c * c);
                let lam2 = 1.0 + lambda * c2;
                let bracket = (2.0 * lambda * c2 - 1.0) * lam2 - 4.0 * lambda * s2 * lam2
                    + 5.0 * lambda * s2 * (2.0 * lambda * c2 - 1.0);
                let qr = q * q.sqrt();
                let l3 = lam2 * lam2 * lam2;
                qr * c * bracket / (l3 * lam2.sqrt())
            }
            Kind::H { gen, .. } => {
                let h = gen.h(r);
                let (sh, ch) = h.sin_cos();
                let (h1, h2, h3) = (gen.h_d1(r), gen.h_d2(r), gen.h_d3(r));
                self.a * (h3 * ch - 3.0 * h1 * h2 * sh - h1.powi(3) * ch)
            }
        }
    }
}

/// Report from checking the structural conditions on a generator:
/// `h' > 0` on `[0, pi/2)`, `h'' > 0` on `(0, pi/2)`, and the symmetry
/// `h(pi - x) = pi - h(x)`.
#[derive(Debug, Clone)]
pub struct HConditionReport {
    pub slope_positive: bool,
    /// Minimum of `h'` over the half-open grid (the margin of the first
    /// condition).
    pub min_slope: f64,
    pub second_derivative_positive: bool,
    /// Minimum of `h''` over the open grid.
    pub min_second_derivative: f64,
    pub symmetric: bool,
    /// `max |h(pi - x) + h(x) - pi|` over the closed grid.
    pub max_symmetry_defect: f64,
    pub grid_size: usize,
}

fn effective_grid(gen_n: u32, requested: usize) -> usize {
    // At least four points per corrugation oscillation, and never fewer
    // than MIN_GRID.
    requested.max(MIN_GRID).max(4 * (gen_n as usize).pow(2))
}

/// Check the structural conditions on `h` over grids fine enough to
/// resolve the corrugation (at least `4 n^2` points).
pub fn validate_h_conditions(gen: &HGenerator, grid_size: usize) -> HConditionReport {
    let g = effective_grid(gen.n, grid_size);

    // h' > 0 on [0, pi/2): closed at 0, open at pi/2.
    let step = FRAC_PI_2 / g as f64;
    let mut min_slope = f64::INFINITY;
    for i in 0..g {
        let x = i as f64 * step;
        min_slope = min_slope.min(gen.h_d1(x));
    }

    // h'' > 0 on the open interval (0, pi/2).
    let mut min_second = f64::INFINITY;
    for i in 0..g {
        let x = (i as f64 + 0.5) * step;
        min_second = min_second.min(gen.h_d2(x));
    }

    // Symmetry over the closed interval [0, pi].
    let full_step = PI / (g - 1) as f64;
    let mut max_defect: f64 = 0.0;
    for i in 0..g {
        let x = (i as f64 * full_step).min(PI);
        max_defect = max_defect.max((gen.h(PI - x) + gen.h(x) - PI).abs());
    }

    HConditionReport {
        slope_positive: min_slope > 0.0,
        min_slope,
        second_derivative_positive: min_second > 0.0,
        min_second_derivative: min_second,
        symmetric: max_defect <= 1e-10,
        max_symmetry_defect: max_defect,
        grid_size: g,
    }
}

/// Grid suprema of `|h'|` and `|h''|` over `[0, pi]`.
#[derive(Debug, Clone, Copy)]
pub struct SupBounds {
    pub sup_d1: f64,
    pub sup_d2: f64,
    pub grid_size: usize,
}

pub fn derivative_sup_bounds(gen: &HGenerator, grid_size: usize) -> SupBounds {
    let g = effective_grid(gen.n, grid_size);
    let step = PI / (g - 1) as f64;
    let (mut sup1, mut sup2): (f64, f64) = (0.0, 0.0);
    for i in 0..g {
        let x = (i as f64 * step).min(PI);
        sup1 = sup1.max(gen.h_d1(x).abs());
        sup2 = sup2.max(gen.h_d2(x).abs());
    }
    SupBounds { sup_d1: sup1, sup_d2: sup2, grid_size: g }
}

/// Smallest `n` in `[1, n_max]` whose generator keeps both grid suprema
/// `sup |h'|` and `sup |h''|` at or below `bound`.
pub fn find_minimal_n0(
    alpha: f64,
    b: &BFunction,
    bound: f64,
    n_max: u32,
    grid_size: usize,
) -> Result<u32> {
    for n in 1..=n_max {
        let gen = HGenerator::new(alpha, n, b.clone())?;
        let sups = derivative_sup_bounds(&gen, grid_size);
        if sups.sup_d1 <= bound && sups.sup_d2 <= bound {
            return Ok(n);
        }
    }
    Err(Error::NotFound(format!(
        "no n <= {n_max} keeps sup|h'| and sup|h''| within {bound}"
    )))
}

/// Grid suprema of the corrugation-to-base derivative ratios
/// `|R'| / (1 - 2 alpha cos 2x)` and `|R''| / (4 alpha sin 2x)` over the
/// open interval `(0, pi/2)`.
#[derive(Debug, Clone, Copy)]
pub struct PerturbationRatios {
    pub sup_ratio_d1: f64,
    pub sup_ratio_d2: f64,
    pub grid_size: usize,
}

pub fn perturbation_ratio_sups(gen: &HGenerator, grid_size: usize) -> PerturbationRatios {
    let g = effective_grid(gen.n, grid_size);
    let step = FRAC_PI_2 / g as f64;
    let (mut r1, mut r2): (f64, f64) = (0.0, 0.0);
    for i in 0..g {
        let x = (i as f64 + 0.5) * step;
        let base1 = 1.0 - 2.0 * gen.alpha * (2.0 * x).cos();
        let base2 = 4.0 * gen.alpha * (2.0 * x).sin();
        r1 = r1.max((gen.r_d1(x) / base1).abs());
        r2 = r2.max((gen.r_d2(x) / base2).abs());
    }
    PerturbationRatios { sup_ratio_d1: r1, sup_ratio_d2: r2, grid_size: g }
}

/// Worst violation of `|sin nx| <= n |sin x|` over a grid.
#[derive(Debug, Clone, Copy)]
pub struct SinBoundCheck {
    /// `max(|sin nx| - n |sin x|)`; nonpositive means the bound held.
    pub max_violation: f64,
    pub worst_n: u32,
    pub worst_x: f64,
}

pub fn sin_multiple_bound_check(n_max: u32, grid_size: usize) -> SinBoundCheck {
    let g = grid_size.max(MIN_GRID);
    let step = PI / (g - 1) as f64;
    let mut worst = SinBoundCheck { max_violation: f64::NEG_INFINITY, worst_n: 1, worst_x: 0.0 };
    for n in 1..=n_max {
        for i in 0..g {
            let x = (i as f64 * step).min(PI);
            let v = (n as f64 * x).sin().abs() - n as f64 * x.sin().abs();
            if v > worst.max_violation {
                worst = SinBoundCheck { max_violation: v, worst_n: n, worst_x: x };
            }
        }
    }
    worst
}
