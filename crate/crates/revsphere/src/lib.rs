//! Numerical toolkit for two-spheres of revolution.
//!
//! A surface here is the sphere with metric `dr^2 + m(r)^2 dtheta^2` in
//! geodesic polar coordinates `r in [0, pi]`, where the profile `m` vanishes
//! at both poles, has unit slope at `r = 0`, and is symmetric about the
//! equator `r = pi/2`. The crate builds several concrete families of such
//! profiles (round sphere, a one-parameter deformation with closed-form
//! curvature, and generator-built profiles `m = a sin h(r)` carrying a
//! high-frequency corrugation), then computes the quantities that control
//! their global geometry:
//!
//! * Gaussian curvature along meridians, together with grid diagnostics that
//!   certify sign alternation of its derivative on corrugated profiles;
//! * the half-period function `phi(nu)`: the change in `theta` over half an
//!   oscillation of a geodesic with Clairaut constant `nu`, computed both by
//!   a singularity-free compactified integral and by the direct improper
//!   integral so the two routes can cross-check each other;
//! * geodesics by shooting, a fan-based distance oracle, and empirical cut
//!   points obtained as the arc length where a geodesic stops being minimal.
//!
//! The [`verify`] module packages every claim the crate checks numerically
//! into named report entries; the `revsphere` binary exposes the same checks
//! on the command line.
//!
//! Modules are layered bottom-up: [`numerics`] has no domain knowledge,
//! [`profiles`] defines the metric families, [`curvature`], [`halfperiod`]
//! and [`geodesics`] build on those, and [`verify`] sits on top.

pub mod curvature;
pub mod error;
pub mod geodesics;
pub mod halfperiod;
pub mod numerics;
pub mod profiles;
pub mod verify;

pub use error::{Error, Result};
