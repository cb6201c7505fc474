//! Shared numerical constants.
//!
//! Values that more than one module depends on live here so the pipelines
//! agree on what "on the shell" or "inside the chart" means.

/// Distance (radians) kept from the poles of a polar chart.
pub const CHART_MARGIN: f64 = 1e-3;

/// Allowed deviation of |ξ|_g from 1 for a point to count as unit-shell.
pub const SHELL_TOL: f64 = 1e-6;

/// Quadrature agreement required between a grid and its refinement.
pub const QUAD_TOL: f64 = 1e-8;

/// Floor used when dividing by a restricted-support proxy.
pub const RHS_FLOOR: f64 = 1e-6;

/// Margin below 1/2 that a growth exponent must clear to count as improved.
pub const EXPONENT_MARGIN: f64 = 0.05;

/// Default Sasaki matching radius for grid-cell supports.
pub const DEFAULT_DIST_TOL: f64 = 0.05;

/// Default box-scale ladder, coarse to fine.
pub const DEFAULT_LADDER: [f64; 4] = [0.2, 0.1, 0.05, 0.025];

/// Default H² proxy cutoff at the finest ladder scale.
///
/// Geometric mean of the finest-scale proxies of the unit circle (0.19) and
/// a unit square (1.05) under the default ladder; anything between the two
/// separates curves from surfaces.
pub const DEFAULT_PROXY_CUTOFF: f64 = 0.45;

/// Fraction of the max lift weight kept by support extraction by default.
pub const DEFAULT_TAU: f64 = 1e-2;
