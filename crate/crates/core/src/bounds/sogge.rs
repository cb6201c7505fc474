//! Local L² mass on geodesic balls and the Sogge-type comparison
//! ‖u‖_∞ against λ^{1/2} sup_x δ^{-1/2} ‖u‖_{L²(B_δ(x))}.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::sup::{sup_grid, sup_norm};
use crate::eigenmodes::{Eigenfunction, EvalGrid, Family};
use crate::error::{LabError, Result};
use crate::geometry::model::{add3, scale, Frame, ManifoldModel, ModelKind, Vec3};
use crate::numeric::{gauss_legendre, pairwise_sum};
use crate::tolerances::RHS_FLOOR;

/// Relative agreement required between a ball quadrature and its 3/2 refinement.
const BALL_QUAD_TOL: f64 = 1e-6;
/// Screened base points re-integrated exactly.
const TOP_CANDIDATES: usize = 4;
/// sup_norm refinement tolerance used by the bound checks.
pub const REFINE_TOL: f64 = 1e-10;

/// One evaluation of an inequality: its two sides and their ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound: String,
    pub family: String,
    pub k: Option<usize>,
    pub seed: Option<u64>,
    pub lambda: f64,
    pub h: f64,
    pub x: [f64; 2],
    pub delta: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// lhs / max(rhs, RHS_FLOOR).
    pub ratio: f64,
    /// Base point attaining the largest ball mass (Sogge) or the sup in the
    /// shrinking ball (related bound).
    pub witness: [f64; 2],
    pub tau: Option<f64>,
    pub grid_dims: Option<[usize; 3]>,
}

impl BoundReport {
    pub fn ratio_of(lhs: f64, rhs: f64) -> f64 {
        lhs / rhs.max(RHS_FLOOR)
    }
}

fn seed_of(u: &Eigenfunction) -> Option<u64> {
    match u.family {
        Family::SphereRandomWave { seed, .. } => Some(seed),
        _ => None,
    }
}

/// Largest δ for which B_δ(x) is a normal-coordinate disc.
fn injectivity_safe(kind: ModelKind) -> f64 {
    match kind {
        ModelKind::RoundSphere2 => PI / 2.0,
        _ => PI,
    }
}

/// ‖u‖²_{L²(B_δ(c))} by Gauss–Legendre in the geodesic radius and the
/// trapezoid rule in angle. `c` is a point of S² (sphere) or a chart point
/// (torus) packed into the first two slots.
fn ball_mass_rule(u: &Eigenfunction, c: Vec3, delta: f64, n_rho: usize, n_phi: usize) -> f64 {
    let (x, w) = gauss_legendre(n_rho);
    let sphere = u.family.model_kind() == ModelKind::RoundSphere2;
    let (e1, e2) = if sphere {
        let f = Frame::from_pole(c);
        (f.e1, f.e2)
    } else {
        ([0.0; 3], [0.0; 3])
    };
    let rows: Vec<f64> = (0..n_rho)
        .into_par_iter()
        .map(|i| {
            let rho = 0.5 * delta * (x[i] + 1.0);
            let jac = if sphere { rho.sin() } else { rho };
            let (sr, cr) = rho.sin_cos();
            let vals: Vec<f64> = (0..n_phi)
                .map(|j| {
                    let (sp, cp) = (TAU * j as f64 / n_phi as f64).sin_cos();
                    if sphere {
                        let dir = add3(scale(e1, cp), scale(e2, sp));
                        u.eval_sphere(add3(scale(c, cr), scale(dir, sr))).norm_sqr()
                    } else {
                        let p = [
                            (c[0] + rho * cp).rem_euclid(TAU),
                            (c[1] + rho * sp).rem_euclid(TAU),
                        ];
                        u.eval_polar(p[0], p[1]).norm_sqr()
                    }
                })
                .collect();
            0.5 * delta * w[i] * jac * pairwise_sum(&vals) * TAU / n_phi as f64
        })
        .collect();
    pairwise_sum(&rows)
}

/// ‖u‖_{L²(B_δ(c))}, checked against a 3/2-refined rule.
pub fn ball_l2(u: &Eigenfunction, c: Vec3, delta: f64) -> Result<f64> {
    let n_rho = (u.lambda * delta).ceil() as usize + 24;
    let n_phi = 2 * (2.0 * u.lambda).ceil() as usize + 16;
    let a = ball_mass_rule(u, c, delta, n_rho, n_phi);
    let b = ball_mass_rule(u, c, delta, n_rho + n_rho / 2, n_phi + n_phi / 2);
    if (a - b).abs() > BALL_QUAD_TOL * b.max(f64::MIN_POSITIVE) {
        return Err(LabError::QuadratureTooCoarse((a - b).abs() / b));
    }
    Ok(b.max(0.0).sqrt())
}

/// Fibonacci lattice of about `n` points on S².
fn fibonacci_sphere(n: usize) -> Vec<Vec3> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let t = golden * i as f64;
            [r * t.cos(), r * t.sin(), z]
        })
        .collect()
}

/// Approximate ball masses of many centres from one tabulated |u|² grid,
/// used to pick candidates for exact integration.
struct Screen {
    grid: EvalGrid,
    vals: Vec<f64>,
}

impl Screen {
    fn new(u: &Eigenfunction) -> Screen {
        let grid = match u.family.model_kind() {
            ModelKind::RoundSphere2 => {
                let k = u.family.degree().unwrap_or(1);
                EvalGrid::sphere(u.model(), 2 * k + 8, 4 * k + 16)
            }
            _ => EvalGrid::torus(4 * u.lambda.ceil() as usize + 16),
        };
        let vals = grid.abs_sq(u);
        Screen { grid, vals }
    }

    fn mass(&self, c: Vec3, delta: f64) -> f64 {
        let g = &self.grid;
        let n1 = g.axis1.len();
        let mut acc = 0.0;
        match g.model.kind {
            ModelKind::RoundSphere2 => {
                let [rc, tc] = g.model.sphere_chart(c);
                let (src, crc) = rc.sin_cos();
                let cd = delta.cos();
                for (i, &r) in g.axis0.iter().enumerate() {
                    if (r - rc).abs() > delta {
                        continue;
                    }
                    let (sr, cr) = r.sin_cos();
                    let den = sr * src;
                    let half = if den < 1e-12 {
                        PI
                    } else {
                        let q = (cd - cr * crc) / den;
                        if q <= -1.0 {
                            PI
                        } else if q >= 1.0 {
                            continue;
                        } else {
                            q.acos()
                        }
                    };
                    let mut row = 0.0;
                    for (j, &t) in g.axis1.iter().enumerate() {
                        let d = (t - tc).rem_euclid(TAU);
                        if d.min(TAU - d) <= half {
                            row += g.w1[j] * self.vals[i * n1 + j];
                        }
                    }
                    acc += g.w0[i] * row;
                }
            }
            _ => {
                for (i, &a) in g.axis0.iter().enumerate() {
                    let da = (a - c[0]).rem_euclid(TAU);
                    let da = da.min(TAU - da);
                    if da > delta {
                        continue;
                    }
                    for (j, &b) in g.axis1.iter().enumerate() {
                        let db = (b - c[1]).rem_euclid(TAU);
                        let db = db.min(TAU - db);
                        if da.hypot(db) <= delta {
                            acc += g.w0[i] * g.w1[j] * self.vals[i * n1 + j];
                        }
                    }
                }
            }
        }
        acc
    }
}

/// lhs = ‖u‖_∞; rhs_core = λ^{1/2} δ^{-1/2} max_y ‖u‖_{L²(B_δ(y))}, with y
/// over x, a base-point lattice of spacing ≈ δ/2, and (sphere) the poles of
/// u's chart. Lattice masses are screened on a tabulated grid and the best
/// candidates integrated exactly.
pub fn check_sogge_local(u: &Eigenfunction, x: [f64; 2], delta: f64) -> Result<BoundReport> {
    let kind = u.family.model_kind();
    if kind == ModelKind::EuclideanPlane2 {
        return Err(LabError::UnsupportedModel(
            "Sogge bound on the plane".into(),
        ));
    }
    if !(delta >= 1.0 / u.lambda && delta <= injectivity_safe(kind)) {
        return Err(LabError::BadWindow(format!(
            "δ = {delta} outside [1/λ, {}]",
            injectivity_safe(kind)
        )));
    }
    let sphere = kind == ModelKind::RoundSphere2;
    let std_model = if sphere {
        ManifoldModel::sphere()
    } else {
        ManifoldModel::torus()
    };
    let as_center = |x: [f64; 2]| -> Vec3 {
        if sphere {
            std_model.sphere_point(x)
        } else {
            [x[0], x[1], 0.0]
        }
    };
    let mut candidates: Vec<Vec3> = vec![as_center(x)];
    if sphere {
        candidates.push(u.pole());
        candidates.push(scale(u.pole(), -1.0));
        let n = (16.0 * PI / (delta * delta)).ceil() as usize;
        candidates.extend(fibonacci_sphere(n));
    } else {
        let m = (2.0 * TAU / delta).ceil() as usize;
        for a in 0..m {
            for b in 0..m {
                candidates.push([TAU * a as f64 / m as f64, TAU * b as f64 / m as f64, 0.0]);
            }
        }
    }
    let screen = Screen::new(u);
    let mut scored: Vec<(f64, usize)> = candidates
        .par_iter()
        .enumerate()
        .map(|(i, c)| (screen.mass(*c, delta), i))
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    // x and the poles are always integrated exactly
    let fixed = if sphere { 3 } else { 1 };
    let mut exact_ids: Vec<usize> = (0..fixed).collect();
    exact_ids.extend(
        scored
            .iter()
            .map(|s| s.1)
            .filter(|&i| i >= fixed)
            .take(TOP_CANDIDATES),
    );
    let mut best = (-1.0, 0usize);
    for &i in &exact_ids {
        let m = ball_l2(u, candidates[i], delta)?;
        if m > best.0 {
            best = (m, i);
        }
    }
    let c = candidates[best.1];
    let witness = if sphere {
        std_model.sphere_chart(c)
    } else {
        [c[0], c[1]]
    };
    let lhs = sup_norm(u, &sup_grid(u), REFINE_TOL)?.sup_value;
    let rhs = u.lambda.sqrt() * best.0 / delta.sqrt();
    Ok(BoundReport {
        bound: "sogge-local".into(),
        family: u.family.tag().into(),
        k: u.family.degree(),
        seed: seed_of(u),
        lambda: u.lambda,
        h: u.h,
        x,
        delta,
        lhs,
        rhs,
        ratio: BoundReport::ratio_of(lhs, rhs),
        witness,
        tau: None,
        grid_dims: Some([
            screen.grid.axis0.len(),
            screen.grid.axis1.len(),
            candidates.len(),
        ]),
    })
}
