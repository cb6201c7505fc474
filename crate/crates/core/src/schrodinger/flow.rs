//! Hamiltonian flow of p = |ξ|² + |x|² and flow-outs of Σ_x.

use std::f64::consts::TAU;

use rayon::prelude::*;

use crate::error::{LabError, Result};
use crate::flowout::set::FLOWOUT_TOL;
use crate::flowout::FlowOutSet;
use crate::geometry::model::{Ambient, ManifoldModel, PhasePoint};
use crate::schrodinger::oscillator::{sigma_fiber, PotentialModel};
use crate::tolerances::SHELL_TOL;

/// Yoshida fourth-order coefficients for composing Störmer–Verlet.
const YOSHIDA: [f64; 3] = {
    // w1 = 1/(2 − 2^{1/3}), w0 = −2^{1/3} w1
    let w1 = 1.351_207_191_959_657_8;
    let w0 = -1.702_414_383_919_315_3;
    [w1, w0, w1]
};

const MAX_HALVINGS: usize = 24;

fn verlet(x: &mut [f64; 2], xi: &mut [f64; 2], dt: f64) {
    // ẋ = 2ξ, ξ̇ = −2x
    for c in 0..2 {
        xi[c] -= dt * x[c];
    }
    for c in 0..2 {
        x[c] += 2.0 * dt * xi[c];
    }
    for c in 0..2 {
        xi[c] -= dt * x[c];
    }
}

fn integrate(z: &PhasePoint, t: f64, n: usize) -> PhasePoint {
    let (mut x, mut xi) = (z.x, z.xi);
    let dt = t / n as f64;
    for _ in 0..n {
        for w in YOSHIDA {
            verlet(&mut x, &mut xi, w * dt);
        }
    }
    PhasePoint::new(x, xi)
}

/// Closed form: (x, ξ) rotates rigidly at angular speed 2.
pub fn oscillator_flow_exact(z: &PhasePoint, t: f64) -> PhasePoint {
    let (s, c) = (2.0 * t).sin_cos();
    PhasePoint::new(
        [z.x[0] * c + z.xi[0] * s, z.x[1] * c + z.xi[1] * s],
        [z.xi[0] * c - z.x[0] * s, z.xi[1] * c - z.x[1] * s],
    )
}

fn gap(a: &PhasePoint, b: &PhasePoint) -> f64 {
    let mut s: f64 = 0.0;
    for c in 0..2 {
        s += (a.x[c] - b.x[c]).powi(2) + (a.xi[c] - b.xi[c]).powi(2);
    }
    s.sqrt()
}

/// G_t(z) for p = |ξ|² + V by a fourth-order symplectic composition; the
/// step is halved until n and 2n steps agree and the energy drift are both
/// within `tol`.
pub fn classical_flow_v(
    model: &PotentialModel,
    z: &PhasePoint,
    t: f64,
    tol: f64,
) -> Result<PhasePoint> {
    let e = model.symbol(z.x, z.xi);
    if (e - model.energy).abs() > SHELL_TOL {
        return Err(LabError::ShellViolation(format!(
            "p = {e}, E = {}",
            model.energy
        )));
    }
    if t == 0.0 {
        return Ok(*z);
    }
    let mut n = ((t.abs() / 0.05).ceil() as usize).max(1);
    let mut prev = integrate(z, t, n);
    for _ in 0..MAX_HALVINGS {
        n *= 2;
        let next = integrate(z, t, n);
        let drift = (model.symbol(next.x, next.xi) - e).abs();
        if gap(&prev, &next) <= tol && drift <= tol {
            return Ok(next);
        }
        prev = next;
    }
    Err(LabError::NoConvergence(format!(
        "oscillator flow to t = {t} at tol {tol}"
    )))
}

/// x ∧ ξ.
pub fn angular_momentum(z: &PhasePoint) -> f64 {
    z.x[0] * z.xi[1] - z.x[1] * z.xi[0]
}

/// Λ_{x,T,V}: flow-out of Σ_x on the direction × time lattice, embedded as
/// (x, ξ, 0, 0). Samples along each direction are advanced interval by
/// interval from t = 0.
pub fn build_flowout_v(
    model: &PotentialModel,
    x: [f64; 2],
    t_max: f64,
    ndirs: usize,
    ntimes: usize,
) -> Result<FlowOutSet> {
    if !(t_max > 0.0) {
        return Err(LabError::InvalidArgument(format!("T = {t_max}")));
    }
    if ndirs < 64 || ntimes < 64 {
        return Err(LabError::InvalidArgument(format!(
            "flow-out lattice {ndirs} × {ntimes} below 64 × 64"
        )));
    }
    let fiber = sigma_fiber(model, x)?;
    let half = ntimes / 2;
    let dt = t_max / half as f64;
    let times: Vec<f64> = (0..=2 * half)
        .map(|j| (j as f64 - half as f64) * dt)
        .collect();
    let dirs: Vec<f64> = (0..ndirs).map(|d| TAU * d as f64 / ndirs as f64).collect();
    let embed = |z: &PhasePoint| -> Ambient { [z.x[0], z.x[1], z.xi[0], z.xi[1], 0.0, 0.0] };
    let rows: Vec<Vec<Ambient>> = dirs
        .par_iter()
        .map(|&a| {
            let z0 = PhasePoint::new(x, [fiber.radius * a.cos(), fiber.radius * a.sin()]);
            let mut row = vec![[0.0; 6]; times.len()];
            row[half] = embed(&z0);
            for sign in [1.0, -1.0] {
                let mut z = z0;
                for j in 1..=half {
                    z = classical_flow_v(model, &z, sign * dt, FLOWOUT_TOL)?;
                    let idx = if sign > 0.0 { half + j } else { half - j };
                    row[idx] = embed(&z);
                }
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    Ok(FlowOutSet {
        model: ManifoldModel::plane(),
        x,
        t_max,
        dirs,
        times,
        samples: rows.concat(),
    })
}
