use std::f64::consts::TAU;

use crate::error::Result;
use crate::geometry::model::*;

/// Riemannian distance between two chart points.
pub fn geodesic_distance(model: &ManifoldModel, x: [f64; 2], y: [f64; 2]) -> Result<f64> {
    model.check_chart(x)?;
    model.check_chart(y)?;
    Ok(match model.kind {
        ModelKind::RoundSphere2 => {
            let p = model.sphere_point(x);
            let q = model.sphere_point(y);
            sphere_angle(p, q)
        }
        ModelKind::FlatTorus2 => flat_torus_distance(x, y),
        ModelKind::EuclideanPlane2 => (x[0] - y[0]).hypot(x[1] - y[1]),
    })
}

/// Angle between two unit vectors, accurate near 0 and π.
pub fn sphere_angle(p: Vec3, q: Vec3) -> f64 {
    norm(cross(p, q)).atan2(dot(p, q))
}

pub fn flat_torus_distance(x: [f64; 2], y: [f64; 2]) -> f64 {
    let d = |a: f64, b: f64| {
        let t = (a - b).rem_euclid(TAU);
        t.min(TAU - t)
    };
    d(x[0], y[0]).hypot(d(x[1], y[1]))
}

/// Sasaki-equivalent distance between unit-shell points.
pub fn sasaki_distance(model: &ManifoldModel, z1: &PhasePoint, z2: &PhasePoint) -> Result<f64> {
    let a = model.embed(z1)?;
    let b = model.embed(z2)?;
    model.check_shell(&a)?;
    model.check_shell(&b)?;
    Ok(ambient_distance(model, &a, &b))
}

/// Sasaki-equivalent distance on embedded points (no shell check).
///
/// Sphere: chordal distance of S*S² ⊂ ℝ³×ℝ³. Torus: flat base distance
/// combined with the covector gap. Plane: Euclidean distance on (x, ξ).
pub fn ambient_distance(model: &ManifoldModel, a: &Ambient, b: &Ambient) -> f64 {
    match model.kind {
        ModelKind::RoundSphere2 => chord6(a, b),
        ModelKind::FlatTorus2 => {
            let xa = [a[1].atan2(a[0]), a[3].atan2(a[2])];
            let xb = [b[1].atan2(b[0]), b[3].atan2(b[2])];
            let base = flat_torus_distance(xa, xb);
            let gap = (a[4] - b[4]).hypot(a[5] - b[5]);
            base.hypot(gap)
        }
        ModelKind::EuclideanPlane2 => {
            let mut s = 0.0;
            for i in 0..4 {
                s += (a[i] - b[i]) * (a[i] - b[i]);
            }
            s.sqrt()
        }
    }
}
