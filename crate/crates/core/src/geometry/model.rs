use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::tolerances::{CHART_MARGIN, SHELL_TOL};

pub type Vec3 = [f64; 3];

/// A phase point embedded in ℝ⁶.
///
/// Sphere: (X, V) with X ∈ S² and V the velocity g⁻¹ξ as a tangent vector.
/// Torus: (cos x₁, sin x₁, cos x₂, sin x₂, ξ₁, ξ₂).
/// Plane: (x₁, x₂, ξ₁, ξ₂, 0, 0).
pub type Ambient = [f64; 6];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelKind {
    RoundSphere2,
    FlatTorus2,
    EuclideanPlane2,
}

/// Orthonormal frame of ℝ³; `e3` is the pole of the polar chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub e1: Vec3,
    pub e2: Vec3,
    pub e3: Vec3,
}

impl Frame {
    pub const STANDARD: Frame = Frame {
        e1: [1.0, 0.0, 0.0],
        e2: [0.0, 1.0, 0.0],
        e3: [0.0, 0.0, 1.0],
    };

    /// Right-handed frame with `e3 = pole`; `e1` is the projection of the
    /// coordinate axis least aligned with the pole.
    pub fn from_pole(pole: Vec3) -> Frame {
        let e3 = unit(pole);
        let axis = least_aligned_axis(e3);
        Frame::from_pole_and_hint(e3, axis)
    }

    /// Right-handed frame with `e3 = pole` and `e1` along the component of
    /// `hint` orthogonal to the pole.
    pub fn from_pole_and_hint(pole: Vec3, hint: Vec3) -> Frame {
        let e3 = unit(pole);
        let e1 = unit(sub(hint, scale(e3, dot(hint, e3))));
        let e2 = cross(e3, e1);
        Frame { e1, e2, e3 }
    }
}

fn least_aligned_axis(v: Vec3) -> Vec3 {
    let a = [v[0].abs(), v[1].abs(), v[2].abs()];
    if a[0] <= a[1] && a[0] <= a[2] {
        [1.0, 0.0, 0.0]
    } else if a[1] <= a[2] {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    }
}

/// Model manifold with its chart convention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ManifoldModel {
    pub kind: ModelKind,
    /// Polar chart frame (sphere only; ignored otherwise).
    pub frame: Frame,
}

/// Chart coordinates and covector components in the same chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: [f64; 2],
    pub xi: [f64; 2],
}

impl PhasePoint {
    pub fn new(x: [f64; 2], xi: [f64; 2]) -> Self {
        PhasePoint { x, xi }
    }
}

impl ManifoldModel {
    pub fn sphere() -> Self {
        ManifoldModel {
            kind: ModelKind::RoundSphere2,
            frame: Frame::STANDARD,
        }
    }

    pub fn sphere_with_frame(frame: Frame) -> Self {
        ManifoldModel {
            kind: ModelKind::RoundSphere2,
            frame,
        }
    }

    pub fn torus() -> Self {
        ManifoldModel {
            kind: ModelKind::FlatTorus2,
            frame: Frame::STANDARD,
        }
    }

    pub fn plane() -> Self {
        ManifoldModel {
            kind: ModelKind::EuclideanPlane2,
            frame: Frame::STANDARD,
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ModelKind::RoundSphere2 => "RoundSphere2",
            ModelKind::FlatTorus2 => "FlatTorus2",
            ModelKind::EuclideanPlane2 => "EuclideanPlane2",
        }
    }

    pub fn is_sphere(&self) -> bool {
        self.kind == ModelKind::RoundSphere2
    }

    /// Chart validity check.
    pub fn check_chart(&self, x: [f64; 2]) -> Result<()> {
        if !x[0].is_finite() || !x[1].is_finite() {
            return Err(LabError::ChartViolation(format!("non-finite point {x:?}")));
        }
        match self.kind {
            ModelKind::RoundSphere2 => {
                let r = x[0];
                if r < CHART_MARGIN || r > PI - CHART_MARGIN {
                    return Err(LabError::ChartViolation(format!(
                        "r = {r} within {CHART_MARGIN} of a pole"
                    )));
                }
                Ok(())
            }
            ModelKind::FlatTorus2 => {
                if x.iter().any(|&c| !(0.0..TAU).contains(&c)) {
                    return Err(LabError::ChartViolation(format!(
                        "torus point {x:?} outside [0, 2π)²"
                    )));
                }
                Ok(())
            }
            ModelKind::EuclideanPlane2 => Ok(()),
        }
    }

    /// Embedded base point on S² for a sphere chart point (no margin check).
    pub fn sphere_point(&self, x: [f64; 2]) -> Vec3 {
        let f = &self.frame;
        let (sr, cr) = x[0].sin_cos();
        let (st, ct) = x[1].sin_cos();
        add3(
            add3(scale(f.e1, sr * ct), scale(f.e2, sr * st)),
            scale(f.e3, cr),
        )
    }

    /// Unit tangent vectors (e_r, e_θ) at a sphere chart point.
    pub fn sphere_tangent_frame(&self, x: [f64; 2]) -> (Vec3, Vec3) {
        let f = &self.frame;
        let (sr, cr) = x[0].sin_cos();
        let (st, ct) = x[1].sin_cos();
        let er = add3(
            add3(scale(f.e1, cr * ct), scale(f.e2, cr * st)),
            scale(f.e3, -sr),
        );
        let et = add3(scale(f.e1, -st), scale(f.e2, ct));
        (er, et)
    }

    /// Chart coordinates (r, θ) of a point of S², θ ∈ [0, 2π).
    pub fn sphere_chart(&self, p: Vec3) -> [f64; 2] {
        let f = &self.frame;
        let a = dot(p, f.e1);
        let b = dot(p, f.e2);
        let c = dot(p, f.e3);
        let r = (a * a + b * b).sqrt().atan2(c);
        let mut th = b.atan2(a);
        if th < 0.0 {
            th += TAU;
        }
        if th >= TAU {
            th -= TAU;
        }
        [r, th]
    }

    /// Embed a chart phase point into ℝ⁶.
    pub fn embed(&self, z: &PhasePoint) -> Result<Ambient> {
        self.check_chart(z.x)?;
        Ok(self.embed_unchecked(z))
    }

    pub(crate) fn embed_unchecked(&self, z: &PhasePoint) -> Ambient {
        match self.kind {
            ModelKind::RoundSphere2 => {
                let p = self.sphere_point(z.x);
                let (er, et) = self.sphere_tangent_frame(z.x);
                let v = add3(scale(er, z.xi[0]), scale(et, z.xi[1] / z.x[0].sin()));
                [p[0], p[1], p[2], v[0], v[1], v[2]]
            }
            ModelKind::FlatTorus2 => {
                let (s1, c1) = z.x[0].sin_cos();
                let (s2, c2) = z.x[1].sin_cos();
                [c1, s1, c2, s2, z.xi[0], z.xi[1]]
            }
            ModelKind::EuclideanPlane2 => [z.x[0], z.x[1], z.xi[0], z.xi[1], 0.0, 0.0],
        }
    }

    /// Chart coordinates of an embedded phase point.
    pub fn chart_of(&self, a: &Ambient) -> Result<PhasePoint> {
        let z = self.chart_of_unchecked(a);
        self.check_chart(z.x)?;
        Ok(z)
    }

    pub(crate) fn chart_of_unchecked(&self, a: &Ambient) -> PhasePoint {
        match self.kind {
            ModelKind::RoundSphere2 => {
                let p = [a[0], a[1], a[2]];
                let v = [a[3], a[4], a[5]];
                let x = self.sphere_chart(p);
                let (er, et) = self.sphere_tangent_frame(x);
                PhasePoint::new(x, [dot(v, er), x[0].sin() * dot(v, et)])
            }
            ModelKind::FlatTorus2 => PhasePoint::new(
                [wrap_angle(a[1].atan2(a[0])), wrap_angle(a[3].atan2(a[2]))],
                [a[4], a[5]],
            ),
            ModelKind::EuclideanPlane2 => PhasePoint::new([a[0], a[1]], [a[2], a[3]]),
        }
    }

    /// Unit tangent frame at an embedded base point, used to parametrize
    /// fiber directions. Chart-valid sphere points use (e_r, e_θ); near a
    /// pole the frame axes e1, e2 are used instead.
    pub fn fiber_frame(&self, a: &Ambient) -> (Vec3, Vec3) {
        match self.kind {
            ModelKind::RoundSphere2 => {
                let p = [a[0], a[1], a[2]];
                let x = self.sphere_chart(p);
                if x[0] >= CHART_MARGIN && x[0] <= PI - CHART_MARGIN {
                    self.sphere_tangent_frame(x)
                } else {
                    let e1 = unit(sub(self.frame.e1, scale(p, dot(self.frame.e1, p))));
                    (e1, cross(p, e1))
                }
            }
            _ => ([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]),
        }
    }

    /// Unit-shell phase point over `a`'s base with fiber angle φ measured in
    /// the fiber frame.
    pub fn with_fiber_angle(&self, a: &Ambient, phi: f64) -> Ambient {
        let (s, c) = phi.sin_cos();
        match self.kind {
            ModelKind::RoundSphere2 => {
                let (u, w) = self.fiber_frame(a);
                let v = add3(scale(u, c), scale(w, s));
                [a[0], a[1], a[2], v[0], v[1], v[2]]
            }
            ModelKind::FlatTorus2 => [a[0], a[1], a[2], a[3], c, s],
            ModelKind::EuclideanPlane2 => [a[0], a[1], c, s, 0.0, 0.0],
        }
    }

    /// |ξ|_g of an embedded point.
    pub fn speed(&self, a: &Ambient) -> f64 {
        match self.kind {
            ModelKind::RoundSphere2 => norm([a[3], a[4], a[5]]),
            ModelKind::FlatTorus2 => a[4].hypot(a[5]),
            ModelKind::EuclideanPlane2 => a[2].hypot(a[3]),
        }
    }

    /// p = ½|ξ|² of an embedded point.
    pub fn ambient_energy(&self, a: &Ambient) -> f64 {
        let s = self.speed(a);
        0.5 * s * s
    }

    pub(crate) fn check_shell(&self, a: &Ambient) -> Result<()> {
        let s = self.speed(a);
        if (s - 1.0).abs() > SHELL_TOL {
            return Err(LabError::ShellViolation(format!("|ξ|_g = {s}")));
        }
        Ok(())
    }
}

/// Inverse metric g⁻¹ at a chart point.
pub fn metric_inverse_at(model: &ManifoldModel, x: [f64; 2]) -> Result<[[f64; 2]; 2]> {
    model.check_chart(x)?;
    Ok(match model.kind {
        ModelKind::RoundSphere2 => {
            let s = x[0].sin();
            [[1.0, 0.0], [0.0, 1.0 / (s * s)]]
        }
        _ => [[1.0, 0.0], [0.0, 1.0]],
    })
}

/// p(z) = ½ ξᵀ g⁻¹ ξ.
pub fn hamiltonian(model: &ManifoldModel, z: &PhasePoint) -> Result<f64> {
    let g = metric_inverse_at(model, z.x)?;
    let xi = z.xi;
    Ok(0.5 * (g[0][0] * xi[0] * xi[0] + 2.0 * g[0][1] * xi[0] * xi[1] + g[1][1] * xi[1] * xi[1]))
}

/// Clairaut integral ξ_θ on the round sphere.
pub fn clairaut(model: &ManifoldModel, z: &PhasePoint) -> Result<f64> {
    if !model.is_sphere() {
        return Err(LabError::UnsupportedModel(model.name().into()));
    }
    model.check_chart(z.x)?;
    Ok(z.xi[1])
}

pub fn wrap_angle(a: f64) -> f64 {
    let mut t = a.rem_euclid(TAU);
    if t >= TAU {
        t -= TAU;
    }
    t
}

/// Signed representative of an angle difference in (−π, π].
pub fn angle_diff(a: f64) -> f64 {
    let t = a.rem_euclid(TAU);
    if t > PI {
        t - TAU
    } else {
        t
    }
}

#[inline]
pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn scale(a: Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub fn add3(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn unit(a: Vec3) -> Vec3 {
    scale(a, 1.0 / norm(a))
}

#[inline]
pub fn chord6(a: &Ambient, b: &Ambient) -> f64 {
    let mut s = 0.0;
    for i in 0..6 {
        let d = a[i] - b[i];
        s += d * d;
    }
    s.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metric_inverse_examples() {
        let s = ManifoldModel::sphere();
        let g = metric_inverse_at(&s, [PI / 2.0, 0.0]).unwrap();
        assert!((g[0][0] - 1.0).abs() < 1e-15 && (g[1][1] - 1.0).abs() < 1e-15);
        let g = metric_inverse_at(&s, [PI / 3.0, 1.0]).unwrap();
        assert!((g[1][1] - 4.0 / 3.0).abs() < 1e-14);
        let g = metric_inverse_at(&ManifoldModel::torus(), [1.0, 2.0]).unwrap();
        assert_eq!(g, [[1.0, 0.0], [0.0, 1.0]]);
        assert!(matches!(
            metric_inverse_at(&s, [1e-4, 0.0]),
            Err(LabError::ChartViolation(_))
        ));
        assert!(matches!(
            metric_inverse_at(&ManifoldModel::torus(), [7.0, 0.0]),
            Err(LabError::ChartViolation(_))
        ));
    }

    #[test]
    fn hamiltonian_examples() {
        let s = ManifoldModel::sphere();
        let p = hamiltonian(&s, &PhasePoint::new([PI / 2.0, 0.0], [1.0, 0.0])).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        let p = hamiltonian(
            &ManifoldModel::torus(),
            &PhasePoint::new([0.0, 0.0], [3.0, 4.0]),
        )
        .unwrap();
        assert!((p - 12.5).abs() < 1e-15);
        let r = PI / 3.0;
        let p = hamiltonian(&s, &PhasePoint::new([r, 0.3], [0.0, r.sin()])).unwrap();
        assert!((p - 0.5).abs() < 1e-14);
    }

    #[test]
    fn clairaut_examples() {
        let s = ManifoldModel::sphere();
        assert_eq!(
            clairaut(&s, &PhasePoint::new([1.0, 0.0], [1.0, 0.0])).unwrap(),
            0.0
        );
        assert_eq!(
            clairaut(&s, &PhasePoint::new([PI / 2.0, 0.0], [0.0, 1.0])).unwrap(),
            1.0
        );
        assert!(matches!(
            clairaut(
                &ManifoldModel::torus(),
                &PhasePoint::new([1.0, 0.0], [1.0, 0.0])
            ),
            Err(LabError::UnsupportedModel(_))
        ));
    }

    #[test]
    fn embed_round_trip_sphere_rotated() {
        let m = ManifoldModel::sphere_with_frame(Frame::from_pole([1.0, 2.0, -0.5]));
        let z = PhasePoint::new([1.1, 4.0], [0.3, -0.7]);
        let a = m.embed(&z).unwrap();
        let back = m.chart_of(&a).unwrap();
        for i in 0..2 {
            assert!((back.x[i] - z.x[i]).abs() < 1e-13);
            assert!((back.xi[i] - z.xi[i]).abs() < 1e-13);
        }
        // velocity is tangent and has the metric norm
        let x = [a[0], a[1], a[2]];
        let v = [a[3], a[4], a[5]];
        assert!(dot(x, v).abs() < 1e-14);
        let p = hamiltonian(&m, &z).unwrap();
        assert!((0.5 * dot(v, v) - p).abs() < 1e-14);
    }

    #[test]
    fn frame_is_orthonormal_right_handed() {
        let f = Frame::from_pole([0.3, -0.2, 0.9]);
        assert!(dot(f.e1, f.e2).abs() < 1e-15);
        assert!(dot(f.e1, f.e3).abs() < 1e-15);
        let c = cross(f.e1, f.e2);
        assert!(norm(sub(c, f.e3)) < 1e-14);
    }
}
