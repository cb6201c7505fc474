//! Subsets of the unit cosphere bundle queried by Sasaki-equivalent distance.

use std::f64::consts::TAU;

use rustc_hash::FxHashMap;

use crate::geometry::model::{cross, dot, norm, Ambient, ManifoldModel, Vec3};
use crate::geometry::{ambient_distance, sphere_angle};

/// A phase-space region with a distance query.
pub trait PhaseSet: Sync {
    /// Distance from `a` to the set; any value above `cap` may be returned
    /// as +∞.
    fn distance_capped(&self, a: &Ambient, cap: f64) -> f64;

    fn within(&self, a: &Ambient, tol: f64) -> bool {
        self.distance_capped(a, tol) <= tol
    }

    /// Spatial resolution of the set's representation (0 for analytic sets).
    fn resolution(&self) -> f64 {
        0.0
    }
}

/// The whole phase space.
pub struct Everything;

impl PhaseSet for Everything {
    fn distance_capped(&self, _a: &Ambient, _cap: f64) -> f64 {
        0.0
    }
}

/// The empty set.
pub struct Nothing;

impl PhaseSet for Nothing {
    fn distance_capped(&self, _a: &Ambient, _cap: f64) -> f64 {
        f64::INFINITY
    }
}

fn frame_normal(a: &Ambient) -> Vec3 {
    let n = cross([a[0], a[1], a[2]], [a[3], a[4], a[5]]);
    let l = norm(n);
    [n[0] / l, n[1] / l, n[2] / l]
}

/// Λ₀: every unit covector whose geodesic passes through the pole p, i.e.
/// the frames (X, V) with (X × V) ⊥ p.
///
/// On S*S² ≅ SO(3) the nearest such frame is reached by turning the normal
/// N = X × V onto the great circle p^⊥, so the chordal distance is
/// 2 sin(β/2) with β = arcsin|p·N|.
pub struct ZonalLagrangian {
    pub pole: Vec3,
}

impl PhaseSet for ZonalLagrangian {
    fn distance_capped(&self, a: &Ambient, _cap: f64) -> f64 {
        let n = frame_normal(a);
        let beta = dot(self.pole, n).abs().min(1.0).asin();
        2.0 * (0.5 * beta).sin()
    }
}

/// Lift of the equator of `pole` traversed counterclockwise about the pole:
/// frames with X × V = p. Distance 2 sin(ψ/2), ψ = ∠(N, p).
pub struct OrientedEquator {
    pub pole: Vec3,
}

impl PhaseSet for OrientedEquator {
    fn distance_capped(&self, a: &Ambient, _cap: f64) -> f64 {
        let psi = sphere_angle(frame_normal(a), self.pole);
        2.0 * (0.5 * psi).sin()
    }
}

/// Both orientations of the equator lift.
pub struct Equator {
    pub pole: Vec3,
}

impl PhaseSet for Equator {
    fn distance_capped(&self, a: &Ambient, _cap: f64) -> f64 {
        let psi = sphere_angle(frame_normal(a), self.pole);
        let psi = psi.min(std::f64::consts::PI - psi);
        2.0 * (0.5 * psi).sin()
    }
}

/// Invariant torus {ξ = (cos φ₀, sin φ₀)} of the flat torus.
pub struct TorusDirection {
    pub angle: f64,
}

impl PhaseSet for TorusDirection {
    fn distance_capped(&self, a: &Ambient, _cap: f64) -> f64 {
        let (s, c) = self.angle.sin_cos();
        (a[4] - c).hypot(a[5] - s)
    }
}

/// A finite point set with a hash index on the first three ambient
/// coordinates (a lower bound for the model distance).
pub struct PointCloud {
    model: ManifoldModel,
    points: Vec<Ambient>,
    bin: f64,
    index: FxHashMap<[i32; 3], Vec<u32>>,
    resolution: f64,
}

impl PointCloud {
    pub fn new(model: ManifoldModel, points: Vec<Ambient>, bin: f64) -> Self {
        let mut index: FxHashMap<[i32; 3], Vec<u32>> = FxHashMap::default();
        for (i, p) in points.iter().enumerate() {
            index.entry(key3(p, bin)).or_default().push(i as u32);
        }
        PointCloud {
            model,
            points,
            bin,
            index,
            resolution: 0.0,
        }
    }

    /// Declare the spacing of the underlying samples or cells.
    pub fn with_resolution(mut self, resolution: f64) -> Self {
        self.resolution = resolution;
        self
    }

    pub fn points(&self) -> &[Ambient] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn key3(p: &Ambient, bin: f64) -> [i32; 3] {
    [
        (p[0] / bin).floor() as i32,
        (p[1] / bin).floor() as i32,
        (p[2] / bin).floor() as i32,
    ]
}

impl PhaseSet for PointCloud {
    fn distance_capped(&self, a: &Ambient, cap: f64) -> f64 {
        if self.points.is_empty() {
            return f64::INFINITY;
        }
        let reach = (cap / self.bin).ceil().max(1.0) as i32;
        let k = key3(a, self.bin);
        let mut best = f64::INFINITY;
        for dx in -reach..=reach {
            for dy in -reach..=reach {
                for dz in -reach..=reach {
                    if let Some(ids) = self.index.get(&[k[0] + dx, k[1] + dy, k[2] + dz]) {
                        for &i in ids {
                            let d = ambient_distance(&self.model, a, &self.points[i as usize]);
                            if d < best {
                                best = d;
                            }
                        }
                    }
                }
            }
        }
        best
    }

    fn resolution(&self) -> f64 {
        self.resolution
    }
}

/// Λ_{p,δ}: the geodesics through p for flow times |s| ≤ δ, sampled at
/// spacing `step` in both fiber angle and time.
pub fn pole_flowout_cloud(pole: Vec3, delta: f64, step: f64) -> PointCloud {
    let frame = crate::geometry::Frame::from_pole(pole);
    let n_alpha = (TAU / step).ceil() as usize;
    let n_s = (2.0 * delta / step).ceil().max(1.0) as usize;
    let mut pts = Vec::with_capacity(n_alpha * (n_s + 1));
    for a in 0..n_alpha {
        let alpha = TAU * a as f64 / n_alpha as f64;
        let (sa, ca) = alpha.sin_cos();
        let u = [
            ca * frame.e1[0] + sa * frame.e2[0],
            ca * frame.e1[1] + sa * frame.e2[1],
            ca * frame.e1[2] + sa * frame.e2[2],
        ];
        for j in 0..=n_s {
            let s = -delta + 2.0 * delta * j as f64 / n_s as f64;
            pts.push(geodesic_from(pole, u, s));
        }
    }
    PointCloud::new(crate::geometry::ManifoldModel::sphere(), pts, 0.05).with_resolution(step)
}

/// (X, V) at time s on the unit-speed geodesic from `x` with velocity `u`.
pub fn geodesic_from(x: Vec3, u: Vec3, s: f64) -> Ambient {
    let (ss, cs) = s.sin_cos();
    [
        cs * x[0] + ss * u[0],
        cs * x[1] + ss * u[1],
        cs * x[2] + ss * u[2],
        -ss * x[0] + cs * u[0],
        -ss * x[1] + cs * u[1],
        -ss * x[2] + cs * u[2],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::model::chord6;

    fn brute_min(set_pts: &[Ambient], a: &Ambient) -> f64 {
        set_pts
            .iter()
            .map(|p| chord6(p, a))
            .fold(f64::INFINITY, f64::min)
    }

    fn frames(n: usize) -> Vec<Ambient> {
        // deterministic spread of frames
        let mut out = Vec::new();
        for i in 0..n {
            let t = i as f64 * 0.618_033_988_75;
            let z = 1.0 - 2.0 * ((i as f64 + 0.5) / n as f64);
            let r = (1.0 - z * z).sqrt();
            let x = [r * (TAU * t).cos(), r * (TAU * t).sin(), z];
            let helper = if x[2].abs() < 0.9 {
                [0.0, 0.0, 1.0]
            } else {
                [1.0, 0.0, 0.0]
            };
            let e = crate::geometry::model::unit(cross(x, helper));
            let f = cross(x, e);
            let phi = 2.399 * i as f64;
            let v = [
                phi.cos() * e[0] + phi.sin() * f[0],
                phi.cos() * e[1] + phi.sin() * f[1],
                phi.cos() * e[2] + phi.sin() * f[2],
            ];
            out.push([x[0], x[1], x[2], v[0], v[1], v[2]]);
        }
        out
    }

    #[test]
    fn zonal_lagrangian_distance_matches_dense_sampling() {
        let pole = [0.0, 0.0, 1.0];
        let dense = pole_flowout_cloud(pole, std::f64::consts::PI, 0.004);
        let set = ZonalLagrangian { pole };
        for a in frames(40) {
            let exact = set.distance_capped(&a, 10.0);
            let sampled = brute_min(dense.points(), &a);
            assert!(
                sampled >= exact - 1e-12,
                "sampled {sampled} < exact {exact}"
            );
            assert!(sampled - exact < 0.006, "sampled {sampled} exact {exact}");
        }
    }

    #[test]
    fn oriented_equator_distance_matches_dense_sampling() {
        let pole = [0.0, 0.0, 1.0];
        let eq: Vec<Ambient> = (0..20000)
            .map(|i| {
                let s = TAU * i as f64 / 20000.0;
                geodesic_from([1.0, 0.0, 0.0], [0.0, 1.0, 0.0], s)
            })
            .collect();
        let set = OrientedEquator { pole };
        for a in frames(40) {
            let exact = set.distance_capped(&a, 10.0);
            let sampled = brute_min(&eq, &a);
            assert!(
                sampled >= exact - 1e-12 && sampled - exact < 1e-3,
                "{sampled} vs {exact}"
            );
        }
    }

    #[test]
    fn point_cloud_matches_brute_force() {
        let pts = frames(500);
        let cloud = PointCloud::new(ManifoldModel::sphere(), pts.clone(), 0.1);
        for a in frames(37) {
            let d = cloud.distance_capped(&a, 0.3);
            let b = brute_min(&pts, &a);
            if b <= 0.3 {
                assert!((d - b).abs() < 1e-14);
            } else {
                assert!(d > 0.3 || (d - b).abs() < 1e-14);
            }
        }
    }
}
