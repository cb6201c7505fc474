//! Cell grids on the unit cosphere bundle.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::geometry::model::{add3, scale, Ambient, Frame, ManifoldModel, ModelKind};

/// Product grid of base cells × fiber-angle cells.
///
/// Sphere: r ∈ [r_lo, r_hi] of the grid's polar chart, θ ∈ [0, 2π).
/// Torus: x₁, x₂ ∈ [0, 2π). Fiber angle φ ∈ [0, 2π) with covector direction
/// cos φ e_r + sin φ e_θ (sphere) or (cos φ, sin φ) (torus). Cells are
/// indexed (i, j, l) ↦ (i·n1 + j)·n_fib + l.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid {
    pub model: ManifoldModel,
    pub n0: usize,
    pub n1: usize,
    pub n_fib: usize,
    pub lo0: f64,
    pub hi0: f64,
}

/// Default sphere grid resolution per axis.
pub const DEFAULT_CELLS: usize = 64;
/// Default polar window margin on the sphere.
pub const DEFAULT_POLE_MARGIN: f64 = 0.2;

impl PhaseGrid {
    pub fn sphere(
        frame: Frame,
        n_r: usize,
        n_theta: usize,
        n_fib: usize,
        margin: f64,
    ) -> Result<Self> {
        if !(margin > 0.0 && margin < PI / 2.0) || n_r == 0 || n_theta == 0 || n_fib == 0 {
            return Err(LabError::InvalidArgument(format!(
                "sphere grid {n_r}×{n_theta}×{n_fib}, margin {margin}"
            )));
        }
        Ok(PhaseGrid {
            model: ManifoldModel::sphere_with_frame(frame),
            n0: n_r,
            n1: n_theta,
            n_fib,
            lo0: margin,
            hi0: PI - margin,
        })
    }

    /// 64³ cells on r ∈ [0.2, π − 0.2] of the given chart frame.
    pub fn sphere_default(frame: Frame) -> Self {
        Self::sphere(
            frame,
            DEFAULT_CELLS,
            DEFAULT_CELLS,
            DEFAULT_CELLS,
            DEFAULT_POLE_MARGIN,
        )
        .expect("valid default grid")
    }

    pub fn torus(n: usize, n_fib: usize) -> Result<Self> {
        if n == 0 || n_fib == 0 {
            return Err(LabError::InvalidArgument(format!(
                "torus grid {n}×{n}×{n_fib}"
            )));
        }
        Ok(PhaseGrid {
            model: ManifoldModel::torus(),
            n0: n,
            n1: n,
            n_fib,
            lo0: 0.0,
            hi0: TAU,
        })
    }

    pub fn len(&self) -> usize {
        self.n0 * self.n1 * self.n_fib
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn base_len(&self) -> usize {
        self.n0 * self.n1
    }

    pub fn d0(&self) -> f64 {
        (self.hi0 - self.lo0) / self.n0 as f64
    }

    pub fn d1(&self) -> f64 {
        TAU / self.n1 as f64
    }

    pub fn dphi(&self) -> f64 {
        TAU / self.n_fib as f64
    }

    pub fn split(&self, c: usize) -> (usize, usize, usize) {
        let l = c % self.n_fib;
        let b = c / self.n_fib;
        (b / self.n1, b % self.n1, l)
    }

    pub fn index(&self, i: usize, j: usize, l: usize) -> usize {
        (i * self.n1 + j) * self.n_fib + l
    }

    /// Chart coordinates of the centre of base cell (i, j).
    pub fn base_center(&self, i: usize, j: usize) -> [f64; 2] {
        [
            self.lo0 + (i as f64 + 0.5) * self.d0(),
            (j as f64 + 0.5) * self.d1(),
        ]
    }

    pub fn fiber_angle(&self, l: usize) -> f64 {
        (l as f64 + 0.5) * self.dphi()
    }

    /// Embedded unit-shell point at the centre of cell `c`.
    pub fn center(&self, c: usize) -> Ambient {
        let (i, j, l) = self.split(c);
        self.point(self.base_center(i, j), self.fiber_angle(l))
    }

    /// Embedded unit-shell point over chart point x with fiber angle φ.
    pub fn point(&self, x: [f64; 2], phi: f64) -> Ambient {
        let (s, co) = phi.sin_cos();
        match self.model.kind {
            ModelKind::RoundSphere2 => {
                let p = self.model.sphere_point(x);
                let (er, et) = self.model.sphere_tangent_frame(x);
                let v = add3(scale(er, co), scale(et, s));
                [p[0], p[1], p[2], v[0], v[1], v[2]]
            }
            _ => {
                let (s1, c1) = x[0].sin_cos();
                let (s2, c2) = x[1].sin_cos();
                [c1, s1, c2, s2, co, s]
            }
        }
    }

    /// Liouville measure of cell `c` (area × fiber angle).
    pub fn cell_measure(&self, c: usize) -> f64 {
        let (i, _, _) = self.split(c);
        self.base_area(i) * self.dphi()
    }

    /// Area of every base cell in row i.
    pub fn base_area(&self, i: usize) -> f64 {
        match self.model.kind {
            ModelKind::RoundSphere2 => {
                let r0 = self.lo0 + i as f64 * self.d0();
                let r1 = r0 + self.d0();
                (r0.cos() - r1.cos()) * self.d1()
            }
            _ => self.d0() * self.d1(),
        }
    }

    /// Total Liouville measure covered by the grid.
    pub fn covered_measure(&self) -> f64 {
        (0..self.n0).map(|i| self.base_area(i)).sum::<f64>() * self.n1 as f64 * TAU
    }

    /// Largest Sasaki-equivalent cell diameter (corner to corner bound).
    pub fn max_cell_diameter(&self) -> f64 {
        let base = match self.model.kind {
            ModelKind::RoundSphere2 => {
                // widest θ-extent at the row nearest the equator
                let widest = (self.lo0..=self.hi0).contains(&(PI / 2.0));
                let s = if widest {
                    1.0
                } else {
                    self.lo0.sin().max(self.hi0.sin())
                };
                self.d0().hypot(s * self.d1())
            }
            _ => self.d0().hypot(self.d1()),
        };
        // the fiber frame also turns by at most cos r·Δθ across a sphere cell
        let turn = match self.model.kind {
            ModelKind::RoundSphere2 => self.lo0.cos().abs() * self.d1(),
            _ => 0.0,
        };
        base.hypot(self.dphi() + turn)
    }

    /// Largest base-cell diameter.
    pub fn base_cell_size(&self) -> f64 {
        match self.model.kind {
            ModelKind::RoundSphere2 => self.d0().max(self.d1()),
            _ => self.d0().max(self.d1()),
        }
    }

    /// Cell containing the embedded point, or None outside the chart window.
    pub fn locate(&self, a: &Ambient) -> Option<usize> {
        let (x, phi) = self.coordinates(a);
        let fi = (x[0] - self.lo0) / self.d0();
        if !(fi >= 0.0 && fi < self.n0 as f64) {
            return None;
        }
        let i = fi as usize;
        let j = ((x[1] / self.d1()) as usize).min(self.n1 - 1);
        let l = ((phi / self.dphi()) as usize).min(self.n_fib - 1);
        Some(self.index(i, j, l))
    }

    /// Like `locate`, snapping points outside the window to the nearest row.
    pub fn locate_clamped(&self, a: &Ambient) -> usize {
        let (x, phi) = self.coordinates(a);
        let fi = ((x[0] - self.lo0) / self.d0()).clamp(0.0, self.n0 as f64 - 0.5);
        let j = ((x[1] / self.d1()) as usize).min(self.n1 - 1);
        let l = ((phi / self.dphi()) as usize).min(self.n_fib - 1);
        self.index(fi as usize, j, l)
    }

    /// Chart point and fiber angle φ ∈ [0, 2π) of an embedded point.
    pub fn coordinates(&self, a: &Ambient) -> ([f64; 2], f64) {
        match self.model.kind {
            ModelKind::RoundSphere2 => {
                let p = [a[0], a[1], a[2]];
                let v = [a[3], a[4], a[5]];
                let x = self.model.sphere_chart(p);
                let (er, et) = self.model.sphere_tangent_frame(x);
                let c = crate::geometry::model::dot(v, er);
                let s = crate::geometry::model::dot(v, et);
                (x, s.atan2(c).rem_euclid(TAU))
            }
            _ => {
                let x = [
                    a[1].atan2(a[0]).rem_euclid(TAU),
                    a[3].atan2(a[2]).rem_euclid(TAU),
                ];
                (x, a[5].atan2(a[4]).rem_euclid(TAU))
            }
        }
    }
}
