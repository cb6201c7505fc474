//! Tensor-product quadrature grids and L² normalization.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::eigenmodes::families::{Eigenfunction, Family};
use crate::error::{LabError, Result};
use crate::geometry::model::ManifoldModel;
use crate::numeric::{gauss_legendre, pairwise_sum};
use crate::tolerances::QUAD_TOL;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridLayout {
    /// Gauss–Legendre in cos r × uniform θ on S².
    SphereGl,
    /// Uniform r ∈ [0, π] including both poles × uniform θ (for maximization).
    SphereUniform,
    /// Uniform lattice on [0, 2π)².
    TorusLattice,
    /// Midpoint lattice on the square [−half, half]².
    PlaneBox { half: f64 },
    /// Gauss–Legendre in ρ on [0, radius] × uniform θ.
    PlanePolar { radius: f64 },
}

/// Tensor grid: nodes (axis0[i], axis1[j]) with weight w0[i]·w1[j].
#[derive(Debug, Clone)]
pub struct EvalGrid {
    pub model: ManifoldModel,
    pub layout: GridLayout,
    pub axis0: Vec<f64>,
    pub w0: Vec<f64>,
    pub axis1: Vec<f64>,
    pub w1: Vec<f64>,
}

impl EvalGrid {
    pub fn sphere(model: ManifoldModel, n_r: usize, n_theta: usize) -> Self {
        let (x, w) = gauss_legendre(n_r);
        // ascending r means descending cos r
        let axis0: Vec<f64> = x.iter().rev().map(|c| c.acos()).collect();
        let w0: Vec<f64> = w.iter().rev().copied().collect();
        let (axis1, w1) = uniform_periodic(n_theta);
        EvalGrid {
            model,
            layout: GridLayout::SphereGl,
            axis0,
            w0,
            axis1,
            w1,
        }
    }

    /// Uniform lattice in (r, θ) with r_i = iπ/(n_r − 1); weights are the
    /// trapezoid rule in r against sin r.
    pub fn sphere_uniform(model: ManifoldModel, n_r: usize, n_theta: usize) -> Self {
        let n_r = n_r.max(2);
        let d = PI / (n_r - 1) as f64;
        let axis0: Vec<f64> = (0..n_r).map(|i| i as f64 * d).collect();
        let w0 = axis0
            .iter()
            .enumerate()
            .map(|(i, r)| {
                if i == 0 || i == n_r - 1 {
                    0.5 * d * r.sin()
                } else {
                    d * r.sin()
                }
            })
            .collect();
        let (axis1, w1) = uniform_periodic(n_theta);
        EvalGrid {
            model,
            layout: GridLayout::SphereUniform,
            axis0,
            w0,
            axis1,
            w1,
        }
    }

    /// Sphere grid exact for |u|² with u of degree k.
    pub fn sphere_for_degree(model: ManifoldModel, k: usize) -> Self {
        Self::sphere(model, k + 2, 2 * k + 4)
    }

    pub fn torus(n: usize) -> Self {
        let (a, w) = uniform_periodic(n);
        EvalGrid {
            model: ManifoldModel::torus(),
            layout: GridLayout::TorusLattice,
            axis0: a.clone(),
            w0: w.clone(),
            axis1: a,
            w1: w,
        }
    }

    pub fn plane_box(half: f64, n: usize) -> Self {
        let d = 2.0 * half / n as f64;
        let a: Vec<f64> = (0..n).map(|i| -half + (i as f64 + 0.5) * d).collect();
        EvalGrid {
            model: ManifoldModel::plane(),
            layout: GridLayout::PlaneBox { half },
            axis0: a.clone(),
            w0: vec![d; n],
            axis1: a,
            w1: vec![d; n],
        }
    }

    pub fn plane_polar(radius: f64, n_rho: usize, n_theta: usize) -> Self {
        let (x, w) = gauss_legendre(n_rho);
        let axis0: Vec<f64> = x.iter().map(|t| 0.5 * radius * (t + 1.0)).collect();
        let w0: Vec<f64> = axis0
            .iter()
            .zip(&w)
            .map(|(rho, w)| 0.5 * radius * w * rho)
            .collect();
        let (axis1, w1) = uniform_periodic(n_theta);
        EvalGrid {
            model: ManifoldModel::plane(),
            layout: GridLayout::PlanePolar { radius },
            axis0,
            w0,
            axis1,
            w1,
        }
    }

    pub fn len(&self) -> usize {
        self.axis0.len() * self.axis1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Chart point of node (i, j) in the grid model's chart.
    pub fn node(&self, i: usize, j: usize) -> [f64; 2] {
        match self.layout {
            GridLayout::PlanePolar { .. } => {
                let (s, c) = self.axis1[j].sin_cos();
                [self.axis0[i] * c, self.axis0[i] * s]
            }
            _ => [self.axis0[i], self.axis1[j]],
        }
    }

    /// Largest distance between neighbouring nodes along either axis, as
    /// arc length (θ steps on the sphere are bounded by the equator).
    pub fn max_spacing(&self) -> f64 {
        let gap = |a: &[f64]| a.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
        let d1 = gap(&self.axis1)
            .max(2.0 * PI - self.axis1.last().copied().unwrap_or(0.0) + self.axis1[0]);
        match self.layout {
            GridLayout::PlanePolar { radius } => {
                gap(&self.axis0).max(self.axis0[0]).max(radius * d1)
            }
            GridLayout::PlaneBox { .. } => gap(&self.axis0).max(gap(&self.axis1)),
            _ => gap(&self.axis0).max(d1),
        }
    }

    pub fn total_weight(&self) -> f64 {
        pairwise_sum(&self.w0) * pairwise_sum(&self.w1)
    }

    /// Same layout with both axes doubled.
    pub fn refined(&self) -> Self {
        let (n0, n1) = (self.axis0.len() * 2, self.axis1.len() * 2);
        match self.layout {
            GridLayout::SphereGl => EvalGrid::sphere(self.model, n0, n1),
            GridLayout::SphereUniform => EvalGrid::sphere_uniform(self.model, 2 * n0 - 1, n1),
            GridLayout::TorusLattice => EvalGrid::torus(n0),
            GridLayout::PlaneBox { half } => EvalGrid::plane_box(half, n0),
            GridLayout::PlanePolar { radius } => EvalGrid::plane_polar(radius, n0, n1),
        }
    }

    /// |u|² sampled on the grid, row-major (axis0 outer).
    pub fn abs_sq(&self, u: &Eigenfunction) -> Vec<f64> {
        let own_frame = matches!(
            self.layout,
            GridLayout::SphereGl | GridLayout::SphereUniform
        ) && self.model.frame == u.frame;
        let fast_ring = own_frame && matches!(u.family, Family::SphereRandomWave { .. });
        // |u| constant on rings of the function's own chart
        let radial = (own_frame && u.modulus_is_radial())
            || (matches!(self.layout, GridLayout::PlanePolar { .. }) && u.modulus_is_radial());
        let rows: Vec<Vec<f64>> = (0..self.axis0.len())
            .into_par_iter()
            .map(|i| {
                if radial {
                    let v = u.eval_at(&self.model, self.node(i, 0)).norm_sqr();
                    vec![v; self.axis1.len()]
                } else if fast_ring {
                    u.eval_ring(self.axis0[i], self.axis1.len())
                        .iter()
                        .map(|v| v.norm_sqr())
                        .collect()
                } else {
                    (0..self.axis1.len())
                        .map(|j| u.eval_at(&self.model, self.node(i, j)).norm_sqr())
                        .collect()
                }
            })
            .collect();
        rows.concat()
    }

    /// ∫|u|² by the grid rule.
    pub fn norm_sq(&self, u: &Eigenfunction) -> f64 {
        let vals = self.abs_sq(u);
        let n1 = self.axis1.len();
        let rows: Vec<f64> = (0..self.axis0.len())
            .map(|i| {
                let weighted: Vec<f64> = (0..n1).map(|j| vals[i * n1 + j] * self.w1[j]).collect();
                self.w0[i] * pairwise_sum(&weighted)
            })
            .collect();
        pairwise_sum(&rows)
    }
}

fn uniform_periodic(n: usize) -> (Vec<f64>, Vec<f64>) {
    let d = 2.0 * PI / n as f64;
    ((0..n).map(|j| j as f64 * d).collect(), vec![d; n])
}

/// Rescale u to unit L² norm, checking the rule against its refinement.
pub fn l2_normalize(u: &Eigenfunction, grid: &EvalGrid) -> Result<Eigenfunction> {
    if grid.model.kind != u.family.model_kind() {
        return Err(LabError::UnsupportedModel(format!(
            "{} grid for a {} function",
            grid.model.name(),
            u.family.tag()
        )));
    }
    let coarse = grid.norm_sq(u);
    let fine = grid.refined().norm_sq(u);
    if (coarse - fine).abs() > QUAD_TOL * fine.max(f64::MIN_POSITIVE) {
        return Err(LabError::QuadratureTooCoarse((coarse - fine).abs() / fine));
    }
    Ok(u.clone().scaled(1.0 / fine.sqrt()))
}
