//! Analytic limit measures, transport diagnostics and support extraction.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::geometry::closed_form_flow;
use crate::geometry::model::{Ambient, Frame, ModelKind, Vec3};
use crate::microlocal::grid::PhaseGrid;
use crate::microlocal::husimi::LiftEstimate;
use crate::microlocal::sets::{geodesic_from, PhaseSet, PointCloud};
use crate::numeric::pairwise_sum;

/// Samples per parameter direction for analytic oracles.
const ORACLE_SAMPLES: usize = 2048;

fn deposit(grid: &PhaseGrid, pts: impl Iterator<Item = Ambient>) -> Vec<f64> {
    let mut raw = vec![0.0; grid.len()];
    for p in pts {
        if let Some(c) = grid.locate(&p) {
            raw[c] += 1.0;
        }
    }
    raw
}

fn circle_frame(pole: Vec3) -> Frame {
    Frame::from_pole(pole)
}

/// Uniform measure dθ₁dθ₂ on Λ₀ of the grid frame's pole: flow time s and
/// initial direction α, pushed onto the grid (mass outside the window is
/// dropped before normalizing).
pub fn zonal_measure_oracle(grid: &PhaseGrid) -> Result<LiftEstimate> {
    zonal_measure_oracle_at(grid, grid.model.frame.e3)
}

/// Zonal oracle for a pole other than the grid's.
pub fn zonal_measure_oracle_at(grid: &PhaseGrid, pole: Vec3) -> Result<LiftEstimate> {
    if grid.model.kind != ModelKind::RoundSphere2 {
        return Err(LabError::UnsupportedModel(format!(
            "zonal oracle on {}",
            grid.model.name()
        )));
    }
    let f = circle_frame(pole);
    let n = ORACLE_SAMPLES;
    let pts = (0..n).flat_map(move |a| {
        let alpha = TAU * (a as f64 + 0.5) / n as f64;
        let (sa, ca) = alpha.sin_cos();
        let u = [
            ca * f.e1[0] + sa * f.e2[0],
            ca * f.e1[1] + sa * f.e2[1],
            ca * f.e1[2] + sa * f.e2[2],
        ];
        (0..n).map(move |b| geodesic_from(f.e3, u, TAU * (b as f64 + 0.5) / n as f64))
    });
    let raw = deposit(grid, pts);
    LiftEstimate::from_raw(*grid, raw, 0.0, 0.0, "zonal-oracle")
}

/// Arclength measure on the equator of `pole` traversed with X × V = pole.
pub fn scar_measure_oracle(grid: &PhaseGrid, pole: Vec3) -> Result<LiftEstimate> {
    if grid.model.kind != ModelKind::RoundSphere2 {
        return Err(LabError::UnsupportedModel(format!(
            "scar oracle on {}",
            grid.model.name()
        )));
    }
    let f = circle_frame(pole);
    let n = ORACLE_SAMPLES * 16;
    let pts = (0..n).map(|b| geodesic_from(f.e1, f.e2, TAU * (b as f64 + 0.5) / n as f64));
    let raw = deposit(grid, pts);
    LiftEstimate::from_raw(*grid, raw, 0.0, 0.0, "scar-oracle")
}

/// Uniform measure on the invariant torus {ξ = (cos φ₀, sin φ₀)}.
pub fn torus_direction_oracle(grid: &PhaseGrid, angle: f64) -> Result<LiftEstimate> {
    if grid.model.kind != ModelKind::FlatTorus2 {
        return Err(LabError::UnsupportedModel(format!(
            "torus oracle on {}",
            grid.model.name()
        )));
    }
    let n = ORACLE_SAMPLES / 2;
    let pts = (0..n).flat_map(move |a| {
        (0..n).map(move |b| {
            let x = [
                TAU * (a as f64 + 0.5) / n as f64,
                TAU * (b as f64 + 0.5) / n as f64,
            ];
            grid.point(x, angle)
        })
    });
    let raw = deposit(grid, pts);
    LiftEstimate::from_raw(*grid, raw, 0.0, 0.0, "torus-oracle")
}

/// Normalized Liouville measure on the grid window.
pub fn liouville_lift(grid: &PhaseGrid) -> LiftEstimate {
    let raw: Vec<f64> = (0..grid.len()).map(|c| grid.cell_measure(c)).collect();
    LiftEstimate::from_raw(*grid, raw, 0.0, 0.0, "liouville").expect("positive cell measures")
}

/// ½ Σ |a − b|.
pub fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| (x - y).abs()).collect();
    0.5 * pairwise_sum(&d)
}

/// Sub-samples per cell axis used by `push_forward`.
pub const PUSH_SUBSAMPLES: usize = 4;

/// Pushforward of the lift under G_t with nearest-cell redeposit.
///
/// Each cell is split into `sub`³ sub-cells carrying their share of the
/// cell's Liouville measure; sub-cell centres are moved by the exact
/// great-circle (or straight-line) flow. Centres that leave the chart
/// window are snapped to the nearest boundary row so all mass is
/// redeposited. `sub = 1` moves the cell centres only.
pub fn push_forward_with(lift: &LiftEstimate, t: f64, sub: usize) -> Vec<f64> {
    let g = &lift.grid;
    let sub = sub.max(1);
    let sphere = g.model.kind == ModelKind::RoundSphere2;
    let moved: Vec<Vec<(usize, f64)>> = (0..g.len())
        .into_par_iter()
        .filter(|&c| lift.weights[c] > 0.0)
        .map(|c| {
            let (i, j, l) = g.split(c);
            let r_lo = g.lo0 + i as f64 * g.d0();
            let shares: Vec<f64> = (0..sub)
                .map(|a| {
                    if sphere {
                        let a0 = r_lo + a as f64 * g.d0() / sub as f64;
                        let a1 = a0 + g.d0() / sub as f64;
                        (a0.cos() - a1.cos()) / (r_lo.cos() - (r_lo + g.d0()).cos())
                    } else {
                        1.0 / sub as f64
                    }
                })
                .collect();
            let w = lift.weights[c] / (sub * sub) as f64;
            let mut out = Vec::with_capacity(sub * sub * sub);
            for a in 0..sub {
                let x0 = r_lo + (a as f64 + 0.5) * g.d0() / sub as f64;
                for b in 0..sub {
                    let x1 = (j as f64 + (b as f64 + 0.5) / sub as f64) * g.d1();
                    for e in 0..sub {
                        let phi = (l as f64 + (e as f64 + 0.5) / sub as f64) * g.dphi();
                        let p = closed_form_flow(&g.model, &g.point([x0, x1], phi), t);
                        out.push((g.locate_clamped(&p), w * shares[a]));
                    }
                }
            }
            out
        })
        .collect();
    let mut acc = vec![0.0; g.len()];
    for (c, w) in moved.into_iter().flatten() {
        acc[c] += w;
    }
    acc
}

pub fn push_forward(lift: &LiftEstimate, t: f64) -> Vec<f64> {
    push_forward_with(lift, t, PUSH_SUBSAMPLES)
}

/// TV distance between the lift and its pushforward by G_t.
pub fn flow_invariance_defect(lift: &LiftEstimate, t: f64) -> Result<f64> {
    if !(t.abs() <= 5.0) {
        return Err(LabError::InvalidArgument(format!(
            "|t| = {} exceeds 5",
            t.abs()
        )));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    Ok(total_variation(&lift.weights, &push_forward(lift, t)))
}

/// TV distance to normalized Liouville measure on the grid window.
pub fn liouville_deviation(lift: &LiftEstimate) -> f64 {
    total_variation(&lift.weights, &liouville_lift(&lift.grid).weights)
}

/// Sum of weights over cells whose centres lie within `dist_tol` of the set.
pub fn measure_of_set(lift: &LiftEstimate, region: &dyn PhaseSet, dist_tol: f64) -> f64 {
    let g = &lift.grid;
    let picked: Vec<f64> = (0..g.len())
        .into_par_iter()
        .map(|c| {
            let w = lift.weights[c];
            if w > 0.0 && region.within(&g.center(c), dist_tol) {
                w
            } else {
                0.0
            }
        })
        .collect();
    pairwise_sum(&picked)
}

/// Cells of a lift above a fraction τ of the largest weight.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureSupport {
    pub grid: PhaseGrid,
    pub cells: Vec<usize>,
    pub tau: f64,
    pub retained_mass: f64,
    /// 1 − retained_mass.
    pub support_leak: f64,
}

impl MeasureSupport {
    pub fn centers(&self) -> Vec<Ambient> {
        self.cells.iter().map(|&c| self.grid.center(c)).collect()
    }

    /// The retained cell centres as a queryable point set.
    pub fn point_cloud(&self) -> PointCloud {
        let d = self.grid.max_cell_diameter();
        PointCloud::new(self.grid.model, self.centers(), d.max(0.02)).with_resolution(d)
    }
}

pub fn support_threshold(lift: &LiftEstimate, tau: f64) -> Result<MeasureSupport> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(LabError::InvalidArgument(format!(
            "tau = {tau} outside (0, 1)"
        )));
    }
    let cut = tau * lift.max_weight();
    let cells: Vec<usize> = (0..lift.weights.len())
        .filter(|&c| lift.weights[c] > 0.0 && lift.weights[c] >= cut)
        .collect();
    if cells.is_empty() {
        return Err(LabError::EmptySupport(tau));
    }
    let kept: Vec<f64> = cells.iter().map(|&c| lift.weights[c]).collect();
    let retained = pairwise_sum(&kept);
    Ok(MeasureSupport {
        grid: lift.grid,
        cells,
        tau,
        retained_mass: retained,
        support_leak: 1.0 - retained,
    })
}
