//! Flow-out sets Λ_{x,T}, annuli and restricted supports.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::geometry::model::{Ambient, ManifoldModel, ModelKind, PhasePoint};
use crate::geometry::{ambient_distance, flow_samples};
use crate::microlocal::sets::PhaseSet;

/// Integrator tolerance for flow-out samples.
pub const FLOWOUT_TOL: f64 = 1e-8;

/// Samples G_t(x, ξ(α)) on a direction × time lattice.
///
/// Directions α_d = 2πd/ndirs are fiber angles in the model's fiber frame at
/// x; times form the symmetric lattice jΔ, j = −n..n, Δ = T/n. Sample (d, j)
/// is stored at d·ntimes + j.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlowOutSet {
    pub model: ManifoldModel,
    pub x: [f64; 2],
    pub t_max: f64,
    pub dirs: Vec<f64>,
    pub times: Vec<f64>,
    pub samples: Vec<Ambient>,
}

impl FlowOutSet {
    pub fn ndirs(&self) -> usize {
        self.dirs.len()
    }

    pub fn ntimes(&self) -> usize {
        self.times.len()
    }

    pub fn sample(&self, d: usize, j: usize) -> &Ambient {
        &self.samples[d * self.times.len() + j]
    }

    /// Index of the t = 0 row.
    pub fn zero_row(&self) -> usize {
        self.times.len() / 2
    }
}

/// Embedded base point of a chart point; sphere chart points inside the
/// polar margin are accepted (the fiber frame switches to the chart axes).
fn base_ambient(model: &ManifoldModel, x: [f64; 2]) -> Result<Ambient> {
    match model.kind {
        ModelKind::RoundSphere2 => {
            if !(x[0] >= 0.0 && x[0] <= std::f64::consts::PI) {
                return Err(LabError::ChartViolation(format!(
                    "r = {} outside [0, π]",
                    x[0]
                )));
            }
            let p = model.sphere_point(x);
            let probe = [p[0], p[1], p[2], 0.0, 0.0, 0.0];
            Ok(model.with_fiber_angle(&probe, 0.0))
        }
        _ => {
            model.check_chart(x)?;
            Ok(model.embed_unchecked(&PhasePoint::new(x, [1.0, 0.0])))
        }
    }
}

pub fn build_flowout(
    model: &ManifoldModel,
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
    let base = base_ambient(model, x)?;
    let half = ntimes / 2;
    let dt = t_max / half as f64;
    let times: Vec<f64> = (0..=2 * half)
        .map(|j| (j as f64 - half as f64) * dt)
        .collect();
    let dirs: Vec<f64> = (0..ndirs).map(|d| TAU * d as f64 / ndirs as f64).collect();
    let rows: Vec<Vec<Ambient>> = dirs
        .par_iter()
        .map(|&alpha| {
            flow_samples(
                model,
                &model.with_fiber_angle(&base, alpha),
                &times,
                FLOWOUT_TOL,
            )
        })
        .collect::<Result<_>>()?;
    Ok(FlowOutSet {
        model: *model,
        x,
        t_max,
        dirs,
        times,
        samples: rows.concat(),
    })
}

/// Rows of a flow-out with δ₁ ≤ |t| ≤ δ₂.
#[derive(Debug, Clone)]
pub struct Annulus<'a> {
    pub parent: &'a FlowOutSet,
    pub delta1: f64,
    pub delta2: f64,
    /// Parent time indices, ascending.
    pub rows: Vec<usize>,
}

pub fn annulus(fo: &FlowOutSet, delta1: f64, delta2: f64) -> Result<Annulus<'_>> {
    let slack = 1e-12 * fo.t_max;
    if !(delta1 > 0.0 && delta1 < delta2 && delta2 <= fo.t_max + slack) {
        return Err(LabError::BadWindow(format!(
            "need 0 < δ₁ < δ₂ ≤ T, got δ₁ = {delta1}, δ₂ = {delta2}, T = {}",
            fo.t_max
        )));
    }
    let rows: Vec<usize> = (0..fo.ntimes())
        .filter(|&j| {
            let a = fo.times[j].abs();
            a >= delta1 - slack && a <= delta2 + slack
        })
        .collect();
    if rows.is_empty() {
        return Err(LabError::BadWindow(format!(
            "no lattice times in [{delta1}, {delta2}]"
        )));
    }
    Ok(Annulus {
        parent: fo,
        delta1,
        delta2,
        rows,
    })
}

impl<'a> Annulus<'a> {
    pub fn len(&self) -> usize {
        self.rows.len() * self.parent.ndirs()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> Vec<Ambient> {
        let fo = self.parent;
        (0..fo.ndirs())
            .flat_map(|d| self.rows.iter().map(move |&j| *fo.sample(d, j)))
            .collect()
    }

    /// Whether rows r and r + 1 are neighbours in the parent lattice.
    pub(crate) fn adjacent(&self, r: usize) -> bool {
        r + 1 < self.rows.len() && self.rows[r + 1] == self.rows[r] + 1
    }

    /// Largest distance between lattice neighbours in the annulus.
    pub fn sample_spacing(&self) -> f64 {
        let fo = self.parent;
        let nd = fo.ndirs();
        (0..nd)
            .into_par_iter()
            .map(|d| {
                let mut m: f64 = 0.0;
                for r in 0..self.rows.len() {
                    let a = fo.sample(d, self.rows[r]);
                    m = m.max(ambient_distance(
                        &fo.model,
                        a,
                        fo.sample((d + 1) % nd, self.rows[r]),
                    ));
                    if self.adjacent(r) {
                        m = m.max(ambient_distance(
                            &fo.model,
                            a,
                            fo.sample(d, self.rows[r + 1]),
                        ));
                    }
                }
                m
            })
            .reduce(|| 0.0, f64::max)
    }
}

/// Annulus samples near a support set, kept with the lattice structure so
/// the set can be covered as a surface rather than a point cloud.
#[derive(Debug, Clone)]
pub struct RestrictedSupport<'a> {
    pub annulus: &'a Annulus<'a>,
    /// mask[d·rows + r] for direction d and annulus row r.
    pub mask: Vec<bool>,
    pub dist_tol: f64,
}

impl<'a> RestrictedSupport<'a> {
    pub fn count(&self) -> usize {
        self.mask.iter().filter(|m| **m).count()
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }

    pub fn is_set(&self, d: usize, r: usize) -> bool {
        self.mask[d * self.annulus.rows.len() + r]
    }

    pub fn points(&self) -> Vec<Ambient> {
        let fo = self.annulus.parent;
        let nr = self.annulus.rows.len();
        (0..fo.ndirs())
            .flat_map(|d| (0..nr).map(move |r| (d, r)))
            .filter(|&(d, r)| self.is_set(d, r))
            .map(|(d, r)| *fo.sample(d, self.annulus.rows[r]))
            .collect()
    }
}

/// Annulus samples within `dist_tol` of the support.
///
/// `dist_tol` must be at least twice the larger of the support's resolution
/// and the annulus sample spacing.
pub fn restrict_support<'a>(
    support: &dyn PhaseSet,
    ann: &'a Annulus<'a>,
    dist_tol: f64,
) -> Result<RestrictedSupport<'a>> {
    let floor = 2.0 * support.resolution().max(ann.sample_spacing());
    if !(dist_tol >= floor * (1.0 - 1e-9)) {
        return Err(LabError::InvalidArgument(format!(
            "dist_tol {dist_tol} below twice the support/sample resolution ({floor})"
        )));
    }
    Ok(restrict_support_unchecked(support, ann, dist_tol))
}

/// `restrict_support` without the resolution precondition; used when the
/// tolerance is pinned across a sampling-refinement study.
pub fn restrict_support_unchecked<'a>(
    support: &dyn PhaseSet,
    ann: &'a Annulus<'a>,
    dist_tol: f64,
) -> RestrictedSupport<'a> {
    let fo = ann.parent;
    let nr = ann.rows.len();
    let mask: Vec<bool> = (0..fo.ndirs() * nr)
        .into_par_iter()
        .map(|i| support.within(fo.sample(i / nr, ann.rows[i % nr]), dist_tol))
        .collect();
    RestrictedSupport {
        annulus: ann,
        mask,
        dist_tol,
    }
}
