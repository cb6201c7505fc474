//! Coherent-state (Husimi) lifts of eigenfunctions onto a PhaseGrid.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigenmodes::{Eigenfunction, Family};
use crate::error::{LabError, Result};
use crate::geometry::model::{add3, scale, ModelKind};
use crate::microlocal::grid::PhaseGrid;
use crate::numeric::pairwise_sum;

/// A probability measure on the cells of a PhaseGrid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LiftEstimate {
    pub grid: PhaseGrid,
    pub weights: Vec<f64>,
    pub h: f64,
    /// Coherent-state width in units of √h (0 for analytic measures).
    pub width: f64,
    pub label: String,
    pub k: Option<usize>,
    pub seed: Option<u64>,
}

impl LiftEstimate {
    /// Normalize nonnegative raw weights into a lift.
    pub fn from_raw(
        grid: PhaseGrid,
        raw: Vec<f64>,
        h: f64,
        width: f64,
        label: &str,
    ) -> Result<Self> {
        if raw.len() != grid.len() {
            return Err(LabError::InvalidArgument(format!(
                "{} weights for {} cells",
                raw.len(),
                grid.len()
            )));
        }
        if raw.iter().any(|w| !(*w >= 0.0)) {
            return Err(LabError::InvalidArgument("negative or NaN weight".into()));
        }
        let total = pairwise_sum(&raw);
        if !(total > 0.0) {
            return Err(LabError::EmptySupport(0.0));
        }
        let weights = raw.into_iter().map(|w| w / total).collect();
        Ok(LiftEstimate {
            grid,
            weights,
            h,
            width,
            label: label.to_string(),
            k: None,
            seed: None,
        })
    }

    pub fn total_mass(&self) -> f64 {
        pairwise_sum(&self.weights)
    }

    pub fn max_weight(&self) -> f64 {
        self.weights.iter().copied().fold(0.0, f64::max)
    }
}

/// Lattice of normal-coordinate offsets y with precomputed phase table.
struct Stencil {
    ys: Vec<[f64; 2]>,
    /// table[l·M + p] = g(y_p)·J(y_p)·s²·e^{−i⟨y_p, ξ_l⟩/h}
    table: Vec<Complex64>,
}

impl Stencil {
    fn new(grid: &PhaseGrid, h: f64, width: f64) -> Stencil {
        let var = width * h;
        let foot = var.sqrt();
        let radius = 5.0 * foot;
        // y-spacing below the Nyquist limit of u·φ̄, whose frequencies reach 2/h + O(1/√(wh))
        let spacing = (TAU / (2.0 / h + 8.0 / foot)).min(0.5 * foot);
        let n = (radius / spacing).ceil() as i64;
        let sphere = grid.model.kind == ModelKind::RoundSphere2;
        let mut ys = Vec::new();
        let mut amp = Vec::new();
        for a in -n..=n {
            for b in -n..=n {
                let y = [a as f64 * spacing, b as f64 * spacing];
                let r2 = y[0] * y[0] + y[1] * y[1];
                if r2 > radius * radius {
                    continue;
                }
                let r = r2.sqrt();
                let jac = if sphere && r > 0.0 { r.sin() / r } else { 1.0 };
                ys.push(y);
                amp.push((-r2 / (2.0 * var)).exp() * jac * spacing * spacing);
            }
        }
        let m = ys.len();
        let mut table = vec![Complex64::new(0.0, 0.0); grid.n_fib * m];
        for l in 0..grid.n_fib {
            let (s, c) = grid.fiber_angle(l).sin_cos();
            for p in 0..m {
                let ph = -(ys[p][0] * c + ys[p][1] * s) / h;
                table[l * m + p] = Complex64::from_polar(amp[p], ph);
            }
        }
        Stencil { ys, table }
    }
}

/// Husimi lift: weight ∝ |⟨u, φ_{x₀,ξ₀}⟩|² × Liouville cell measure, with
/// φ = exp(−|y|²/(2·width·h) + i⟨y, ξ₀⟩/h) in geodesic normal coordinates y
/// at the cell's base centre, weights normalized to sum 1.
pub fn husimi_lift(u: &Eigenfunction, grid: &PhaseGrid, width: f64) -> Result<LiftEstimate> {
    if !(0.5..=2.0).contains(&width) {
        return Err(LabError::InvalidArgument(format!(
            "width {width} outside [0.5, 2]"
        )));
    }
    if grid.model.kind != u.family.model_kind() || grid.model.kind == ModelKind::EuclideanPlane2 {
        return Err(LabError::UnsupportedModel(format!(
            "{} lift on a {} grid",
            u.family.tag(),
            grid.model.name()
        )));
    }
    let h = u.h;
    let foot = (width * h).sqrt();
    if grid.base_cell_size() > 4.0 * foot {
        return Err(LabError::ResolutionMismatch(format!(
            "base cell {:.4} exceeds 4× coherent-state footprint {:.4}",
            grid.base_cell_size(),
            foot
        )));
    }
    let st = Stencil::new(grid, h, width);
    let m = st.ys.len();
    let nf = grid.n_fib;
    let rows: Vec<Vec<f64>> = (0..grid.base_len())
        .into_par_iter()
        .map(|b| {
            let (i, j) = (b / grid.n1, b % grid.n1);
            let x0 = grid.base_center(i, j);
            let vals: Vec<Complex64> = match grid.model.kind {
                ModelKind::RoundSphere2 => {
                    let p0 = grid.model.sphere_point(x0);
                    let (er, et) = grid.model.sphere_tangent_frame(x0);
                    st.ys
                        .iter()
                        .map(|y| {
                            let r = y[0].hypot(y[1]);
                            let p = if r == 0.0 {
                                p0
                            } else {
                                let dir = add3(scale(er, y[0] / r), scale(et, y[1] / r));
                                add3(scale(p0, r.cos()), scale(dir, r.sin()))
                            };
                            u.eval_sphere(p)
                        })
                        .collect()
                }
                _ => st
                    .ys
                    .iter()
                    .map(|y| u.eval_polar(x0[0] + y[0], x0[1] + y[1]))
                    .collect(),
            };
            let area = grid.base_area(i) * grid.dphi();
            (0..nf)
                .map(|l| {
                    let row = &st.table[l * m..(l + 1) * m];
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (t, v) in row.iter().zip(&vals) {
                        acc += t * v;
                    }
                    acc.norm_sqr() * area
                })
                .collect()
        })
        .collect();
    let mut lift = LiftEstimate::from_raw(*grid, rows.concat(), h, width, u.family.tag())?;
    lift.k = u.family.degree();
    if let Family::SphereRandomWave { seed, .. } = u.family {
        lift.seed = Some(seed);
    }
    Ok(lift)
}
