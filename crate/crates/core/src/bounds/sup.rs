//! Sup norms with local refinement, and growth-exponent fits.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigenmodes::{Eigenfunction, EvalGrid, Family, GridLayout};
use crate::error::{LabError, Result};
use crate::geometry::model::{add3, scale, ManifoldModel, ModelKind};
use crate::numeric::fit_line;

/// Largest bisection depth of the local refinement.
const MAX_REFINE_STEPS: usize = 48;
/// Refinement always halves at least this many times.
const MIN_REFINE_STEPS: usize = 4;
/// Refinement may drift at most this many coarse cells from the coarse argmax.
const MAX_DRIFT_CELLS: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingSample {
    pub family: String,
    pub k: Option<usize>,
    pub seed: Option<u64>,
    pub lambda: f64,
    pub h: f64,
    pub sup_value: f64,
    /// Chart point of the maximum in the grid's chart.
    pub argmax: [f64; 2],
    pub coarse_value: f64,
    pub coarse_spacing: f64,
    pub refine_steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub family: String,
    /// Slope of log sup against log λ.
    pub exponent: f64,
    /// e^{intercept}.
    pub constant: f64,
    pub r2: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub n_samples: usize,
}

fn seed_of(u: &Eigenfunction) -> Option<u64> {
    match u.family {
        Family::SphereRandomWave { seed, .. } => Some(seed),
        _ => None,
    }
}

/// Coarse grid for `sup_norm` with spacing at most h/4, in the function's
/// own chart.
pub fn sup_grid(u: &Eigenfunction) -> EvalGrid {
    let step = 0.25 * u.h;
    match u.family.model_kind() {
        ModelKind::RoundSphere2 => {
            let n_r = (PI / step).ceil() as usize + 1;
            let n_t = (TAU / step).ceil() as usize;
            EvalGrid::sphere_uniform(u.model(), n_r, n_t)
        }
        ModelKind::FlatTorus2 => EvalGrid::torus((TAU / step).ceil() as usize),
        ModelKind::EuclideanPlane2 => {
            // polar grid out to 2.5 (the allowed disc at E = 1 has radius 1);
            // Gauss–Legendre gaps in ρ are at most ≈ πR/(2n)
            let radius = 2.5;
            let n_rho = (2.0 * PI * radius / (4.0 * step)).ceil() as usize + 8;
            let n_t = (TAU * radius / step).ceil() as usize;
            EvalGrid::plane_polar(radius, n_rho, n_t)
        }
    }
}

/// |u| is constant along θ-rows (radial) or everywhere (constant) in the
/// grid's chart; the coarse scan visits one representative per orbit.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Symmetry {
    None,
    Radial,
    Constant,
}

fn symmetry(u: &Eigenfunction, grid: &EvalGrid) -> Symmetry {
    match (u.family, grid.layout) {
        (Family::TorusWave { .. }, _) => Symmetry::Constant,
        (_, GridLayout::SphereGl | GridLayout::SphereUniform)
            if grid.model.frame == u.frame && u.modulus_is_radial() =>
        {
            Symmetry::Radial
        }
        (Family::OscillatorMode { .. }, GridLayout::PlanePolar { .. }) => Symmetry::Radial,
        _ => Symmetry::None,
    }
}

fn chart_abs(u: &Eigenfunction, model: &ManifoldModel, x: [f64; 2]) -> f64 {
    match model.kind {
        ModelKind::RoundSphere2 => u.eval_sphere(model.sphere_point(x)).norm(),
        ModelKind::FlatTorus2 => u
            .eval_polar(x[0].rem_euclid(TAU), x[1].rem_euclid(TAU))
            .norm(),
        ModelKind::EuclideanPlane2 => u.eval_polar(x[0], x[1]).norm(),
    }
}

/// ‖u‖_∞ from a coarse grid scan plus local bisection refinement of the
/// argmax. For sphere families the poles of the function's own chart are
/// always candidates.
pub fn sup_norm(u: &Eigenfunction, grid: &EvalGrid, refine_tol: f64) -> Result<ScalingSample> {
    if grid.model.kind != u.family.model_kind() {
        return Err(LabError::UnsupportedModel(format!(
            "{} grid for a {} function",
            grid.model.name(),
            u.family.tag()
        )));
    }
    if !(refine_tol > 0.0) {
        return Err(LabError::InvalidArgument(format!(
            "refine_tol = {refine_tol}"
        )));
    }
    let spacing = grid.max_spacing();
    if spacing > 0.25 * u.h * (1.0 + 1e-9) {
        return Err(LabError::Underresolved(format!(
            "grid spacing {spacing:.3e} above h/4 = {:.3e}",
            0.25 * u.h
        )));
    }
    let sym = symmetry(u, grid);
    let (n0, n1) = (grid.axis0.len(), grid.axis1.len());
    let cols = match sym {
        Symmetry::None => n1,
        _ => 1,
    };
    let rows = if sym == Symmetry::Constant { 1 } else { n0 };
    let ring = grid.layout != GridLayout::TorusLattice
        && matches!(u.family, Family::SphereRandomWave { .. })
        && grid.model.frame == u.frame
        && cols == n1;
    let (coarse, ci, cj) = (0..rows)
        .into_par_iter()
        .map(|i| {
            if ring {
                let vals = u.eval_ring(grid.axis0[i], n1);
                let (j, v) = vals
                    .iter()
                    .enumerate()
                    .map(|(j, v)| (j, v.norm()))
                    .fold((0, -1.0), |a, b| if b.1 > a.1 { b } else { a });
                (v, i, j)
            } else {
                let (j, v) = (0..cols)
                    .map(|j| (j, chart_abs(u, &grid.model, grid.node(i, j))))
                    .fold((0, -1.0), |a, b| if b.1 > a.1 { b } else { a });
                (v, i, j)
            }
        })
        .reduce(|| (-1.0, 0, 0), |a, b| if b.0 > a.0 { b } else { a });

    let mut best = grid.node(ci, cj);
    let mut best_v = coarse;
    if grid.model.kind == ModelKind::RoundSphere2 {
        for q in [u.pole(), scale(u.pole(), -1.0)] {
            let v = u.eval_sphere(q).norm();
            if v > best_v {
                best_v = v;
                best = grid.model.sphere_chart(q);
            }
        }
    }
    let coarse_value = best_v;
    let (d0, mut d1) = cell_steps(grid, ci);
    if sym == Symmetry::Radial {
        // the ridge of a radial modulus is a whole circle; climb along the
        // radial axis only (θ = 0 on plane grids)
        d1 = 0.0;
    }
    let (value, arg, steps) = refine(u, &grid.model, best, best_v, d0, d1, refine_tol, None)?;
    Ok(ScalingSample {
        family: u.family.tag().to_string(),
        k: u.family.degree(),
        seed: seed_of(u),
        lambda: u.lambda,
        h: u.h,
        sup_value: value,
        argmax: arg,
        coarse_value,
        coarse_spacing: spacing,
        refine_steps: steps,
    })
}

fn cell_steps(grid: &EvalGrid, i: usize) -> (f64, f64) {
    let n0 = grid.axis0.len();
    let d0 = if n0 > 1 {
        let j = i.min(n0 - 2);
        grid.axis0[j + 1] - grid.axis0[j]
    } else {
        grid.max_spacing()
    };
    let d1 = if grid.axis1.len() > 1 {
        grid.axis1[1] - grid.axis1[0]
    } else {
        grid.max_spacing()
    };
    match grid.layout {
        GridLayout::PlanePolar { .. } => (grid.max_spacing(), grid.max_spacing()),
        _ => (d0, d1),
    }
}

/// Bisection hill-climb on a 3 × 3 stencil. `ball` restricts candidates to
/// {|y| ≤ ρ} for a caller-supplied map y ↦ chart point (used by
/// `sup_in_ball`); otherwise the stencil moves in the chart directly.
#[allow(clippy::too_many_arguments)]
fn refine(
    u: &Eigenfunction,
    model: &ManifoldModel,
    start: [f64; 2],
    start_v: f64,
    d0: f64,
    d1: f64,
    tol: f64,
    ball: Option<(&dyn Fn([f64; 2]) -> [f64; 2], f64)>,
) -> Result<(f64, [f64; 2], usize)> {
    let eval = |y: [f64; 2]| -> Option<f64> {
        match ball {
            Some((map, rho)) => {
                if y[0].hypot(y[1]) > rho {
                    None
                } else {
                    Some(chart_abs(u, model, map(y)))
                }
            }
            None => {
                let mut x = y;
                if model.kind == ModelKind::RoundSphere2 {
                    x[0] = x[0].clamp(0.0, PI);
                }
                Some(chart_abs(u, model, x))
            }
        }
    };
    let (mut p, mut v) = (start, start_v);
    let (mut s0, mut s1) = (d0, d1);
    let mut steps = 0;
    while steps < MAX_REFINE_STEPS {
        s0 *= 0.5;
        s1 *= 0.5;
        steps += 1;
        let mut gain = 0.0;
        // climb at this step size until no neighbour improves
        loop {
            let mut moved = false;
            for a in -1..=1 {
                for b in -1..=1 {
                    if a == 0 && b == 0 {
                        continue;
                    }
                    let q = [p[0] + a as f64 * s0, p[1] + b as f64 * s1];
                    if let Some(w) = eval(q) {
                        if w > v {
                            gain += w - v;
                            v = w;
                            p = q;
                            moved = true;
                        }
                    }
                }
            }
            // a constrained maximum may slide along the ball boundary
            if ball.is_none()
                && ((p[0] - start[0]).abs() > MAX_DRIFT_CELLS * d0
                    || (p[1] - start[1]).abs() > MAX_DRIFT_CELLS * d1)
            {
                return Err(LabError::Underresolved(format!(
                    "refined argmax moved more than {MAX_DRIFT_CELLS} coarse cells from {start:?}"
                )));
            }
            if !moved {
                break;
            }
        }
        // for a smooth peak within s/2 of p the shortfall is at most a
        // quarter of the drop to the axis neighbours
        let mut drop: f64 = 0.0;
        for (a, b) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
            if b != 0.0 && s1 == 0.0 {
                continue;
            }
            if let Some(w) = eval([p[0] + a * s0, p[1] + b * s1]) {
                drop = drop.max(v - w);
            }
        }
        if steps >= MIN_REFINE_STEPS && gain < tol && drop < 4.0 * tol {
            break;
        }
    }
    let p = match ball {
        Some((map, _)) => map(p),
        None => {
            let mut x = p;
            if model.kind == ModelKind::RoundSphere2 {
                x[0] = x[0].clamp(0.0, PI);
            }
            x
        }
    };
    Ok((v, p, steps))
}

/// max |u| over the geodesic ball B(x, ρ), x a chart point of the
/// standard chart (sphere) or [0, 2π)² (torus). Scans normal coordinates
/// at spacing ≤ h/4, then refines inside the ball.
pub fn sup_in_ball(
    u: &Eigenfunction,
    x: [f64; 2],
    rho: f64,
    refine_tol: f64,
) -> Result<(f64, [f64; 2])> {
    if !(rho > 0.0) {
        return Err(LabError::InvalidArgument(format!("ball radius {rho}")));
    }
    let kind = u.family.model_kind();
    let model = match kind {
        ModelKind::RoundSphere2 => ManifoldModel::sphere(),
        ModelKind::FlatTorus2 => ManifoldModel::torus(),
        ModelKind::EuclideanPlane2 => ManifoldModel::plane(),
    };
    let (p0, e1, e2) = if kind == ModelKind::RoundSphere2 {
        let p0 = model.sphere_point(x);
        // tangent basis that stays defined at the poles of the chart
        let f = crate::geometry::Frame::from_pole(p0);
        (p0, f.e1, f.e2)
    } else {
        ([0.0; 3], [0.0; 3], [0.0; 3])
    };
    let map = move |y: [f64; 2]| -> [f64; 2] {
        if kind == ModelKind::RoundSphere2 {
            let r = y[0].hypot(y[1]);
            let q = if r == 0.0 {
                p0
            } else {
                let dir = add3(scale(e1, y[0] / r), scale(e2, y[1] / r));
                add3(scale(p0, r.cos()), scale(dir, r.sin()))
            };
            model.sphere_chart(q)
        } else {
            [x[0] + y[0], x[1] + y[1]]
        }
    };
    let step = (0.25 * u.h).min(rho);
    let n = (rho / step).ceil() as i64;
    let mut ys: Vec<[f64; 2]> = (-n..=n)
        .flat_map(|a| (-n..=n).map(move |b| [a as f64 * step, b as f64 * step]))
        .filter(|y| y[0].hypot(y[1]) <= rho)
        .collect();
    let nb = (TAU * rho / step).ceil() as usize;
    ys.extend((0..nb).map(|i| {
        let (s, c) = (TAU * i as f64 / nb as f64).sin_cos();
        [rho * c * (1.0 - 1e-12), rho * s * (1.0 - 1e-12)]
    }));
    let (y0, v0) = ys
        .par_iter()
        .map(|y| (*y, chart_abs(u, &model, map(*y))))
        .reduce(|| ([0.0, 0.0], -1.0), |a, b| if b.1 > a.1 { b } else { a });
    let (v, arg, _) = refine(u, &model, y0, v0, step, step, refine_tol, Some((&map, rho)))?;
    Ok((v, arg))
}

/// Least-squares fit of log sup against log λ.
pub fn fit_growth(samples: &[ScalingSample]) -> Result<ScalingFit> {
    if samples.len() < 5 {
        return Err(LabError::InsufficientSamples(format!(
            "{} samples, need ≥ 5",
            samples.len()
        )));
    }
    let lmin = samples
        .iter()
        .map(|s| s.lambda)
        .fold(f64::INFINITY, f64::min);
    let lmax = samples.iter().map(|s| s.lambda).fold(0.0, f64::max);
    if !(lmax >= 4.0 * lmin) {
        return Err(LabError::InsufficientSamples(format!(
            "λ spans {lmin}..{lmax}, need a factor ≥ 4"
        )));
    }
    if samples.iter().any(|s| !(s.sup_value > 0.0)) {
        return Err(LabError::InvalidArgument("nonpositive sup value".into()));
    }
    let xs: Vec<f64> = samples.iter().map(|s| s.lambda.ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.sup_value.ln()).collect();
    let f = fit_line(&xs, &ys);
    Ok(ScalingFit {
        family: samples[0].family.clone(),
        exponent: f.slope,
        constant: f.intercept.exp(),
        r2: f.r2,
        lambda_min: lmin,
        lambda_max: lmax,
        n_samples: samples.len(),
    })
}

/// Scaling samples for a ladder of eigenfunctions on their default grids.
pub fn scaling_samples(family: &[Eigenfunction], refine_tol: f64) -> Result<Vec<ScalingSample>> {
    family
        .iter()
        .map(|u| sup_norm(u, &sup_grid(u), refine_tol))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigenmodes::legendre::eval_zonal_legendre;
    use proptest::prelude::*;

    const TOL: f64 = 1e-10;

    #[test]
    fn torus_wave_sup_is_constant_modulus() {
        let u = Eigenfunction::torus_wave([7, -3]).unwrap();
        let s = sup_norm(&u, &sup_grid(&u), TOL).unwrap();
        assert!((s.sup_value - 1.0 / TAU).abs() < 1e-14);
    }

    #[test]
    fn zonal_sup_is_the_pole_value() {
        for k in [25usize, 100, 400] {
            let u = Eigenfunction::zonal(k);
            let s = sup_norm(&u, &sup_grid(&u), TOL).unwrap();
            let oracle = eval_zonal_legendre(k, 0.0);
            assert!(
                (s.sup_value - oracle).abs() < 1e-10,
                "k={k}: {} vs {oracle}",
                s.sup_value
            );
            let exact = ((2 * k + 1) as f64 / (4.0 * PI)).sqrt();
            assert!((s.sup_value - exact).abs() < 1e-8);
            assert!(s.argmax[0] < 1e-12 || s.argmax[0] > PI - 1e-12);
        }
        // √(201/4π)
        assert!((eval_zonal_legendre(100, 0.0) - 3.999384).abs() < 1e-6);
    }

    #[test]
    fn zonal_pole_found_in_a_rotated_grid() {
        let u = Eigenfunction::zonal(60);
        let g = EvalGrid::sphere_uniform(
            ManifoldModel::sphere_with_frame(crate::geometry::Frame::from_pole([1.0, 0.0, 0.0])),
            801,
            1600,
        );
        let s = sup_norm(&u, &g, TOL).unwrap();
        assert!((s.sup_value - eval_zonal_legendre(60, 0.0)).abs() < 1e-10);
    }

    #[test]
    fn highest_weight_peaks_on_the_equator() {
        let u = Eigenfunction::highest_weight(100);
        let s = sup_norm(&u, &sup_grid(&u), TOL).unwrap();
        assert!((s.argmax[0] - PI / 2.0).abs() < 1e-6, "{:?}", s.argmax);
        let exact = u.eval_polar(PI / 2.0, 0.0).norm();
        assert!((s.sup_value - exact).abs() < 1e-10);
    }

    #[test]
    fn random_wave_refinement_is_bounded_by_lipschitz() {
        for seed in [1u64, 2] {
            let u = Eigenfunction::random_wave(40, seed).unwrap();
            let g = sup_grid(&u);
            let s = sup_norm(&u, &g, TOL).unwrap();
            assert!(s.sup_value >= s.coarse_value);
            // |∇u| ≤ λ‖u‖_∞ and the argmax is within half a cell diagonal
            assert!(s.sup_value - s.coarse_value <= u.lambda * g.max_spacing() * s.sup_value);
            let direct = u.eval_polar(s.argmax[0], s.argmax[1]).norm();
            assert!((direct - s.sup_value).abs() < 1e-9);
        }
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let u = Eigenfunction::random_wave(40, 1).unwrap();
        let g = EvalGrid::sphere_uniform(u.model(), 100, 200);
        assert!(matches!(
            sup_norm(&u, &g, TOL),
            Err(LabError::Underresolved(_))
        ));
    }

    #[test]
    fn zonal_sup_in_small_ball_at_the_pole() {
        let u = Eigenfunction::zonal(200);
        let (v, _) = sup_in_ball(&u, [0.0, 0.0], u.lambda.powf(-0.5), TOL).unwrap();
        assert!((v - eval_zonal_legendre(200, 0.0)).abs() < 1e-10);
        // a ball away from the pole misses the peak
        let (w, _) = sup_in_ball(&u, [1.0, 0.0], 0.05, TOL).unwrap();
        assert!(w < 0.3 * v);
        let (m, _) = sup_in_ball(&u.clone().scaled(-1.0), [1.0, 0.0], 0.05, TOL).unwrap();
        assert_eq!(m, w);
    }

    #[test]
    fn fit_needs_five_samples_over_a_factor_four() {
        let mk = |l: f64| ScalingSample {
            family: "x".into(),
            k: None,
            seed: None,
            lambda: l,
            h: 1.0 / l,
            sup_value: l.sqrt(),
            argmax: [0.0, 0.0],
            coarse_value: l.sqrt(),
            coarse_spacing: 0.0,
            refine_steps: 0,
        };
        let few: Vec<_> = [1.0, 2.0, 4.0, 8.0].iter().map(|&l| mk(l)).collect();
        assert!(matches!(
            fit_growth(&few),
            Err(LabError::InsufficientSamples(_))
        ));
        let narrow: Vec<_> = [1.0, 1.5, 2.0, 2.5, 3.0].iter().map(|&l| mk(l)).collect();
        assert!(matches!(
            fit_growth(&narrow),
            Err(LabError::InsufficientSamples(_))
        ));
    }

    proptest! {
        #[test]
        fn fit_is_exact_on_power_laws(a in -1.0f64..1.0, c in 0.1f64..10.0, l0 in 1.0f64..50.0) {
            let samples: Vec<ScalingSample> = (0..6)
                .map(|i| {
                    let l = l0 * 1.5f64.powi(i);
                    ScalingSample {
                        family: "synthetic".into(),
                        k: None,
                        seed: None,
                        lambda: l,
                        h: 1.0 / l,
                        sup_value: c * l.powf(a),
                        argmax: [0.0, 0.0],
                        coarse_value: 0.0,
                        coarse_spacing: 0.0,
                        refine_steps: 0,
                    }
                })
                .collect();
            let f = fit_growth(&samples).unwrap();
            prop_assert!((f.exponent - a).abs() < 1e-10);
            prop_assert!((f.constant - c).abs() < 1e-9 * c);
        }
    }
}
