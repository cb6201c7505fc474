//! The microlocalized bound: h^{1/2}·sup of u near x against the square
//! root of the H² proxy of the lift support restricted to A_x(δ/2, 3δ), and
//! the consistency verdict between growth fits and admissibility.

use serde::{Deserialize, Serialize};

use crate::bounds::sogge::{BoundReport, REFINE_TOL};
use crate::bounds::sup::{sup_in_ball, ScalingFit};
use crate::eigenmodes::{Eigenfunction, Family};
use crate::error::{LabError, Result};
use crate::flowout::{
    annulus, build_flowout, hausdorff_proxy, restrict_support, Admissibility, CoverReport,
};
use crate::geometry::model::{cross, norm, Frame, ManifoldModel, ModelKind};
use crate::microlocal::grid::{DEFAULT_CELLS, DEFAULT_POLE_MARGIN};
use crate::microlocal::{husimi_lift, support_threshold, LiftEstimate, PhaseGrid};
use crate::numeric::fit_line;
use crate::tolerances::{DEFAULT_LADDER, DEFAULT_PROXY_CUTOFF, DEFAULT_TAU, EXPONENT_MARGIN};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftParams {
    pub width: f64,
    pub tau: f64,
    /// Base cells per axis and fiber cells of the PhaseGrid.
    pub cells: usize,
    pub fiber_cells: usize,
}

impl Default for LiftParams {
    fn default() -> Self {
        LiftParams {
            width: 1.0,
            tau: DEFAULT_TAU,
            cells: DEFAULT_CELLS,
            fiber_cells: DEFAULT_CELLS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverParams {
    pub ndirs: usize,
    pub ntimes: usize,
    /// None: twice the larger of the support resolution and the annulus spacing.
    pub dist_tol: Option<f64>,
    pub scales: Vec<f64>,
    pub cutoff: f64,
}

impl Default for CoverParams {
    fn default() -> Self {
        CoverParams {
            ndirs: 512,
            ntimes: 513,
            dist_tol: None,
            scales: DEFAULT_LADDER.to_vec(),
            cutoff: DEFAULT_PROXY_CUTOFF,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelatedReport {
    pub family: String,
    pub x: [f64; 2],
    pub delta: f64,
    /// One row per family member: lhs_k, the shared rhs and ratio_k.
    pub rows: Vec<BoundReport>,
    /// Slope of log lhs_k against log λ_k.
    pub lhs_trend: f64,
    pub lhs_decreasing: bool,
    pub rhs: f64,
    /// Finest-scale H² proxy of the restricted support.
    pub proxy: f64,
    pub below_cutoff: bool,
    /// Degree (or |k|) of the member whose lift defines the support.
    pub lift_lambda: f64,
    pub lift: LiftParams,
    pub support_cells: usize,
    pub retained_mass: f64,
    pub dist_tol: f64,
    pub restricted_samples: usize,
    pub cover: CoverReport,
}

/// PhaseGrid whose window contains x: on the sphere its chart equator
/// passes through x, on the torus it is the standard lattice.
fn grid_through(model_kind: ModelKind, x: [f64; 2], lift: &LiftParams) -> Result<PhaseGrid> {
    match model_kind {
        ModelKind::RoundSphere2 => {
            let p = ManifoldModel::sphere().sphere_point(x);
            let helper = if p[2].abs() < 0.9 {
                [0.0, 0.0, 1.0]
            } else {
                [1.0, 0.0, 0.0]
            };
            let n = cross(p, helper);
            let pole = [n[0] / norm(n), n[1] / norm(n), n[2] / norm(n)];
            PhaseGrid::sphere(
                Frame::from_pole_and_hint(pole, p),
                lift.cells,
                lift.cells,
                lift.fiber_cells,
                DEFAULT_POLE_MARGIN,
            )
        }
        ModelKind::FlatTorus2 => PhaseGrid::torus(lift.cells, lift.fiber_cells),
        ModelKind::EuclideanPlane2 => Err(LabError::UnsupportedModel(
            "related bound on the plane".into(),
        )),
    }
}

/// lhs_k = h_k^{1/2} sup_{B(x, λ_k^{-1/2})} |u_k| for each member; rhs is the
/// square root of the finest-scale H² proxy of the Husimi support of the
/// highest member (τ-thresholded) restricted to A_x(δ/2, 3δ).
pub fn check_related(
    family: &[Eigenfunction],
    x: [f64; 2],
    delta: f64,
    lift: &LiftParams,
    cover: &CoverParams,
) -> Result<RelatedReport> {
    check_related_with_lift(family, x, delta, lift, cover).map(|(r, _)| r)
}

/// `check_related` that also hands back the Husimi lift of the top member.
pub fn check_related_with_lift(
    family: &[Eigenfunction],
    x: [f64; 2],
    delta: f64,
    lift: &LiftParams,
    cover: &CoverParams,
) -> Result<(RelatedReport, LiftEstimate)> {
    if family.len() < 3 {
        return Err(LabError::InsufficientSamples(format!(
            "{} members, need ≥ 3",
            family.len()
        )));
    }
    if family.windows(2).any(|w| !(w[1].lambda > w[0].lambda)) {
        return Err(LabError::InvalidArgument("family λ must increase".into()));
    }
    if family
        .iter()
        .any(|u| u.family.tag() != family[0].family.tag())
    {
        return Err(LabError::InvalidArgument("mixed families".into()));
    }
    if !(0.1..=0.5).contains(&delta) {
        return Err(LabError::BadWindow(format!(
            "δ = {delta} outside [0.1, 0.5]"
        )));
    }
    let top = family.last().unwrap();
    let kind = top.family.model_kind();
    let model = match kind {
        ModelKind::RoundSphere2 => ManifoldModel::sphere(),
        ModelKind::FlatTorus2 => ManifoldModel::torus(),
        ModelKind::EuclideanPlane2 => {
            return Err(LabError::UnsupportedModel(
                "related bound on the plane".into(),
            ))
        }
    };

    let grid = grid_through(kind, x, lift)?;
    let est = husimi_lift(top, &grid, lift.width)?;
    let support = support_threshold(&est, lift.tau)?;
    let cloud = support.point_cloud();
    let fo = build_flowout(&model, x, 3.0 * delta, cover.ndirs, cover.ntimes)?;
    let ann = annulus(&fo, 0.5 * delta, 3.0 * delta)?;
    let tol = match cover.dist_tol {
        Some(t) => t,
        None => 2.0 * crate::microlocal::PhaseSet::resolution(&cloud).max(ann.sample_spacing()),
    };
    let restricted = restrict_support(&cloud, &ann, tol)?;
    let report = hausdorff_proxy(&restricted, &cover.scales, 2)?;
    let proxy = report.smallest_proxy();
    let rhs = proxy.sqrt();

    let mut rows = Vec::with_capacity(family.len());
    for u in family {
        let rho = u.lambda.powf(-0.5);
        let (s, at) = sup_in_ball(u, x, rho, REFINE_TOL)?;
        let lhs = u.h.sqrt() * s;
        rows.push(BoundReport {
            bound: "related".into(),
            family: u.family.tag().into(),
            k: u.family.degree(),
            seed: match u.family {
                Family::SphereRandomWave { seed, .. } => Some(seed),
                _ => None,
            },
            lambda: u.lambda,
            h: u.h,
            x,
            delta,
            lhs,
            rhs,
            ratio: BoundReport::ratio_of(lhs, rhs),
            witness: at,
            tau: Some(lift.tau),
            grid_dims: Some([grid.n0, grid.n1, grid.n_fib]),
        });
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.lambda.ln()).collect();
    let ys: Vec<f64> = rows
        .iter()
        .map(|r| r.lhs.max(f64::MIN_POSITIVE).ln())
        .collect();
    let lhs_trend = fit_line(&xs, &ys).slope;
    let lhs_decreasing = rows.windows(2).all(|w| w[1].lhs < w[0].lhs);
    let report = RelatedReport {
        family: top.family.tag().into(),
        x,
        delta,
        rows,
        lhs_trend,
        lhs_decreasing,
        rhs,
        proxy,
        below_cutoff: proxy < cover.cutoff,
        lift_lambda: top.lambda,
        lift: lift.clone(),
        support_cells: support.cells.len(),
        retained_mass: support.retained_mass,
        dist_tol: tol,
        restricted_samples: restricted.count(),
        cover: report,
    };
    Ok((report, est))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Consistency {
    Consistent,
    Violation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremVerdict {
    pub family: String,
    pub exponent: f64,
    pub margin: f64,
    pub admissible_everywhere: bool,
    pub verdict: Consistency,
}

/// Violation only when every tested point is Admissible and the fitted
/// exponent still reaches 1/2 − margin.
pub fn theorem_verdict(
    family: &str,
    fit: &ScalingFit,
    verdicts: &[Admissibility],
) -> TheoremVerdict {
    let admissible_everywhere =
        !verdicts.is_empty() && verdicts.iter().all(|v| *v == Admissibility::Admissible);
    let improved = fit.exponent < 0.5 - EXPONENT_MARGIN;
    let verdict = if admissible_everywhere && !improved {
        Consistency::Violation
    } else {
        Consistency::Consistent
    };
    TheoremVerdict {
        family: family.into(),
        exponent: fit.exponent,
        margin: EXPONENT_MARGIN,
        admissible_everywhere,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fit(e: f64) -> ScalingFit {
        ScalingFit {
            family: "f".into(),
            exponent: e,
            constant: 1.0,
            r2: 1.0,
            lambda_min: 1.0,
            lambda_max: 10.0,
            n_samples: 5,
        }
    }

    #[test]
    fn verdict_table() {
        use Admissibility::*;
        assert_eq!(
            theorem_verdict("hw", &fit(0.25), &[Admissible, Admissible]).verdict,
            Consistency::Consistent
        );
        assert_eq!(
            theorem_verdict("zonal", &fit(0.5), &[NotAdmissible, Admissible]).verdict,
            Consistency::Consistent
        );
        assert_eq!(
            theorem_verdict("bug", &fit(0.46), &[Admissible]).verdict,
            Consistency::Violation
        );
        assert_eq!(
            theorem_verdict("x", &fit(0.5), &[Inconclusive]).verdict,
            Consistency::Consistent
        );
        assert_eq!(
            theorem_verdict("x", &fit(0.5), &[]).verdict,
            Consistency::Consistent
        );
    }

    #[test]
    fn preconditions() {
        let fam: Vec<_> = [10usize, 20]
            .iter()
            .map(|&k| Eigenfunction::zonal(k))
            .collect();
        assert!(matches!(
            check_related(
                &fam,
                [0.0, 0.0],
                0.3,
                &LiftParams::default(),
                &CoverParams::default()
            ),
            Err(LabError::InsufficientSamples(_))
        ));
        let fam: Vec<_> = [10usize, 20, 30]
            .iter()
            .map(|&k| Eigenfunction::zonal(k))
            .collect();
        assert!(matches!(
            check_related(
                &fam,
                [0.0, 0.0],
                0.05,
                &LiftParams::default(),
                &CoverParams::default()
            ),
            Err(LabError::BadWindow(_))
        ));
    }

    #[test]
    fn scar_off_the_equator_has_vanishing_sides() {
        let fam: Vec<_> = [50usize, 100, 200]
            .iter()
            .map(|&k| Eigenfunction::highest_weight(k))
            .collect();
        let r = check_related(
            &fam,
            [std::f64::consts::FRAC_PI_2 - 0.8, 0.0],
            0.3,
            &LiftParams::default(),
            &CoverParams::default(),
        )
        .unwrap();
        assert!(
            r.lhs_decreasing,
            "{:?}",
            r.rows.iter().map(|b| b.lhs).collect::<Vec<_>>()
        );
        assert!(r.below_cutoff, "proxy {}", r.proxy);
        assert!(r.rows.last().unwrap().lhs < 1e-3);
    }

    #[test]
    fn zonal_at_the_pole_saturates() {
        let fam: Vec<_> = [50usize, 100, 200]
            .iter()
            .map(|&k| Eigenfunction::zonal(k))
            .collect();
        let r = check_related(
            &fam,
            [0.0, 0.0],
            0.3,
            &LiftParams::default(),
            &CoverParams::default(),
        )
        .unwrap();
        let limit = (2.0 * std::f64::consts::PI).sqrt().recip();
        for row in &r.rows {
            // √((2k+1)/4π)·(k(k+1))^{-1/4} → 1/√(2π)
            let k = row.k.unwrap() as f64;
            let exact = ((2.0 * k + 1.0) / (4.0 * std::f64::consts::PI)).sqrt()
                * (k * (k + 1.0)).powf(-0.25);
            assert!((row.lhs - exact).abs() < 1e-9, "{} vs {exact}", row.lhs);
            assert!((row.lhs - limit).abs() < 0.01);
        }
        assert!(!r.below_cutoff && r.rhs > 0.5, "proxy {}", r.proxy);
    }
}
