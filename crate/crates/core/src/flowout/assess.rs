//! Admissibility at a point: flow-out, restriction, covering and the
//! sample-doubling consistency check in one call.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::flowout::cover::{
    admissibility_verdict, hausdorff_proxy, proxy_drift, AdmissibilityVerdict, CoverReport,
};
use crate::flowout::set::{
    annulus, build_flowout, restrict_support, restrict_support_unchecked, FlowOutSet,
};
use crate::geometry::model::ManifoldModel;
use crate::microlocal::sets::PhaseSet;
use crate::tolerances::{DEFAULT_LADDER, DEFAULT_PROXY_CUTOFF};

/// Largest proxy drift under sample doubling for a trusted verdict.
pub const MAX_PROXY_DRIFT: f64 = 0.10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityParams {
    pub t_max: f64,
    /// Annulus A_x(δ₁, δ₂).
    pub delta1: f64,
    pub delta2: f64,
    pub ndirs: usize,
    pub ntimes: usize,
    /// None: twice the larger of the support resolution and the annulus
    /// sample spacing at the base resolution.
    pub dist_tol: Option<f64>,
    pub scales: Vec<f64>,
    pub cutoff: f64,
}

impl AdmissibilityParams {
    /// A_x(δ/2, 3δ) inside Λ_{x,3δ} on the default ladder.
    pub fn for_delta(delta: f64) -> Self {
        AdmissibilityParams {
            t_max: 3.0 * delta,
            delta1: 0.5 * delta,
            delta2: 3.0 * delta,
            ndirs: 1024,
            ntimes: 1025,
            dist_tol: None,
            scales: DEFAULT_LADDER.to_vec(),
            cutoff: DEFAULT_PROXY_CUTOFF,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityRun {
    pub params: AdmissibilityParams,
    pub dist_tol: f64,
    pub restricted_samples: usize,
    pub report: CoverReport,
    /// Same pipeline with ndirs and ntimes doubled, dist_tol held fixed.
    pub doubled: CoverReport,
    pub drift: f64,
    pub consistent: bool,
    pub verdict: AdmissibilityVerdict,
}

pub fn assess_admissibility(
    model: &ManifoldModel,
    x: [f64; 2],
    support: &dyn PhaseSet,
    params: &AdmissibilityParams,
) -> Result<AdmissibilityRun> {
    assess_admissibility_with(
        |nd, nt| build_flowout(model, x, params.t_max, nd, nt),
        support,
        params,
    )
}

/// `assess_admissibility` over flow-outs from `build(ndirs, ntimes)`, which
/// must sample Λ on [−T, T] with T = `params.t_max`.
pub fn assess_admissibility_with(
    build: impl Fn(usize, usize) -> Result<FlowOutSet>,
    support: &dyn PhaseSet,
    params: &AdmissibilityParams,
) -> Result<AdmissibilityRun> {
    let fo = build(params.ndirs, params.ntimes)?;
    let ann = annulus(&fo, params.delta1, params.delta2)?;
    let tol = match params.dist_tol {
        Some(t) => t,
        None => 2.0 * support.resolution().max(ann.sample_spacing()),
    };
    let restricted = restrict_support(support, &ann, tol)?;
    let report = hausdorff_proxy(&restricted, &params.scales, 2)?;
    let count = restricted.count();

    let fo2 = build(2 * params.ndirs, 2 * params.ntimes)?;
    let ann2 = annulus(&fo2, params.delta1, params.delta2)?;
    let restricted2 = restrict_support_unchecked(support, &ann2, tol);
    let doubled = hausdorff_proxy(&restricted2, &params.scales, 2)?;

    let drift = proxy_drift(&report, &doubled);
    if !(params.cutoff > 0.0) {
        return Err(LabError::InvalidArgument(format!(
            "proxy cutoff {}",
            params.cutoff
        )));
    }
    let verdict = admissibility_verdict(&report, params.cutoff)?;
    Ok(AdmissibilityRun {
        params: params.clone(),
        dist_tol: tol,
        restricted_samples: count,
        report,
        doubled,
        drift,
        consistent: drift <= MAX_PROXY_DRIFT,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flowout::cover::Admissibility;
    use crate::geometry::Frame;
    use crate::microlocal::sets::{Nothing, OrientedEquator, TorusDirection, ZonalLagrangian};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn zonal_at_pole_is_not_admissible() {
        let run = assess_admissibility(
            &ManifoldModel::sphere(),
            [0.0, 0.0],
            &ZonalLagrangian {
                pole: Frame::STANDARD.e3,
            },
            &AdmissibilityParams::for_delta(0.3),
        )
        .unwrap();
        assert!(
            (run.report.dim_estimate - 2.0).abs() <= 0.2,
            "{:?}",
            run.report
        );
        assert!(run.consistent, "drift {}", run.drift);
        assert_eq!(
            run.verdict.verdict,
            Admissibility::NotAdmissible,
            "{:?}",
            run.verdict
        );
    }

    #[test]
    fn scar_on_equator_is_admissible() {
        let run = assess_admissibility(
            &ManifoldModel::sphere(),
            [FRAC_PI_2, 0.0],
            &OrientedEquator {
                pole: Frame::STANDARD.e3,
            },
            &AdmissibilityParams::for_delta(0.3),
        )
        .unwrap();
        assert!(
            (run.report.dim_estimate - 1.0).abs() <= 0.2,
            "{:?}",
            run.report
        );
        assert!(
            run.consistent,
            "drift {} {:?} {:?}",
            run.drift, run.report, run.doubled
        );
        assert_eq!(
            run.verdict.verdict,
            Admissibility::Admissible,
            "{:?}",
            run.verdict
        );
    }

    #[test]
    fn torus_line_is_admissible_and_empty_is_trivial() {
        let mut p = AdmissibilityParams::for_delta(0.3);
        p.ndirs = 256;
        p.ntimes = 257;
        let run = assess_admissibility(
            &ManifoldModel::torus(),
            [1.0, 2.0],
            &TorusDirection { angle: 0.0 },
            &p,
        )
        .unwrap();
        assert_eq!(
            run.verdict.verdict,
            Admissibility::Admissible,
            "{:?}",
            run.report
        );
        let empty =
            assess_admissibility(&ManifoldModel::torus(), [1.0, 2.0], &Nothing, &p).unwrap();
        assert_eq!(empty.restricted_samples, 0);
        assert_eq!(empty.verdict.verdict, Admissibility::Admissible);
        assert_eq!(empty.drift, 0.0);
    }
}
