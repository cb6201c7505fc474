//! Named experiments over the modules, each producing CSV/JSON artifacts
//! and, where a theorem applies, a consistency verdict.

use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bounds::{
    check_related_with_lift, check_sogge_local, fit_growth, scaling_samples, theorem_verdict,
    Consistency, CoverParams, LiftParams, RelatedReport, REFINE_TOL,
};
use crate::eigenmodes::Eigenfunction;
use crate::error::{LabError, Result};
use crate::export::{
    bound_rows, cover_rows, lift_rows, lift_sidecar, oscillator_rows, record, scaling_rows,
    write_artifacts, Artifact,
};
use crate::flowout::{assess_admissibility, Admissibility, AdmissibilityParams};
use crate::geometry::model::{Frame, ManifoldModel};
use crate::microlocal::{
    husimi_lift, measure_of_set, Everything, OrientedEquator, PhaseGrid, PhaseSet, TorusDirection,
    ZonalLagrangian,
};
use crate::numeric::fit_line;
use crate::schrodinger::{
    invariant_drift, ladder_report, Ladder, DEFAULT_H_LADDER, DICHOTOMY_DELTA,
};
use crate::tolerances::EXPONENT_MARGIN;

/// Off-equator base point of the scar experiments (latitude 0.8).
pub const SCAR_PROBE: [f64; 2] = [FRAC_PI_2 - 0.8, 0.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    Zonal,
    HighestWeight,
    /// Plane wave e^{i k x₁} on the flat torus.
    TorusWave,
    RandomWave,
}

impl FamilyKind {
    pub fn tag(&self) -> &'static str {
        match self {
            FamilyKind::Zonal => "zonal",
            FamilyKind::HighestWeight => "highest-weight",
            FamilyKind::TorusWave => "torus-wave",
            FamilyKind::RandomWave => "random-wave",
        }
    }

    pub fn member(&self, k: usize, seed: Option<u64>) -> Result<Eigenfunction> {
        match self {
            FamilyKind::Zonal => Ok(Eigenfunction::zonal(k)),
            FamilyKind::HighestWeight => Ok(Eigenfunction::highest_weight(k)),
            FamilyKind::TorusWave => Eigenfunction::torus_wave([k as i64, 0]),
            FamilyKind::RandomWave => {
                let seed = seed.ok_or_else(|| {
                    LabError::InvalidArgument("seed: required for random-wave".into())
                })?;
                Eigenfunction::random_wave(k, seed)
            }
        }
    }

    pub fn ladder(&self, ks: &[usize], seed: Option<u64>) -> Result<Vec<Eigenfunction>> {
        if ks.windows(2).any(|w| w[1] <= w[0]) {
            return Err(LabError::InvalidArgument(
                "k: ladder must increase strictly".into(),
            ));
        }
        ks.iter().map(|&k| self.member(k, seed)).collect()
    }

    pub fn model(&self) -> ManifoldModel {
        match self {
            FamilyKind::TorusWave => ManifoldModel::torus(),
            _ => ManifoldModel::sphere(),
        }
    }

    /// Analytic support of the family's defect measure (the whole space for
    /// random waves, whose limit is Liouville).
    pub fn support(&self) -> Box<dyn PhaseSet> {
        match self {
            FamilyKind::Zonal => Box::new(ZonalLagrangian {
                pole: Frame::STANDARD.e3,
            }),
            FamilyKind::HighestWeight => Box::new(OrientedEquator {
                pole: Frame::STANDARD.e3,
            }),
            FamilyKind::TorusWave => Box::new(TorusDirection { angle: 0.0 }),
            FamilyKind::RandomWave => Box::new(Everything),
        }
    }

    pub fn default_probes(&self) -> Vec<[f64; 2]> {
        match self {
            FamilyKind::Zonal => vec![[0.0, 0.0]],
            FamilyKind::HighestWeight => vec![[FRAC_PI_2, 0.0], SCAR_PROBE],
            FamilyKind::TorusWave => vec![[1.0, 1.0]],
            FamilyKind::RandomWave => vec![[FRAC_PI_2, 0.0]],
        }
    }
}

/// Which theorem an experiment exercises.
pub fn theorem_tag(experiment: &str) -> &'static str {
    match experiment {
        "zonal-scaling" | "scar-scaling" | "scaling" => "admissible-improvement",
        "torus-scaling" => "diffuse-improvement",
        "zonal-related" | "scar-related" | "related" => "related-bound",
        "sogge" => "local-sogge-bound",
        "oscillator" | "schrodinger" => "schrodinger-dichotomy",
        _ => "none",
    }
}

/// Adds the experiment name and config.* keys to a sidecar record.
fn with_config<C: Serialize>(
    name: &str,
    cfg: &C,
    mut side: serde_json::Map<String, serde_json::Value>,
) -> Result<serde_json::Map<String, serde_json::Value>> {
    side.insert("experiment".into(), name.into());
    for (k, v) in crate::export::flatten(cfg)? {
        side.insert(format!("config.{k}"), v);
    }
    Ok(side)
}

/// Result of one experiment: its files and, if a theorem applies, the verdict.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub name: String,
    pub tag: &'static str,
    pub verdict: Option<Consistency>,
    pub headline: String,
    pub artifacts: Vec<Artifact>,
}

impl Outcome {
    pub fn write(&self, dir: &Path) -> Result<()> {
        write_artifacts(dir, &self.artifacts)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingConfig {
    pub family: FamilyKind,
    pub k: Vec<usize>,
    pub seed: Option<u64>,
    /// Base points where admissibility is assessed; empty = family default.
    pub probes: Vec<[f64; 2]>,
    pub delta: f64,
}

impl ScalingConfig {
    pub fn new(family: FamilyKind, k: Vec<usize>) -> Self {
        ScalingConfig {
            probes: family.default_probes(),
            family,
            k,
            seed: None,
            delta: 0.3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct ProbeVerdict {
    x: [f64; 2],
    verdict: Admissibility,
    dim_estimate: f64,
    smallest_proxy: f64,
    drift: f64,
    consistent: bool,
}

pub fn run_scaling(name: &str, cfg: &ScalingConfig) -> Result<Outcome> {
    let fam = cfg.family.ladder(&cfg.k, cfg.seed)?;
    let samples = scaling_samples(&fam, REFINE_TOL)?;
    let fit = fit_growth(&samples)?;
    let support = cfg.family.support();
    let params = AdmissibilityParams::for_delta(cfg.delta);
    let model = cfg.family.model();
    let probes = if cfg.probes.is_empty() {
        cfg.family.default_probes()
    } else {
        cfg.probes.clone()
    };
    let mut verdicts = Vec::new();
    for &x in &probes {
        let run = assess_admissibility(&model, x, support.as_ref(), &params)?;
        verdicts.push(ProbeVerdict {
            x,
            verdict: run.verdict.verdict,
            dim_estimate: run.report.dim_estimate,
            smallest_proxy: run.verdict.smallest_proxy,
            drift: run.drift,
            consistent: run.consistent,
        });
    }
    let tv = theorem_verdict(
        cfg.family.tag(),
        &fit,
        &verdicts.iter().map(|v| v.verdict).collect::<Vec<_>>(),
    );
    #[derive(Serialize)]
    struct Res<'a> {
        fit: &'a crate::bounds::ScalingFit,
        probes: &'a [ProbeVerdict],
        verdict: &'a crate::bounds::TheoremVerdict,
    }
    let rec = record(
        name,
        cfg,
        &Res {
            fit: &fit,
            probes: &verdicts,
            verdict: &tv,
        },
    )?;
    Ok(Outcome {
        name: name.into(),
        tag: theorem_tag(name),
        verdict: Some(tv.verdict),
        headline: format!("exponent {:.4} (r² {:.4})", fit.exponent, fit.r2),
        artifacts: vec![
            Artifact::csv(&format!("{name}.csv"), &scaling_rows(&samples))?,
            Artifact::json(&format!("{name}.json"), &rec)?,
        ],
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelatedConfig {
    pub family: FamilyKind,
    pub k: Vec<usize>,
    pub seed: Option<u64>,
    pub x: [f64; 2],
    pub delta: f64,
    pub lift: LiftParams,
    pub cover: CoverParams,
}

impl RelatedConfig {
    pub fn new(family: FamilyKind, k: Vec<usize>, x: [f64; 2], delta: f64) -> Self {
        RelatedConfig {
            family,
            k,
            seed: None,
            x,
            delta,
            lift: LiftParams::default(),
            cover: CoverParams::default(),
        }
    }
}

/// A small restricted support with lhs failing to decay contradicts the
/// related bound; anything else is consistent with it.
pub fn related_verdict(r: &RelatedReport) -> Consistency {
    if r.below_cutoff && !r.lhs_decreasing {
        Consistency::Violation
    } else {
        Consistency::Consistent
    }
}

pub fn run_related(name: &str, cfg: &RelatedConfig) -> Result<Outcome> {
    let fam = cfg.family.ladder(&cfg.k, cfg.seed)?;
    let (rep, lift) = check_related_with_lift(&fam, cfg.x, cfg.delta, &cfg.lift, &cfg.cover)?;
    let verdict = related_verdict(&rep);
    #[derive(Serialize)]
    struct Res<'a> {
        lhs_trend: f64,
        lhs_decreasing: bool,
        rhs: f64,
        proxy: f64,
        below_cutoff: bool,
        lift_lambda: f64,
        support_cells: usize,
        retained_mass: f64,
        dist_tol: f64,
        restricted_samples: usize,
        dim_estimate: f64,
        lhs: Vec<f64>,
        verdict: Consistency,
        _p: std::marker::PhantomData<&'a ()>,
    }
    let res = Res {
        lhs_trend: rep.lhs_trend,
        lhs_decreasing: rep.lhs_decreasing,
        rhs: rep.rhs,
        proxy: rep.proxy,
        below_cutoff: rep.below_cutoff,
        lift_lambda: rep.lift_lambda,
        support_cells: rep.support_cells,
        retained_mass: rep.retained_mass,
        dist_tol: rep.dist_tol,
        restricted_samples: rep.restricted_samples,
        dim_estimate: rep.cover.dim_estimate,
        lhs: rep.rows.iter().map(|r| r.lhs).collect(),
        verdict,
        _p: std::marker::PhantomData,
    };
    let last = rep.rows.last().map(|r| r.lhs).unwrap_or(f64::NAN);
    Ok(Outcome {
        name: name.into(),
        tag: theorem_tag(name),
        verdict: Some(verdict),
        headline: format!(
            "lhs {:.4e} → {:.4e}, rhs {:.4}, proxy {:.4}",
            rep.rows[0].lhs, last, rep.rhs, rep.proxy
        ),
        artifacts: vec![
            Artifact::csv(&format!("{name}.csv"), &bound_rows(&rep.rows))?,
            Artifact::csv(&format!("{name}_cover.csv"), &cover_rows(&rep.cover))?,
            Artifact::json(&format!("{name}.json"), &record(name, cfg, &res)?)?,
            Artifact::csv(&format!("{name}_lift.csv"), &lift_rows(&lift))?,
            Artifact::json(
                &format!("{name}_lift.json"),
                &with_config(name, cfg, lift_sidecar(&lift)?)?,
            )?,
        ],
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoggeConfig {
    pub family: FamilyKind,
    pub k: Vec<usize>,
    pub seed: Option<u64>,
    pub x: [f64; 2],
    pub delta: f64,
}

pub fn run_sogge(name: &str, cfg: &SoggeConfig) -> Result<Outcome> {
    let fam = cfg.family.ladder(&cfg.k, cfg.seed)?;
    let rows = fam
        .iter()
        .map(|u| check_sogge_local(u, cfg.x, cfg.delta))
        .collect::<Result<Vec<_>>>()?;
    if rows.len() < 2 {
        return Err(LabError::InsufficientSamples(
            "k: need at least two members".into(),
        ));
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.lambda.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.ratio.ln()).collect();
    let slope = fit_line(&xs, &ys).slope;
    let verdict = if slope > EXPONENT_MARGIN {
        Consistency::Violation
    } else {
        Consistency::Consistent
    };
    #[derive(Serialize)]
    struct Res {
        ratio_slope: f64,
        margin: f64,
        no_growth_within_margin: bool,
        ratios: Vec<f64>,
        verdict: Consistency,
    }
    let res = Res {
        ratio_slope: slope,
        margin: EXPONENT_MARGIN,
        no_growth_within_margin: slope.abs() <= EXPONENT_MARGIN,
        ratios: rows.iter().map(|r| r.ratio).collect(),
        verdict,
    };
    Ok(Outcome {
        name: name.into(),
        tag: theorem_tag("sogge"),
        verdict: Some(verdict),
        headline: format!("log-ratio slope {slope:.4}"),
        artifacts: vec![
            Artifact::csv(&format!("{name}.csv"), &bound_rows(&rows))?,
            Artifact::json(&format!("{name}.json"), &record(name, cfg, &res)?)?,
        ],
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowoutConfig {
    pub family: FamilyKind,
    pub x: [f64; 2],
    pub params: AdmissibilityParams,
}

/// Admissibility of the family's analytic support at x; no theorem verdict.
pub fn run_flowout(name: &str, cfg: &FlowoutConfig) -> Result<Outcome> {
    let run = assess_admissibility(
        &cfg.family.model(),
        cfg.x,
        cfg.family.support().as_ref(),
        &cfg.params,
    )?;
    Ok(Outcome {
        name: name.into(),
        tag: "none",
        verdict: None,
        headline: format!(
            "{:?}, dimension {:.3}, drift {:.3}",
            run.verdict.verdict, run.report.dim_estimate, run.drift
        ),
        artifacts: vec![
            Artifact::csv(&format!("{name}.csv"), &cover_rows(&run.report))?,
            Artifact::csv(&format!("{name}_doubled.csv"), &cover_rows(&run.doubled))?,
            Artifact::json(&format!("{name}.json"), &record(name, cfg, &run)?)?,
        ],
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftConfig {
    pub family: FamilyKind,
    pub k: usize,
    pub seed: Option<u64>,
    pub width: f64,
    pub cells: usize,
    pub fiber_cells: usize,
    /// Pole of the sphere chart; e1 keeps the zonal pole inside the window.
    pub frame_pole: [f64; 3],
    /// Sasaki distance for the mass near the family's analytic support.
    pub dist_tol: f64,
}

pub fn run_lift(name: &str, cfg: &LiftConfig) -> Result<Outcome> {
    let u = cfg.family.member(cfg.k, cfg.seed)?;
    let grid = match cfg.family {
        FamilyKind::TorusWave => PhaseGrid::torus(cfg.cells, cfg.fiber_cells)?,
        _ => PhaseGrid::sphere(
            Frame::from_pole(cfg.frame_pole),
            cfg.cells,
            cfg.cells,
            cfg.fiber_cells,
            crate::microlocal::grid::DEFAULT_POLE_MARGIN,
        )?,
    };
    let lift = husimi_lift(&u, &grid, cfg.width)?;
    let near = measure_of_set(&lift, cfg.family.support().as_ref(), cfg.dist_tol);
    let mut side = lift_sidecar(&lift)?;
    side.insert("mass_near_support".into(), serde_json::json!(near));
    side.insert("dist_tol".into(), serde_json::json!(cfg.dist_tol));
    Ok(Outcome {
        name: name.into(),
        tag: "none",
        verdict: None,
        headline: format!("mass within {} of the support {:.4}", cfg.dist_tol, near),
        artifacts: vec![
            Artifact::csv(&format!("{name}.csv"), &lift_rows(&lift))?,
            Artifact::json(&format!("{name}.json"), &with_config(name, cfg, side)?)?,
        ],
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchrodingerConfig {
    pub h: Vec<f64>,
    pub delta: f64,
}

impl Default for SchrodingerConfig {
    fn default() -> Self {
        SchrodingerConfig {
            h: DEFAULT_H_LADDER.to_vec(),
            delta: DICHOTOMY_DELTA,
        }
    }
}

pub fn run_schrodinger(name: &str, cfg: &SchrodingerConfig) -> Result<Outcome> {
    let params = AdmissibilityParams::for_delta(cfg.delta);
    let radial = ladder_report(Ladder::Radial, &cfg.h, &params)?;
    let angular = ladder_report(Ladder::Angular, &cfg.h, &params)?;
    let drift = invariant_drift(20.0, 12, 40, 1e-10)?;
    let verdict = if radial.verdict.verdict == Consistency::Consistent
        && angular.verdict.verdict == Consistency::Consistent
    {
        Consistency::Consistent
    } else {
        Consistency::Violation
    };
    #[derive(Serialize)]
    struct Side<'a> {
        exponent_h: f64,
        fit_r2: f64,
        probe: [f64; 2],
        admissibility: Admissibility,
        dim_estimate: f64,
        drift: f64,
        ball_lhs: Vec<f64>,
        verdict: &'a crate::bounds::TheoremVerdict,
    }
    fn summarize(r: &crate::schrodinger::LadderReport) -> Side<'_> {
        Side {
            exponent_h: r.exponent_h,
            fit_r2: r.fit.r2,
            probe: r.probe,
            admissibility: r.admissibility.verdict.verdict,
            dim_estimate: r.admissibility.report.dim_estimate,
            drift: r.admissibility.drift,
            ball_lhs: r.rows.iter().map(|x| x.ball_lhs).collect(),
            verdict: &r.verdict,
        }
    }
    #[derive(Serialize)]
    struct Res<'a> {
        radial: Side<'a>,
        angular: Side<'a>,
        invariants: &'a crate::schrodinger::InvariantDrift,
        verdict: Consistency,
    }
    let res = Res {
        radial: summarize(&radial),
        angular: summarize(&angular),
        invariants: &drift,
        verdict,
    };
    let mut rows = oscillator_rows(&radial);
    rows.extend(oscillator_rows(&angular));
    Ok(Outcome {
        name: name.into(),
        tag: theorem_tag("schrodinger"),
        verdict: Some(verdict),
        headline: format!(
            "h-exponents {:.4} (m = 0), {:.4} (max |m|); invariant drift {:.1e}",
            radial.exponent_h,
            angular.exponent_h,
            drift.worst()
        ),
        artifacts: vec![
            Artifact::csv(&format!("{name}.csv"), &rows)?,
            Artifact::json(&format!("{name}.json"), &record(name, cfg, &res)?)?,
        ],
    })
}

pub const SPHERE_LADDER: [usize; 5] = [25, 50, 100, 200, 400];
pub const TORUS_LADDER: [usize; 5] = [25, 50, 100, 200, 400];
pub const RELATED_LADDER: [usize; 3] = [50, 100, 200];

pub type Runner = Box<dyn Fn(&str) -> Result<Outcome>>;

/// The six canonical experiments with default parameters.
pub fn suite_plan() -> Vec<(&'static str, Runner)> {
    vec![
        (
            "zonal-scaling",
            Box::new(|n: &str| {
                run_scaling(
                    n,
                    &ScalingConfig::new(FamilyKind::Zonal, SPHERE_LADDER.to_vec()),
                )
            }),
        ),
        (
            "scar-scaling",
            Box::new(|n: &str| {
                run_scaling(
                    n,
                    &ScalingConfig::new(FamilyKind::HighestWeight, SPHERE_LADDER.to_vec()),
                )
            }),
        ),
        (
            "torus-scaling",
            Box::new(|n: &str| {
                run_scaling(
                    n,
                    &ScalingConfig::new(FamilyKind::TorusWave, TORUS_LADDER.to_vec()),
                )
            }),
        ),
        (
            "zonal-related",
            Box::new(|n: &str| {
                run_related(
                    n,
                    &RelatedConfig::new(
                        FamilyKind::Zonal,
                        RELATED_LADDER.to_vec(),
                        [0.0, 0.0],
                        0.3,
                    ),
                )
            }),
        ),
        (
            "scar-related",
            Box::new(|n: &str| {
                run_related(
                    n,
                    &RelatedConfig::new(
                        FamilyKind::HighestWeight,
                        RELATED_LADDER.to_vec(),
                        SCAR_PROBE,
                        0.3,
                    ),
                )
            }),
        ),
        (
            "oscillator",
            Box::new(|n: &str| run_schrodinger(n, &SchrodingerConfig::default())),
        ),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteRow {
    pub experiment: String,
    pub theorem: String,
    pub verdict: String,
    pub headline: String,
}

#[derive(Debug, Clone)]
pub struct SuiteSummary {
    pub rows: Vec<SuiteRow>,
    pub outcomes: Vec<Outcome>,
}

impl SuiteSummary {
    pub fn violations(&self) -> usize {
        self.outcomes
            .iter()
            .filter(|o| o.verdict == Some(Consistency::Violation))
            .count()
    }

    pub fn table(&self) -> String {
        let mut s =
            String::from("| experiment | theorem | verdict | result |\n|---|---|---|---|\n");
        for r in &self.rows {
            s.push_str(&format!(
                "| {} | {} | {} | {} |\n",
                r.experiment, r.theorem, r.verdict, r.headline
            ));
        }
        s
    }
}

fn verdict_word(v: Option<Consistency>) -> &'static str {
    match v {
        Some(Consistency::Consistent) => "CONSISTENT",
        Some(Consistency::Violation) => "VIOLATION",
        None => "n/a",
    }
}

/// Runs the canonical six experiments, writing each experiment's artifacts
/// plus summary.md and summary.json under `out`.
pub fn full_suite(out: &Path) -> Result<SuiteSummary> {
    let mut outcomes = Vec::new();
    for (name, run) in suite_plan() {
        let o = run(name)?;
        o.write(out)?;
        outcomes.push(o);
    }
    let rows: Vec<SuiteRow> = outcomes
        .iter()
        .map(|o| SuiteRow {
            experiment: o.name.clone(),
            theorem: o.tag.into(),
            verdict: verdict_word(o.verdict).into(),
            headline: o.headline.clone(),
        })
        .collect();
    let summary = SuiteSummary { rows, outcomes };
    let md = format!("# eigenlab full suite\n\n{}", summary.table());
    write_artifacts(
        out,
        &[
            Artifact {
                name: "summary.md".into(),
                contents: md,
            },
            Artifact::json(
                "summary.json",
                &crate::export::flatten(&serde_json::json!({ "rows": summary.rows }))?,
            )?,
        ],
    )?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_wave_needs_a_seed() {
        assert!(matches!(
            FamilyKind::RandomWave.member(10, None),
            Err(LabError::InvalidArgument(_))
        ));
        assert!(FamilyKind::RandomWave.member(10, Some(3)).is_ok());
        assert!(matches!(
            FamilyKind::Zonal.ladder(&[10, 10], None),
            Err(LabError::InvalidArgument(_))
        ));
    }

    #[test]
    fn family_kinds_parse_from_kebab_case() {
        let k: FamilyKind = serde_json::from_str("\"highest-weight\"").unwrap();
        assert_eq!(k, FamilyKind::HighestWeight);
        assert_eq!(k.tag(), "highest-weight");
    }

    #[test]
    fn scaling_run_is_reproducible() {
        let mut cfg = ScalingConfig::new(FamilyKind::TorusWave, vec![5, 10, 20, 40, 80]);
        cfg.probes = vec![[1.0, 1.0]];
        let a = run_scaling("torus-scaling", &cfg).unwrap();
        let b = run_scaling("torus-scaling", &cfg).unwrap();
        assert_eq!(a.artifacts, b.artifacts);
        assert_eq!(a.verdict, Some(Consistency::Consistent));
        let json = &a.artifacts[1].contents;
        assert!(json.contains("\"config.family\": \"torus-wave\""));
        assert!(json.contains("\"result.fit.exponent\""));
    }

    #[test]
    fn related_verdict_table() {
        use crate::flowout::CoverReport;
        let mut r = RelatedReport {
            family: "f".into(),
            x: [0.0, 0.0],
            delta: 0.3,
            rows: vec![],
            lhs_trend: 0.0,
            lhs_decreasing: false,
            rhs: 0.1,
            proxy: 0.01,
            below_cutoff: true,
            lift_lambda: 1.0,
            lift: LiftParams::default(),
            support_cells: 1,
            retained_mass: 1.0,
            dist_tol: 0.1,
            restricted_samples: 1,
            cover: CoverReport {
                scales: vec![],
                counts: vec![],
                proxies: vec![],
                exponent: 2,
                dim_estimate: 0.0,
                r2: 1.0,
            },
        };
        assert_eq!(related_verdict(&r), Consistency::Violation);
        r.lhs_decreasing = true;
        assert_eq!(related_verdict(&r), Consistency::Consistent);
        r.lhs_decreasing = false;
        r.below_cutoff = false;
        assert_eq!(related_verdict(&r), Consistency::Consistent);
    }
}
