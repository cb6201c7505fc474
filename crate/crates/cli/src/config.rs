use std::f64::consts::{FRAC_PI_2, PI};
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use eigenlab::bounds::{CoverParams, LiftParams};
use eigenlab::flowout::AdmissibilityParams;
use eigenlab::suite::{
    FamilyKind, FlowoutConfig, LiftConfig, RelatedConfig, ScalingConfig, SchrodingerConfig,
    SoggeConfig, SCAR_PROBE,
};

#[derive(Debug, thiserror::Error)]
#[error("config error in `{field}`: {message}")]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

fn bad(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Scaling,
    Lift,
    Flowout,
    Related,
    Sogge,
    Schrodinger,
    FullSuite,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Scaling => "scaling",
            Experiment::Lift => "lift",
            Experiment::Flowout => "flowout",
            Experiment::Related => "related",
            Experiment::Sogge => "sogge",
            Experiment::Schrodinger => "schrodinger",
            Experiment::FullSuite => "full-suite",
        }
    }

    /// Module whose errors the pipeline surfaces.
    pub fn module(&self) -> &'static str {
        match self {
            Experiment::Scaling | Experiment::Related | Experiment::Sogge => "bounds",
            Experiment::Lift => "microlocal",
            Experiment::Flowout => "flowout",
            Experiment::Schrodinger => "schrodinger",
            Experiment::FullSuite => "suite",
        }
    }
}

/// A base point: chart coordinates or one of the named points
/// `pole`, `equator`, `equator-offset`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Point {
    Coords([f64; 2]),
    Named(String),
}

impl Point {
    pub fn parse(s: &str) -> Result<Point, String> {
        if s.contains(',') {
            let v: Vec<f64> = s
                .split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
                .collect::<Result<_, _>>()?;
            match v[..] {
                [a, b] => Ok(Point::Coords([a, b])),
                _ => Err(format!("expected two coordinates, got {}", v.len())),
            }
        } else {
            Ok(Point::Named(s.into()))
        }
    }

    fn resolve(&self) -> Result<[f64; 2], ConfigError> {
        match self {
            Point::Coords(c) if c.iter().all(|v| v.is_finite()) => Ok(*c),
            Point::Coords(_) => Err(bad("x", "coordinates must be finite")),
            Point::Named(n) => match n.as_str() {
                "pole" => Ok([0.0, 0.0]),
                "equator" => Ok([FRAC_PI_2, 0.0]),
                "equator-offset" => Ok(SCAR_PROBE),
                other => Err(bad(
                    "x",
                    format!("unknown point {other:?} (pole, equator, equator-offset or \"a,b\")"),
                )),
            },
        }
    }
}

/// Raw configuration as read from TOML and flags; every field optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Option<Experiment>,
    pub family: Option<FamilyKind>,
    pub k: Option<Vec<usize>>,
    pub h: Option<Vec<f64>>,
    pub x: Option<Point>,
    pub delta: Option<f64>,
    /// Flow-out time horizon.
    pub t_max: Option<f64>,
    pub ndirs: Option<usize>,
    pub ntimes: Option<usize>,
    /// Box-counting ε ladder, descending.
    pub epsilon: Option<Vec<f64>>,
    pub cells: Option<usize>,
    pub fiber_cells: Option<usize>,
    pub width: Option<f64>,
    pub tau: Option<f64>,
    pub dist_tol: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Fields set in `over` replace those in `self`.
    pub fn merge(self, over: ExperimentConfig) -> ExperimentConfig {
        macro_rules! pick {
            ($($f:ident),*) => { ExperimentConfig { $($f: over.$f.or(self.$f)),* } };
        }
        pick!(
            experiment,
            family,
            k,
            h,
            x,
            delta,
            t_max,
            ndirs,
            ntimes,
            epsilon,
            cells,
            fiber_cells,
            width,
            tau,
            dist_tol,
            seed,
            out
        )
    }
}

/// Validated configuration with every default materialized.
#[derive(Debug, Clone, PartialEq)]
pub enum Resolved {
    Scaling(ScalingConfig),
    Lift(LiftConfig),
    Flowout(FlowoutConfig),
    Related(RelatedConfig),
    Sogge(SoggeConfig),
    Schrodinger(SchrodingerConfig),
    FullSuite,
}

pub struct Plan {
    pub experiment: Experiment,
    pub resolved: Resolved,
    pub out: PathBuf,
}

fn positive(field: &str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(bad(field, format!("must be positive and finite, got {v}")))
    }
}

fn k_ladder(
    raw: &ExperimentConfig,
    default: &[usize],
    min_len: usize,
) -> Result<Vec<usize>, ConfigError> {
    let k = raw.k.clone().unwrap_or_else(|| default.to_vec());
    if k.len() < min_len {
        return Err(bad(
            "k",
            format!("need at least {min_len} values, got {}", k.len()),
        ));
    }
    if k.contains(&0) {
        return Err(bad("k", "degrees must be at least 1"));
    }
    if k.windows(2).any(|w| w[1] <= w[0]) {
        return Err(bad("k", "ladder must increase strictly"));
    }
    Ok(k)
}

/// Growth fits need five rungs spanning a factor of four.
fn fit_span(field: &str, n: usize, lo: f64, hi: f64) -> Result<(), ConfigError> {
    if n < 5 || hi < 4.0 * lo {
        return Err(bad(
            field,
            format!("a growth fit needs ≥ 5 values spanning a factor ≥ 4, got {n} over {lo}..{hi}"),
        ));
    }
    Ok(())
}

fn family(raw: &ExperimentConfig) -> Result<FamilyKind, ConfigError> {
    let f = raw
        .family
        .ok_or_else(|| bad("family", "required for this experiment"))?;
    if f == FamilyKind::RandomWave && raw.seed.is_none() {
        return Err(bad("seed", "mandatory for random-wave"));
    }
    Ok(f)
}

fn delta(raw: &ExperimentConfig, default: f64) -> Result<f64, ConfigError> {
    let d = positive("delta", raw.delta.unwrap_or(default))?;
    if d >= 1.0 {
        return Err(bad("delta", format!("must lie in (0, 1), got {d}")));
    }
    Ok(d)
}

fn point(
    raw: &ExperimentConfig,
    fam: FamilyKind,
    default: [f64; 2],
) -> Result<[f64; 2], ConfigError> {
    let x = raw
        .x
        .as_ref()
        .map(Point::resolve)
        .transpose()?
        .unwrap_or(default);
    if fam != FamilyKind::TorusWave && !(0.0..=PI).contains(&x[0]) {
        return Err(bad(
            "x",
            format!("polar radius must lie in [0, π], got {}", x[0]),
        ));
    }
    Ok(x)
}

fn cells(field: &str, v: Option<usize>, default: usize) -> Result<usize, ConfigError> {
    let c = v.unwrap_or(default);
    if c < 4 {
        return Err(bad(field, format!("need at least 4 cells, got {c}")));
    }
    Ok(c)
}

fn epsilon(raw: &ExperimentConfig, default: &[f64]) -> Result<Vec<f64>, ConfigError> {
    let e = raw.epsilon.clone().unwrap_or_else(|| default.to_vec());
    if e.len() < 2 {
        return Err(bad("epsilon", "need at least two scales"));
    }
    for &v in &e {
        positive("epsilon", v)?;
    }
    if e.windows(2).any(|w| w[1] >= w[0]) {
        return Err(bad("epsilon", "ladder must decrease strictly"));
    }
    Ok(e)
}

fn directions(field: &str, v: Option<usize>, default: usize) -> Result<usize, ConfigError> {
    let n = v.unwrap_or(default);
    if n < 64 {
        return Err(bad(field, format!("need at least 64 samples, got {n}")));
    }
    Ok(n)
}

fn tau(raw: &ExperimentConfig, default: f64) -> Result<f64, ConfigError> {
    let t = positive("tau", raw.tau.unwrap_or(default))?;
    if t >= 1.0 {
        return Err(bad("tau", format!("must lie in (0, 1), got {t}")));
    }
    Ok(t)
}

pub fn resolve(raw: &ExperimentConfig) -> Result<Plan, ConfigError> {
    let experiment = raw
        .experiment
        .ok_or_else(|| bad("experiment", "required"))?;
    let out = raw.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    let resolved = match experiment {
        Experiment::Scaling => {
            let fam = family(raw)?;
            let k = k_ladder(raw, &eigenlab::suite::SPHERE_LADDER, 2)?;
            fit_span("k", k.len(), k[0] as f64, k[k.len() - 1] as f64)?;
            let mut cfg = ScalingConfig::new(fam, k);
            cfg.seed = raw.seed;
            cfg.delta = delta(raw, cfg.delta)?;
            if raw.x.is_some() {
                cfg.probes = vec![point(raw, fam, [0.0, 0.0])?];
            }
            Resolved::Scaling(cfg)
        }
        Experiment::Related => {
            let fam = family(raw)?;
            let default_x = match fam {
                FamilyKind::HighestWeight => SCAR_PROBE,
                _ => fam.default_probes()[0],
            };
            let x = point(raw, fam, default_x)?;
            let mut cfg = RelatedConfig::new(
                fam,
                k_ladder(raw, &eigenlab::suite::RELATED_LADDER, 2)?,
                x,
                delta(raw, 0.3)?,
            );
            cfg.seed = raw.seed;
            let lift = LiftParams::default();
            cfg.lift = LiftParams {
                width: positive("width", raw.width.unwrap_or(lift.width))?,
                tau: tau(raw, lift.tau)?,
                cells: cells("cells", raw.cells, lift.cells)?,
                fiber_cells: cells("fiber_cells", raw.fiber_cells, lift.fiber_cells)?,
            };
            let cover = CoverParams::default();
            cfg.cover = CoverParams {
                ndirs: directions("ndirs", raw.ndirs, cover.ndirs)?,
                ntimes: directions("ntimes", raw.ntimes, cover.ntimes)?,
                dist_tol: raw.dist_tol.map(|d| positive("dist_tol", d)).transpose()?,
                scales: epsilon(raw, &cover.scales)?,
                cutoff: cover.cutoff,
            };
            Resolved::Related(cfg)
        }
        Experiment::Sogge => {
            let fam = family(raw)?;
            Resolved::Sogge(SoggeConfig {
                family: fam,
                k: k_ladder(raw, &eigenlab::suite::SPHERE_LADDER, 2)?,
                seed: raw.seed,
                x: point(raw, fam, fam.default_probes()[0])?,
                delta: delta(raw, 0.3)?,
            })
        }
        Experiment::Flowout => {
            let fam = family(raw)?;
            let d = delta(raw, 0.3)?;
            let base = AdmissibilityParams::for_delta(d);
            let t_max = positive("t_max", raw.t_max.unwrap_or(base.t_max))?;
            if t_max < base.delta2 {
                return Err(bad(
                    "t_max",
                    format!("must reach the annulus radius 3δ = {}", base.delta2),
                ));
            }
            Resolved::Flowout(FlowoutConfig {
                family: fam,
                x: point(raw, fam, fam.default_probes()[0])?,
                params: AdmissibilityParams {
                    t_max,
                    ndirs: directions("ndirs", raw.ndirs, base.ndirs)?,
                    ntimes: directions("ntimes", raw.ntimes, base.ntimes)?,
                    dist_tol: raw.dist_tol.map(|d| positive("dist_tol", d)).transpose()?,
                    scales: epsilon(raw, &base.scales)?,
                    ..base
                },
            })
        }
        Experiment::Lift => {
            let fam = family(raw)?;
            let k = k_ladder(raw, &[100], 1)?;
            if k.len() != 1 {
                return Err(bad("k", "lift takes a single degree"));
            }
            let def = LiftParams::default();
            Resolved::Lift(LiftConfig {
                family: fam,
                k: k[0],
                seed: raw.seed,
                width: positive("width", raw.width.unwrap_or(def.width))?,
                cells: cells("cells", raw.cells, def.cells)?,
                fiber_cells: cells("fiber_cells", raw.fiber_cells, def.fiber_cells)?,
                frame_pole: [1.0, 0.0, 0.0],
                dist_tol: positive("dist_tol", raw.dist_tol.unwrap_or(0.1))?,
            })
        }
        Experiment::Schrodinger => {
            if raw.family.is_some() {
                return Err(bad(
                    "family",
                    "schrodinger runs the oscillator ladders; omit family",
                ));
            }
            let def = SchrodingerConfig::default();
            let h = raw.h.clone().unwrap_or(def.h);
            for &v in &h {
                if !(v > 0.0 && v <= 0.5) {
                    return Err(bad("h", format!("values must lie in (0, 1/2], got {v}")));
                }
            }
            if h.windows(2).any(|w| w[1] >= w[0]) {
                return Err(bad("h", "ladder must decrease strictly"));
            }
            fit_span(
                "h",
                h.len(),
                h[h.len() - 1],
                h.first().copied().unwrap_or(0.0),
            )?;
            Resolved::Schrodinger(SchrodingerConfig {
                h,
                delta: delta(raw, def.delta)?,
            })
        }
        Experiment::FullSuite => Resolved::FullSuite,
    };
    Ok(Plan {
        experiment,
        resolved,
        out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(s: &str) -> ExperimentConfig {
        toml::from_str(s).unwrap()
    }

    #[test]
    fn flags_override_file_values() {
        let file = raw("experiment = \"scaling\"\nfamily = \"zonal\"\nk = [10, 20]");
        let flags = ExperimentConfig {
            k: Some(vec![5, 6, 7]),
            ..Default::default()
        };
        let m = file.merge(flags);
        assert_eq!(m.k, Some(vec![5, 6, 7]));
        assert_eq!(m.family, Some(FamilyKind::Zonal));
    }

    #[test]
    fn field_level_errors() {
        let cases = [
            ("experiment = \"scaling\"", "family"),
            ("experiment = \"scaling\"\nfamily = \"random-wave\"", "seed"),
            (
                "experiment = \"scaling\"\nfamily = \"zonal\"\nk = [20, 10]",
                "k",
            ),
            (
                "experiment = \"related\"\nfamily = \"zonal\"\nx = \"north\"",
                "x",
            ),
            (
                "experiment = \"related\"\nfamily = \"zonal\"\ndelta = -1.0",
                "delta",
            ),
            ("experiment = \"schrodinger\"\nh = [0.1, 0.2]", "h"),
            (
                "experiment = \"schrodinger\"\nh = [0.025, 0.01, 0.004]",
                "h",
            ),
            (
                "experiment = \"scaling\"\nfamily = \"zonal\"\nk = [10, 11, 12, 13, 14]",
                "k",
            ),
            (
                "experiment = \"flowout\"\nfamily = \"zonal\"\nepsilon = [0.1, 0.2]",
                "epsilon",
            ),
            ("family = \"zonal\"", "experiment"),
        ];
        for (src, field) in cases {
            let err = resolve(&raw(src))
                .err()
                .unwrap_or_else(|| panic!("{src} accepted"));
            assert_eq!(err.field, field, "{src}");
        }
    }

    #[test]
    fn named_points() {
        assert_eq!(
            Point::parse("equator-offset").unwrap().resolve().unwrap(),
            SCAR_PROBE
        );
        assert_eq!(
            Point::parse("0.5, 1").unwrap().resolve().unwrap(),
            [0.5, 1.0]
        );
        assert!(Point::parse("1,2,3").is_err());
    }

    #[test]
    fn defaults_are_materialized() {
        let p = resolve(&raw(
            "experiment = \"related\"\nfamily = \"highest-weight\"",
        ))
        .unwrap();
        match p.resolved {
            Resolved::Related(c) => {
                assert_eq!(c.x, SCAR_PROBE);
                assert_eq!(c.k, eigenlab::suite::RELATED_LADDER.to_vec());
                assert_eq!(c.lift, LiftParams::default());
            }
            other => panic!("{other:?}"),
        }
    }
}
