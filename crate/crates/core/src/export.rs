//! CSV tables and flat JSON records for experiment outputs.
//!
//! Every record is a flat object: nested structs become dotted keys, arrays
//! of structs become one array per field. Keys are sorted and floats use the
//! shortest round-trip form, so identical inputs give identical bytes.

use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::bounds::{BoundReport, ScalingSample};
use crate::error::{LabError, Result};
use crate::flowout::CoverReport;
use crate::microlocal::LiftEstimate;
use crate::schrodinger::LadderReport;

/// A named output file held in memory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

impl Artifact {
    pub fn csv<R: Serialize>(name: &str, rows: &[R]) -> Result<Self> {
        Ok(Artifact {
            name: name.into(),
            contents: csv_table(rows)?,
        })
    }

    pub fn json(name: &str, record: &Map<String, Value>) -> Result<Self> {
        let mut s =
            serde_json::to_string_pretty(record).map_err(|e| LabError::Io(e.to_string()))?;
        s.push('\n');
        Ok(Artifact {
            name: name.into(),
            contents: s,
        })
    }
}

fn join(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

fn walk(prefix: &str, v: &Value, out: &mut Map<String, Value>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                walk(&join(prefix, k), x, out);
            }
        }
        Value::Array(a) if a.iter().any(Value::is_object) => {
            let rows: Vec<Map<String, Value>> = a
                .iter()
                .map(|x| {
                    let mut m = Map::new();
                    walk("", x, &mut m);
                    m
                })
                .collect();
            let mut keys: Vec<&String> = rows.iter().flat_map(|m| m.keys()).collect();
            keys.sort();
            keys.dedup();
            for k in keys {
                let col = rows
                    .iter()
                    .map(|m| m.get(k).cloned().unwrap_or(Value::Null))
                    .collect();
                out.insert(join(prefix, k), Value::Array(col));
            }
        }
        _ => {
            out.insert(prefix.to_string(), v.clone());
        }
    }
}

/// Flattens any serializable value into dotted keys.
pub fn flatten<T: Serialize>(value: &T) -> Result<Map<String, Value>> {
    let v = serde_json::to_value(value).map_err(|e| LabError::Io(e.to_string()))?;
    let mut out = Map::new();
    walk("", &v, &mut out);
    Ok(out)
}

/// {experiment, config.*, result.*} as one flat record.
pub fn record<C: Serialize, R: Serialize>(
    experiment: &str,
    config: &C,
    result: &R,
) -> Result<Map<String, Value>> {
    let mut out = Map::new();
    out.insert("experiment".into(), Value::String(experiment.into()));
    for (k, v) in flatten(config)? {
        out.insert(join("config", &k), v);
    }
    for (k, v) in flatten(result)? {
        out.insert(join("result", &k), v);
    }
    Ok(out)
}

pub fn csv_table<R: Serialize>(rows: &[R]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| LabError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| LabError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| LabError::Io(e.to_string()))
}

/// Writes each artifact under `dir` (created if missing).
pub fn write_artifacts(dir: &Path, artifacts: &[Artifact]) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| LabError::Io(format!("{}: {e}", dir.display())))?;
    for a in artifacts {
        let p = dir.join(&a.name);
        fs::write(&p, &a.contents).map_err(|e| LabError::Io(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct ScalingRow {
    pub family: String,
    pub k: Option<usize>,
    pub seed: Option<u64>,
    pub lambda: f64,
    pub h: f64,
    pub sup_value: f64,
    pub argmax_0: f64,
    pub argmax_1: f64,
    pub coarse_value: f64,
    pub coarse_spacing: f64,
    pub refine_steps: usize,
}

pub fn scaling_rows(samples: &[ScalingSample]) -> Vec<ScalingRow> {
    samples
        .iter()
        .map(|s| ScalingRow {
            family: s.family.clone(),
            k: s.k,
            seed: s.seed,
            lambda: s.lambda,
            h: s.h,
            sup_value: s.sup_value,
            argmax_0: s.argmax[0],
            argmax_1: s.argmax[1],
            coarse_value: s.coarse_value,
            coarse_spacing: s.coarse_spacing,
            refine_steps: s.refine_steps,
        })
        .collect()
}

/// One row per grid cell with positive weight. On the sphere (r, θ) are
/// polar coordinates of the grid's own frame; on the torus they are (x₁, x₂).
#[derive(Debug, Serialize)]
pub struct LiftRow {
    pub r: f64,
    pub theta: f64,
    pub fiber_angle: f64,
    pub weight: f64,
}

pub fn lift_rows(lift: &LiftEstimate) -> Vec<LiftRow> {
    let g = &lift.grid;
    (0..g.len())
        .filter(|&c| lift.weights[c] > 0.0)
        .map(|c| {
            let (i, j, l) = g.split(c);
            let x = g.base_center(i, j);
            LiftRow {
                r: x[0],
                theta: x[1],
                fiber_angle: g.fiber_angle(l),
                weight: lift.weights[c],
            }
        })
        .collect()
}

#[derive(Debug, Serialize)]
struct LiftSidecar<'a> {
    label: &'a str,
    model: &'a str,
    frame_pole: [f64; 3],
    k: Option<usize>,
    seed: Option<u64>,
    h: f64,
    width: f64,
    grid_dims: [usize; 3],
    r_window: [f64; 2],
    cells_written: usize,
}

pub fn lift_sidecar(lift: &LiftEstimate) -> Result<Map<String, Value>> {
    let g = &lift.grid;
    flatten(&LiftSidecar {
        label: &lift.label,
        model: g.model.name(),
        frame_pole: g.model.frame.e3,
        k: lift.k,
        seed: lift.seed,
        h: lift.h,
        width: lift.width,
        grid_dims: [g.n0, g.n1, g.n_fib],
        r_window: [g.lo0, g.hi0],
        cells_written: lift.weights.iter().filter(|w| **w > 0.0).count(),
    })
}

#[derive(Debug, Serialize)]
pub struct CoverRow {
    pub epsilon: f64,
    pub count: usize,
    pub proxy: f64,
}

pub fn cover_rows(report: &CoverReport) -> Vec<CoverRow> {
    report
        .scales
        .iter()
        .zip(&report.counts)
        .zip(&report.proxies)
        .map(|((&epsilon, &count), &proxy)| CoverRow {
            epsilon,
            count,
            proxy,
        })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct BoundRow {
    pub bound: String,
    pub family: String,
    pub k: Option<usize>,
    pub seed: Option<u64>,
    pub lambda: f64,
    pub h: f64,
    pub x_0: f64,
    pub x_1: f64,
    pub delta: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub witness_0: f64,
    pub witness_1: f64,
    pub tau: Option<f64>,
}

pub fn bound_rows(rows: &[BoundReport]) -> Vec<BoundRow> {
    rows.iter()
        .map(|b| BoundRow {
            bound: b.bound.clone(),
            family: b.family.clone(),
            k: b.k,
            seed: b.seed,
            lambda: b.lambda,
            h: b.h,
            x_0: b.x[0],
            x_1: b.x[1],
            delta: b.delta,
            lhs: b.lhs,
            rhs: b.rhs,
            ratio: b.ratio,
            witness_0: b.witness[0],
            witness_1: b.witness[1],
            tau: b.tau,
        })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct OscillatorRow {
    pub experiment: &'static str,
    pub ladder: &'static str,
    pub h: f64,
    pub n: usize,
    pub m: i64,
    pub eigenvalue: f64,
    pub growth_value: f64,
    pub argmax_0: f64,
    pub argmax_1: f64,
    pub ball_lhs: f64,
}

pub fn oscillator_rows(report: &LadderReport) -> Vec<OscillatorRow> {
    report
        .rows
        .iter()
        .map(|r| OscillatorRow {
            experiment: "schrodinger",
            ladder: report.ladder.tag(),
            h: r.h,
            n: r.n,
            m: r.m,
            eigenvalue: r.eigenvalue,
            growth_value: r.growth_value,
            argmax_0: r.argmax[0],
            argmax_1: r.argmax[1],
            ball_lhs: r.ball_lhs,
        })
        .collect()
}
