mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use config::{resolve, ConfigError, Experiment, ExperimentConfig, Plan, Point, Resolved};
use eigenlab::bounds::Consistency;
use eigenlab::export::{flatten, Artifact};
use eigenlab::suite::{self, FamilyKind};

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_PIPELINE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "eigenlab",
    version,
    about = "Eigenfunction sup-norm experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a TOML config and/or flags.
    Run {
        experiment: Option<Experiment>,
        #[command(flatten)]
        flags: Flags,
    },
    /// Run the six canonical experiments and write a summary.
    FullSuite {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Default)]
struct Flags {
    /// TOML file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_family)]
    family: Option<FamilyKind>,
    #[arg(long, value_delimiter = ',')]
    k: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    h: Option<Vec<f64>>,
    /// "a,b" or one of pole, equator, equator-offset.
    #[arg(long, value_parser = Point::parse, allow_hyphen_values = true)]
    x: Option<Point>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    ndirs: Option<usize>,
    #[arg(long)]
    ntimes: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    epsilon: Option<Vec<f64>>,
    #[arg(long)]
    cells: Option<usize>,
    #[arg(long)]
    fiber_cells: Option<usize>,
    #[arg(long)]
    width: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    dist_tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_family(s: &str) -> Result<FamilyKind, String> {
    serde_json::from_value(Value::String(s.into()))
        .map_err(|_| "expected zonal, highest-weight, torus-wave or random-wave".to_string())
}

enum Failure {
    Config(ConfigError),
    Pipeline(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

fn load(experiment: Option<Experiment>, flags: Flags) -> Result<ExperimentConfig, ConfigError> {
    let file = match &flags.config {
        Some(path) => {
            let src = std::fs::read_to_string(path).map_err(|e| ConfigError {
                field: path.display().to_string(),
                message: e.to_string(),
            })?;
            toml::from_str::<ExperimentConfig>(&src).map_err(|e| ConfigError {
                field: path.display().to_string(),
                message: e.message().to_string(),
            })?
        }
        None => ExperimentConfig::default(),
    };
    let over = ExperimentConfig {
        experiment,
        family: flags.family,
        k: flags.k,
        h: flags.h,
        x: flags.x,
        delta: flags.delta,
        t_max: flags.t_max,
        ndirs: flags.ndirs,
        ntimes: flags.ntimes,
        epsilon: flags.epsilon,
        cells: flags.cells,
        fiber_cells: flags.fiber_cells,
        width: flags.width,
        tau: flags.tau,
        dist_tol: flags.dist_tol,
        seed: flags.seed,
        out: flags.out,
    };
    Ok(file.merge(over))
}

fn init_threads() -> Result<(), ConfigError> {
    let Ok(v) = std::env::var("EIGENLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| ConfigError {
            field: "EIGENLAB_THREADS".into(),
            message: format!("expected a positive integer, got {v:?}"),
        })?;
    // a second initialization (only possible in-process) keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// manifest.json: the written files with their SHA-256 and the effective config.
fn write_manifest(
    out: &Path,
    experiment: &str,
    config: Map<String, Value>,
    files: &[String],
) -> Result<(), String> {
    let mut hashes = Vec::new();
    for f in files {
        let bytes = std::fs::read(out.join(f)).map_err(|e| format!("{f}: {e}"))?;
        hashes.push(Value::String(sha256_hex(&bytes)));
    }
    let mut m = Map::new();
    m.insert("experiment".into(), experiment.into());
    for (k, v) in config {
        m.insert(format!("config.{k}"), v);
    }
    m.insert(
        "files".into(),
        files.iter().cloned().map(Value::String).collect(),
    );
    m.insert("sha256".into(), Value::Array(hashes));
    let a = Artifact::json("manifest.json", &m).map_err(|e| e.to_string())?;
    eigenlab::export::write_artifacts(out, &[a]).map_err(|e| e.to_string())
}

fn run(plan: Plan) -> Result<Vec<Option<Consistency>>, Failure> {
    let name = plan.experiment.name();
    let ctx =
        |e: eigenlab::LabError| Failure::Pipeline(format!("{}: {e}", plan.experiment.module()));
    let (outcomes, mut files, config) = match &plan.resolved {
        Resolved::FullSuite => {
            let s = suite::full_suite(&plan.out).map_err(ctx)?;
            let mut files: Vec<String> = s
                .outcomes
                .iter()
                .flat_map(|o| o.artifacts.iter().map(|a| a.name.clone()))
                .collect();
            files.extend(["summary.md".to_string(), "summary.json".to_string()]);
            let cfg = flatten(
                &serde_json::json!({ "experiments": s.rows.iter().map(|r| &r.experiment).collect::<Vec<_>>() }),
            );
            (s.outcomes, files, cfg.map_err(ctx)?)
        }
        r => {
            let (o, cfg) = match r {
                Resolved::Scaling(c) => (suite::run_scaling(name, c), flatten(c)),
                Resolved::Lift(c) => (suite::run_lift(name, c), flatten(c)),
                Resolved::Flowout(c) => (suite::run_flowout(name, c), flatten(c)),
                Resolved::Related(c) => (suite::run_related(name, c), flatten(c)),
                Resolved::Sogge(c) => (suite::run_sogge(name, c), flatten(c)),
                Resolved::Schrodinger(c) => (suite::run_schrodinger(name, c), flatten(c)),
                Resolved::FullSuite => unreachable!(),
            };
            let o = o.map_err(ctx)?;
            o.write(&plan.out).map_err(ctx)?;
            let files = o.artifacts.iter().map(|a| a.name.clone()).collect();
            (vec![o], files, cfg.map_err(ctx)?)
        }
    };
    files.sort();
    write_manifest(&plan.out, name, config, &files).map_err(Failure::Pipeline)?;
    for o in &outcomes {
        let v = match o.verdict {
            Some(Consistency::Consistent) => "CONSISTENT",
            Some(Consistency::Violation) => "VIOLATION",
            None => "-",
        };
        println!("{:<16} {:<24} {:<11} {}", o.name, o.tag, v, o.headline);
    }
    println!(
        "wrote {} files and manifest.json to {}",
        files.len(),
        plan.out.display()
    );
    Ok(outcomes.iter().map(|o| o.verdict).collect())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let raw = match cli.command {
        Command::Run { experiment, flags } => load(experiment, flags),
        Command::FullSuite { out } => Ok(ExperimentConfig {
            experiment: Some(Experiment::FullSuite),
            out,
            ..Default::default()
        }),
    };
    let result = raw
        .and_then(|r| {
            init_threads()?;
            resolve(&r)
        })
        .map_err(Failure::from)
        .and_then(run);
    let code = exit_code(&result);
    if let Err(Failure::Config(e)) = &result {
        eprintln!("eigenlab: {e}");
    } else if let Err(Failure::Pipeline(e)) = &result {
        eprintln!("eigenlab: {e}");
    }
    ExitCode::from(code)
}

fn exit_code(result: &Result<Vec<Option<Consistency>>, Failure>) -> u8 {
    match result {
        Ok(verdicts) if verdicts.contains(&Some(Consistency::Violation)) => EXIT_VIOLATION,
        Ok(_) => 0,
        Err(Failure::Config(_)) => EXIT_USAGE,
        Err(Failure::Pipeline(_)) => EXIT_PIPELINE,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_contract() {
        let c = Some(Consistency::Consistent);
        let v = Some(Consistency::Violation);
        assert_eq!(exit_code(&Ok(vec![c, None])), 0);
        assert_eq!(exit_code(&Ok(vec![c, v, c])), EXIT_VIOLATION);
        let cfg = ConfigError {
            field: "k".into(),
            message: "m".into(),
        };
        assert_eq!(exit_code(&Err(Failure::Config(cfg))), EXIT_USAGE);
        assert_eq!(
            exit_code(&Err(Failure::Pipeline("bounds: x".into()))),
            EXIT_PIPELINE
        );
    }
}
