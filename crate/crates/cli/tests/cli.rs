use std::path::Path;
use std::process::{Command, Output};

use sha2::{Digest, Sha256};

fn eigenlab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eigenlab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env("EIGENLAB_THREADS", "1")
        .output()
        .unwrap()
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().into_string().unwrap(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    v.sort();
    v
}

#[test]
fn malformed_configs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("experiment = \"scaling\"\nfamly = \"zonal\"\n", "famly"),
        (
            "experiment = \"scaling\"\nfamily = \"random-wave\"\n",
            "`seed`",
        ),
        (
            "experiment = \"scaling\"\nfamily = \"zonal\"\nk = [40, 20]\n",
            "`k`",
        ),
        (
            "experiment = \"related\"\nfamily = \"zonal\"\ndelta = 2.0\n",
            "`delta`",
        ),
        ("experiment = [\n", "config.toml"),
    ];
    for (src, needle) in cases {
        let cfg = dir.path().join("config.toml");
        std::fs::write(&cfg, src).unwrap();
        let o = eigenlab(
            &["run", "--config", cfg.to_str().unwrap()],
            &dir.path().join("out"),
        );
        let err = String::from_utf8_lossy(&o.stderr);
        assert_eq!(o.status.code(), Some(2), "{src}: {err}");
        assert!(
            err.contains("config error") && err.contains(needle),
            "{src}: {err}"
        );
    }
    assert!(!dir.path().join("out").exists());
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_eigenlab"))
        .args(["run", "sogge", "--family", "zonal", "--k", "10,20"])
        .arg("--out")
        .arg(dir.path())
        .env("EIGENLAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("EIGENLAB_THREADS"));
}

#[test]
fn reruns_are_byte_identical_and_hashed() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = a.path().join("sogge.toml");
    std::fs::write(
        &cfg,
        "experiment = \"sogge\"\nfamily = \"zonal\"\nk = [25, 50, 100]\nx = \"pole\"\n",
    )
    .unwrap();
    let run = |out: &Path| {
        let o = eigenlab(
            &["run", "--config", cfg.to_str().unwrap(), "--delta", "0.25"],
            out,
        );
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
    };
    run(&a.path().join("out"));
    run(&b.path().join("out"));
    let fa = files(&a.path().join("out"));
    assert_eq!(fa, files(&b.path().join("out")));

    let manifest: serde_json::Value =
        serde_json::from_slice(&fa.iter().find(|(n, _)| n == "manifest.json").unwrap().1).unwrap();
    // the flag overrides the file, and defaults are materialized
    assert_eq!(manifest["config.delta"], 0.25);
    assert_eq!(manifest["config.k"], serde_json::json!([25, 50, 100]));
    let names = manifest["files"].as_array().unwrap();
    assert_eq!(names.len(), fa.len() - 1);
    for (name, hash) in names.iter().zip(manifest["sha256"].as_array().unwrap()) {
        let bytes = &fa
            .iter()
            .find(|(n, _)| n == name.as_str().unwrap())
            .unwrap()
            .1;
        let hex: String = Sha256::digest(bytes)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
        assert_eq!(hash.as_str().unwrap(), hex);
    }
    let record: serde_json::Value =
        serde_json::from_slice(&fa.iter().find(|(n, _)| n == "sogge.json").unwrap().1).unwrap();
    assert_eq!(record["config.delta"], 0.25);
    assert_eq!(record["config.x"], serde_json::json!([0.0, 0.0]));
    assert_eq!(record["experiment"], "sogge");
}

#[test]
fn scaling_example_writes_the_zonal_exponent() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = eigenlab(
        &[
            "run",
            "scaling",
            "--family",
            "zonal",
            "--k",
            "25,50,100,200,400",
        ],
        &out,
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let csv = std::fs::read_to_string(out.join("scaling.csv")).unwrap();
    assert!(csv.starts_with("family,k,seed,lambda,h,sup_value"));
    assert_eq!(csv.lines().count(), 6);
    let rec: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out.join("scaling.json")).unwrap()).unwrap();
    let e = rec["result.fit.exponent"].as_f64().unwrap();
    assert!((e - 0.5).abs() < 0.03, "{e}");
    assert_eq!(rec["result.verdict.verdict"], "Consistent");
}

#[test]
fn related_scar_example_is_admissible_with_vanishing_lhs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = eigenlab(
        &[
            "run",
            "related",
            "--family",
            "highest-weight",
            "--x",
            "equator-offset",
            "--delta",
            "0.3",
        ],
        &out,
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let rec: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out.join("related.json")).unwrap()).unwrap();
    assert_eq!(rec["result.lhs_decreasing"], true);
    assert_eq!(rec["result.below_cutoff"], true);
    assert!(rec["result.lhs_trend"].as_f64().unwrap() < 0.0);
    for f in [
        "related.csv",
        "related_cover.csv",
        "related_lift.csv",
        "related_lift.json",
        "manifest.json",
    ] {
        assert!(out.join(f).exists(), "{f}");
    }
}
