use std::fs;
use std::path::{Path, PathBuf};

use posaffine_cli::pipeline::{ALPHA_FILE, DEF_FILE, DOMAIN_FILE, REPORT_FILE, REP_FILE, TILES_FILE};
use posaffine_cli::{run_pipeline, RunConfig, EXIT_CONFIG};
use serde_json::{json, Value};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn small_config(dir: &Path, n: usize, extra: Value) -> PathBuf {
    let mut cfg = json!({
        "n": n,
        "schottky": data("schottky_rank2.json"),
        "scales": ["1", "1"],
        "max_len": 4,
        "disjoint_samples": 100,
        "pairing_samples": 50,
        "tile_points": 300,
        "radius": 6.0,
        "max_depth": 48,
        "relocation_points": 4,
        "relocation_len": 2,
        "seed": 3,
        "output": dir.join("out"),
    });
    for (k, v) in extra.as_object().unwrap() {
        cfg[k] = v.clone();
    }
    let path = dir.join("run.json");
    fs::write(&path, serde_json::to_string_pretty(&cfg).unwrap()).unwrap();
    path
}

#[test]
fn pipeline_passes_and_writes_every_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig::load(&small_config(dir.path(), 1, json!({}))).unwrap();
    let report = run_pipeline(&cfg).unwrap();
    assert!(report.passed(), "{report:?}");
    for f in [REP_FILE, DEF_FILE, ALPHA_FILE, DOMAIN_FILE, TILES_FILE, REPORT_FILE] {
        assert!(cfg.output.join(f).is_file(), "missing {f}");
    }
    let csv = fs::read_to_string(cfg.output.join(ALPHA_FILE)).unwrap();
    assert_eq!(csv.lines().next(), Some("word,length,t,alpha,alpha/t"));
    for stage in ["representation", "cocycle", "margulis", "domain", "tiling"] {
        assert!(report.stage(stage).is_some(), "no {stage} stage");
    }
}

#[test]
fn pipeline_passes_at_n2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig::load(&small_config(dir.path(), 2, json!({"max_len": 3}))).unwrap();
    let report = run_pipeline(&cfg).unwrap();
    assert!(report.passed(), "{report:?}");
}

fn strip_timings(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timings");
    v
}

#[test]
fn runs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = small_config(dir.path(), 1, json!({}));
    let mut a = RunConfig::load(&path).unwrap();
    let mut b = a.clone();
    a.output = dir.path().join("a");
    b.output = dir.path().join("b");
    run_pipeline(&a).unwrap();
    run_pipeline(&b).unwrap();
    for f in [REP_FILE, DEF_FILE, ALPHA_FILE, DOMAIN_FILE, TILES_FILE] {
        assert_eq!(fs::read(a.output.join(f)).unwrap(), fs::read(b.output.join(f)).unwrap(), "{f} differs");
    }
    let report = |p: &Path| strip_timings(serde_json::from_slice(&fs::read(p.join(REPORT_FILE)).unwrap()).unwrap());
    assert_eq!(report(&a.output), report(&b.output));
}

#[test]
fn bad_configs_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    for extra in [
        json!({"scales": ["0", "1"]}),
        json!({"scales": ["1"]}),
        json!({"n": 0}),
        json!({"backend": "exact"}),
        json!({"eps_sign": 1e-3, "eps_eq": 1e-6}),
        json!({"unknown_key": 1}),
    ] {
        let path = small_config(dir.path(), 1, extra.clone());
        let err = RunConfig::load(&path).and_then(|cfg| run_pipeline(&cfg).map(|_| ()));
        let err = err.expect_err(&format!("{extra} accepted"));
        assert_eq!(err.exit_code(), EXIT_CONFIG, "{extra}: {err}");
    }
}
