use std::fs;
use std::path::Path;
use std::process::Command;

use sgkdv::io::{read_trace_binary, read_trace_csv};
use sgkdv::manifest::{parse_manifest, Experiment};
use sgkdv_cli::{report, run_path, Overrides};

const SIMULATE: &str = r#"
schema_version = 1
experiment = "simulate"
[grid]
n = 64
length = 30.0
[solver]
dt = 0.01
horizon = 0.2
stride = 5
"#;

const ENSEMBLE: &str = r#"
schema_version = 1
experiment = "ensemble"
estimators = ["mass", "energy"]
[grid]
n = 64
length = 30.0
[solver]
dt = 0.01
horizon = 0.2
stride = 5
[noise]
seed = 11
[noise.envelope]
kind = "power"
gamma = 0.7
[noise.profile]
shape = "gaussian"
amplitude = 0.3
width = 1.0
[ensemble]
paths = 4
first_stream = 0
"#;

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn out(dir: &Path, name: &str) -> Overrides {
    Overrides {
        out: Some(dir.join(name)),
        jobs: Some(2),
        ..Overrides::default()
    }
}

#[test]
fn deterministic_simulation_is_bit_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let m = write(tmp.path(), "sim.toml", SIMULATE);
    let a = run_path(&m, Experiment::Simulate, &out(tmp.path(), "a")).unwrap();
    let b = run_path(&m, Experiment::Simulate, &out(tmp.path(), "b")).unwrap();
    assert!(a.passed, "{:?}", a.gates);
    for f in ["trace.csv", "trace.bin", "energy.csv", "summary.json"] {
        assert_eq!(
            fs::read(tmp.path().join("a").join(f)).unwrap(),
            fs::read(tmp.path().join("b").join(f)).unwrap(),
            "{f} differs"
        );
    }
    assert_eq!(a, b);

    // both dumps describe the same trace
    let dir = tmp.path().join("a");
    let grid = sgkdv::Grid::new(64, 30.0).unwrap();
    let csv = read_trace_csv(fs::File::open(dir.join("trace.csv")).unwrap(), &grid).unwrap();
    let bin = read_trace_binary(fs::File::open(dir.join("trace.bin")).unwrap(), 0.0).unwrap();
    assert_eq!(csv.snapshots(), bin.snapshots());
    assert_eq!(csv.len(), 5);
}

#[test]
fn resolved_manifest_records_overrides() {
    let tmp = tempfile::tempdir().unwrap();
    let m = write(tmp.path(), "ens.toml", ENSEMBLE);
    let o = Overrides {
        seed: Some(99),
        ..out(tmp.path(), "run")
    };
    let s = run_path(&m, Experiment::Ensemble, &o).unwrap();
    assert_eq!(s.seed, 99);
    let text = fs::read_to_string(tmp.path().join("run/manifest.toml")).unwrap();
    let resolved = parse_manifest(&text).unwrap().manifest;
    assert_eq!(resolved.noise.seed, 99);
    assert_eq!(resolved.output, tmp.path().join("run"));
    assert!(run_path(&m, Experiment::Scatter, &o).is_err());
}

#[test]
fn ensemble_shards_merge_to_the_single_run() {
    let tmp = tempfile::tempdir().unwrap();
    let whole = write(tmp.path(), "whole.toml", ENSEMBLE);
    let first = write(tmp.path(), "first.toml", &ENSEMBLE.replace("paths = 4", "paths = 2"));
    let second = write(
        tmp.path(),
        "second.toml",
        &ENSEMBLE
            .replace("paths = 4", "paths = 2")
            .replace("first_stream = 0", "first_stream = 2"),
    );
    run_path(&whole, Experiment::Ensemble, &out(tmp.path(), "whole")).unwrap();
    run_path(&second, Experiment::Ensemble, &out(tmp.path(), "s2")).unwrap();
    run_path(&first, Experiment::Ensemble, &out(tmp.path(), "s1")).unwrap();
    let merged = tmp.path().join("merged");
    let r = report(&[tmp.path().join("s2"), tmp.path().join("s1")], &merged).unwrap();
    assert_eq!(r.merged.len(), 2);
    for f in ["partial-mass.json", "partial-energy.json", "ensemble-mass.csv", "ensemble-energy.csv"] {
        assert_eq!(
            fs::read(tmp.path().join("whole").join(f)).unwrap(),
            fs::read(merged.join(f)).unwrap(),
            "{f} differs"
        );
    }

    // shards of different models do not merge
    let other = write(tmp.path(), "other.toml", &ENSEMBLE.replace("gamma = 0.7", "gamma = 0.8"));
    run_path(&other, Experiment::Ensemble, &out(tmp.path(), "other")).unwrap();
    assert!(report(&[tmp.path().join("s1"), tmp.path().join("other")], &merged).is_err());
}

#[test]
fn oscint_emits_the_documented_columns() {
    let tmp = tempfile::tempdir().unwrap();
    let m = write(
        tmp.path(),
        "osc.toml",
        "schema_version = 1\nexperiment = \"oscint\"\n[oscint]\npairs = [[3.0, 0.0]]\n\
         x = [100.0, 200.0, 400.0, 800.0, 1600.0, 3200.0, 10000.0]\n",
    );
    let s = run_path(&m, Experiment::Oscint, &out(tmp.path(), "o")).unwrap();
    assert_eq!(s.gates.len(), 2);
    let text = fs::read_to_string(tmp.path().join("o/oscint_b3_a0.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "x,Re,Im,abs_error,envelope,predicted_bound");
    assert_eq!(lines.count(), 14);
    let fits: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("o/decay_fits.json")).unwrap()).unwrap();
    assert_eq!(fits[0]["predicted_exponent"], -0.25);
}

#[test]
fn binary_reports_errors_as_json() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = write(
        tmp.path(),
        "bad.toml",
        "schema_version = 1\nexperiment = \"ensemble\"\nestimators = [\"energy\"]\n[solver]\nk = 5\n[ensemble]\npaths = 1\n",
    );
    let o = Command::new(env!("CARGO_BIN_EXE_sgkdv"))
        .args(["ensemble", "--manifest"])
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let record: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    let causes = record["causes"].as_array().unwrap();
    assert_eq!(causes.len(), 2, "{record}");

    let sim = write(tmp.path(), "sim.toml", SIMULATE);
    let o = Command::new(env!("CARGO_BIN_EXE_sgkdv"))
        .args(["simulate", "--jobs", "1", "--manifest"])
        .arg(&sim)
        .env(sgkdv_cli::OUT_ENV, tmp.path().join("env-out"))
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(tmp.path().join("env-out/summary.json").exists());
}

#[test]
fn shipped_manifests_are_valid() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../manifests");
    let mut count = 0;
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let parsed = parse_manifest(&fs::read_to_string(&path).unwrap())
            .unwrap_or_else(|e| panic!("{}: {e:?}", path.display()));
        assert!(parsed.warnings.is_empty(), "{}: {:?}", path.display(), parsed.warnings);
        let stem = path.file_stem().unwrap().to_str().unwrap();
        assert!(
            stem.starts_with(parsed.manifest.experiment.name()) || stem == "soliton",
            "{stem}"
        );
        count += 1;
    }
    assert_eq!(count, 9);
}
