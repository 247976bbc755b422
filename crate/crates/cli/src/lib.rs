//! Orchestration behind the `sgkdv` binary.
//!
//! A run reads one manifest, applies the command-line overrides, executes
//! the experiment on a dedicated thread pool and writes its artifacts into
//! the output directory: data as CSV, the resolved manifest as TOML and a
//! `summary.json` with every gate the experiment exercised. Every file is
//! written through a temporary file and a rename.

mod experiments;
mod report;

use std::env;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sgkdv::io::atomic_write;
use sgkdv::manifest::{parse_manifest, Experiment, Manifest};

pub use report::{report, ReportSummary};

/// Environment variable that overrides the manifest's output directory.
pub const OUT_ENV: &str = "SGKDV_OUT";

/// Command-line overrides of a manifest.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Gate {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub experiment: String,
    pub seed: u64,
    pub warnings: Vec<String>,
    pub gates: Vec<Gate>,
    pub passed: bool,
    pub results: serde_json::Value,
}

/// Where a run writes its files.
pub(crate) struct Output {
    dir: PathBuf,
}

impl Output {
    pub(crate) fn new(dir: PathBuf) -> Result<Self> {
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Self { dir })
    }

    pub(crate) fn write(&self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        atomic_write(&path, bytes).with_context(|| format!("writing {}", path.display()))
    }

    pub(crate) fn json<T: Serialize>(&self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    /// Render with a writer-based serializer, then write atomically.
    pub(crate) fn with<F>(&self, name: &str, f: F) -> Result<()>
    where
        F: FnOnce(&mut Vec<u8>) -> sgkdv::Result<()>,
    {
        let mut buf = Vec::new();
        f(&mut buf).with_context(|| format!("rendering {name}"))?;
        self.write(name, &buf)
    }
}

/// Read, parse and override a manifest for `experiment`.
pub fn load_manifest(path: &Path, experiment: Experiment, o: &Overrides) -> Result<(Manifest, Vec<String>)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let parsed = parse_manifest(&text).with_context(|| format!("parsing {}", path.display()))?;
    let mut m = parsed.manifest;
    if m.experiment != experiment {
        bail!(
            "manifest {} describes a `{}` experiment, not `{}`",
            path.display(),
            m.experiment.name(),
            experiment.name()
        );
    }
    if let Some(seed) = o.seed {
        m.noise.seed = seed;
        m.probe.data_seed = seed;
    }
    if let Some(out) = o.out.clone().or_else(|| env::var_os(OUT_ENV).map(PathBuf::from)) {
        m.output = out;
    }
    Ok((m, parsed.warnings))
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        if j == 0 {
            bail!("--jobs must be at least 1");
        }
        b = b.num_threads(j);
    }
    Ok(b.build()?)
}

/// Run a validated manifest and write its artifacts.
pub fn run(manifest: &Manifest, warnings: Vec<String>, jobs: Option<usize>) -> Result<Summary> {
    manifest.validate()?;
    let out = Output::new(manifest.output.clone())?;
    out.write("manifest.toml", manifest.to_toml()?.as_bytes())?;
    let (gates, results) = pool(jobs)?.install(|| experiments::dispatch(manifest, &out))?;
    let seed = match manifest.experiment {
        Experiment::ProbeKato | Experiment::ProbeStrichartz => manifest.probe.data_seed,
        _ => manifest.noise.seed,
    };
    let summary = Summary {
        experiment: manifest.experiment.name().to_string(),
        seed,
        warnings,
        passed: gates.iter().all(|g| g.passed),
        gates,
        results,
    };
    out.json("summary.json", &summary)?;
    Ok(summary)
}

/// Load, override and run in one call.
pub fn run_path(path: &Path, experiment: Experiment, o: &Overrides) -> Result<Summary> {
    let (m, warnings) = load_manifest(path, experiment, o)?;
    run(&m, warnings, o.jobs)
}
