//! Aggregate finished run directories: collect their gates and merge the
//! ensemble partials of compatible runs into one set of statistics.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sgkdv::estimates::EnsemblePartial;
use sgkdv::io::write_ensemble_csv;
use sgkdv::manifest::{parse_manifest, Manifest};

use crate::experiments::ensemble_gates;
use crate::{Gate, Output, Summary};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub runs: Vec<String>,
    pub gates: Vec<Gate>,
    pub passed: bool,
    pub merged: Vec<serde_json::Value>,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// The manifest with the fields that may differ between shards blanked.
fn shard_key(m: &Manifest) -> Result<String> {
    let mut m = m.clone();
    m.output = PathBuf::new();
    m.ensemble.first_stream = 0;
    m.ensemble.paths = 0;
    Ok(m.to_toml()?)
}

pub fn report(dirs: &[PathBuf], out: &Path) -> Result<ReportSummary> {
    if dirs.is_empty() {
        bail!("report needs at least one run directory");
    }
    let mut gates = Vec::new();
    let mut runs = Vec::new();
    let mut partials: BTreeMap<String, EnsemblePartial> = BTreeMap::new();
    let mut model: Option<(String, Manifest)> = None;
    for dir in dirs {
        let summary: Summary = read_json(&dir.join("summary.json"))?;
        let label = dir.display().to_string();
        gates.extend(summary.gates.iter().map(|g| Gate {
            name: format!("{label}: {}", g.name),
            ..g.clone()
        }));
        runs.push(label);
        if summary.experiment != "ensemble" {
            continue;
        }
        let text = fs::read_to_string(dir.join("manifest.toml"))?;
        let m = parse_manifest(&text)
            .with_context(|| format!("manifest in {}", dir.display()))?
            .manifest;
        let key = shard_key(&m)?;
        match &model {
            Some((k, _)) if *k != key => bail!("{} was run with a different model", dir.display()),
            Some(_) => {}
            None => model = Some((key, m.clone())),
        }
        for e in &m.estimators {
            let p: EnsemblePartial = read_json(&dir.join(format!("partial-{}.json", e.name())))?;
            let merged = match partials.remove(e.name()) {
                Some(acc) => acc.merge(p)?,
                None => p,
            };
            partials.insert(e.name().to_string(), merged);
        }
    }
    let out = Output::new(out.to_path_buf())?;
    let mut merged = Vec::new();
    if let Some((_, m)) = model {
        let list: Vec<EnsemblePartial> = partials.into_values().collect();
        for p in &list {
            out.json(&format!("partial-{}.json", p.estimator), p)?;
            let s = p.finish()?;
            out.with(&format!("ensemble-{}.csv", p.estimator), |w| write_ensemble_csv(w, &s))?;
        }
        let m0 = sgkdv::solver::mass(&m.initial_field()?);
        let (g, stats) = ensemble_gates(&list, m0, &m.noise_spec()?)?;
        gates.extend(g.into_iter().map(|g| Gate {
            name: format!("merged: {}", g.name),
            ..g
        }));
        merged = stats;
    }
    let summary = ReportSummary {
        runs,
        passed: gates.iter().all(|g| g.passed),
        gates,
        merged,
    };
    out.json("report.json", &summary)?;
    Ok(summary)
}
