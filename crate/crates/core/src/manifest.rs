//! Run manifests: one strict TOML file describes a whole experiment.
//!
//! Unknown keys are errors (collected by [`parse_manifest`]; deserializing
//! a [`Manifest`] by other means does not check them), every omitted key
//! has a default, and
//! [`parse_manifest`] reports every problem it finds rather than stopping
//! at the first. The resolved manifest (defaults filled) serializes back to
//! TOML that parses to the same value.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimates::{validate_kato, Estimator, ProbeConfig, StrichartzPair};
use crate::noise::{Envelope, NoiseSpec};
use crate::oscillatory::{default_decay_grid, OscQuery};
use crate::scattering::PullbackSpace;
use crate::solver::{soliton, Sign, SolverConfig};
use crate::spectral::{Exponent, Field, Grid};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Simulate,
    Oscint,
    ProbeKato,
    ProbeStrichartz,
    Beta,
    Ensemble,
    Scatter,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Simulate => "simulate",
            Experiment::Oscint => "oscint",
            Experiment::ProbeKato => "probe-kato",
            Experiment::ProbeStrichartz => "probe-strichartz",
            Experiment::Beta => "beta",
            Experiment::Ensemble => "ensemble",
            Experiment::Scatter => "scatter",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridSection {
    pub n: usize,
    pub length: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        Self { n: 256, length: 40.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverSection {
    pub k: u32,
    pub sign: Sign,
    pub dt: f64,
    pub dealias: f64,
    /// Final time of the run.
    pub horizon: f64,
    /// Steps between stored snapshots.
    pub stride: usize,
}

impl Default for SolverSection {
    fn default() -> Self {
        Self {
            k: 4,
            sign: Sign::Defocusing,
            dt: 0.01,
            dealias: 2.0 / 3.0,
            horizon: 1.0,
            stride: 10,
        }
    }
}

/// How a profile's `amplitude` is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    /// Multiplies the shape directly.
    Peak,
    /// Target `L²` norm of the sampled field.
    L2,
    /// Target `H¹` norm of the sampled field.
    H1,
}

/// A spatial profile, for the initial datum or the noise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Profile {
    /// `a · e^{-(x-c)²/(2w²)}`.
    Gaussian {
        amplitude: f64,
        width: f64,
        #[serde(default)]
        center: f64,
        #[serde(default = "peak")]
        scale: Scale,
    },
    /// `a · ((x-c)/w) · e^{-(x-c)²/(2w²)}`.
    OddGaussian {
        amplitude: f64,
        width: f64,
        #[serde(default)]
        center: f64,
        #[serde(default = "peak")]
        scale: Scale,
    },
    /// Travelling wave of the focusing equation with speed `c`.
    Soliton {
        speed: f64,
        #[serde(default)]
        center: f64,
    },
    Zero {},
}

fn peak() -> Scale {
    Scale::Peak
}

impl Profile {
    pub fn sample(&self, grid: &Grid, k: u32, sign: Sign) -> Result<Field> {
        let (a, w, c, scale, odd) = match *self {
            Profile::Zero {} => return Ok(Field::zeros(grid)),
            Profile::Soliton { speed, center } => return soliton(k, sign, speed, center, grid),
            Profile::Gaussian { amplitude, width, center, scale } => (amplitude, width, center, scale, false),
            Profile::OddGaussian { amplitude, width, center, scale } => (amplitude, width, center, scale, true),
        };
        if !(w > 0.0) {
            return Err(Error::InvalidArgument(format!("profile width must be positive, got {w}")));
        }
        let shape = Field::from_fn(grid, |x| {
            let s = (x - c) / w;
            let g = (-0.5 * s * s).exp();
            if odd {
                s * g
            } else {
                g
            }
        });
        let norm = match scale {
            Scale::Peak => return Ok(shape.scaled(a)),
            Scale::L2 => PullbackSpace::L2.norm(&shape),
            Scale::H1 => PullbackSpace::H1.norm(&shape),
        };
        if norm == 0.0 {
            return Err(Error::InvalidArgument("profile vanishes on the grid".into()));
        }
        Ok(shape.scaled(a / norm))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NoiseSection {
    pub profile: Profile,
    #[serde(deserialize_with = "strict_envelope")]
    pub envelope: Envelope,
    pub seed: u64,
}

// unit variants of a tagged enum would otherwise swallow stray keys
fn strict_envelope<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Envelope, D::Error> {
    use serde::de::Error as _;
    let table = toml::Table::deserialize(d)?;
    if table.get("kind").and_then(|k| k.as_str()) == Some("zero") && table.len() > 1 {
        return Err(D::Error::custom("envelope kind `zero` takes no parameters"));
    }
    Envelope::deserialize(toml::Value::Table(table)).map_err(D::Error::custom)
}

impl Default for NoiseSection {
    fn default() -> Self {
        Self {
            profile: Profile::Zero {},
            envelope: Envelope::Zero,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OscintSection {
    /// `(b, α)` pairs.
    pub pairs: Vec<[f64; 2]>,
    /// `|x|` sample points of the decay fit.
    pub x: Vec<f64>,
    /// Allowed gap between fitted and predicted slopes.
    pub tolerance: f64,
}

impl Default for OscintSection {
    fn default() -> Self {
        let mut pairs: Vec<[f64; 2]> = [-0.75, -0.6, 0.0, 0.25, 0.5, 1.0, 1.4]
            .iter()
            .map(|&a| [3.0, a])
            .collect();
        pairs.extend([-0.75, 0.0, 0.5].iter().map(|&a| [2.0, a]));
        Self {
            pairs,
            x: default_decay_grid(),
            tolerance: 0.1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KatoEntry {
    pub p: Exponent,
    pub q: Exponent,
    pub alpha: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrichartzEntry {
    pub p: Exponent,
    pub beta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProbeSection {
    pub n: usize,
    pub length: f64,
    pub horizon: f64,
    pub dt: f64,
    pub data: usize,
    pub data_seed: u64,
    /// Largest accepted relative drift under refinement.
    pub tolerance: f64,
    pub kato: Vec<KatoEntry>,
    pub strichartz: Vec<StrichartzEntry>,
}

impl Default for ProbeSection {
    fn default() -> Self {
        Self {
            n: 1024,
            length: 128.0,
            horizon: 2.0,
            dt: 0.02,
            data: 100,
            data_seed: 2024,
            tolerance: 0.05,
            kato: vec![
                KatoEntry {
                    p: Exponent::Finite(5.0),
                    q: Exponent::Finite(10.0),
                    alpha: 0.0,
                },
                KatoEntry {
                    p: Exponent::Infinity,
                    q: Exponent::Finite(2.0),
                    alpha: 1.0,
                },
            ],
            strichartz: vec![StrichartzEntry {
                p: Exponent::Infinity,
                beta: 0.0,
            }],
        }
    }
}

impl ProbeSection {
    pub fn config(&self) -> Result<ProbeConfig> {
        ProbeConfig::new(self.n, self.length, self.horizon, self.dt)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EnsembleSection {
    pub paths: usize,
    /// First noise stream; members use `first_stream..first_stream + paths`.
    pub first_stream: u64,
}

impl Default for EnsembleSection {
    fn default() -> Self {
        Self {
            paths: 100,
            first_stream: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BetaSection {
    pub paths: usize,
    /// Window ends `T` at which the functionals are evaluated.
    pub times: Vec<f64>,
}

impl Default for BetaSection {
    fn default() -> Self {
        Self {
            paths: 20,
            times: vec![1.0, 2.0, 4.0, 8.0],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScatterSection {
    pub paths: usize,
    /// Pullback times of the Cauchy increments.
    pub checkpoints: Vec<f64>,
    /// Restart times of the `v` equation.
    pub v_times: Vec<f64>,
    /// Final Cauchy increment accepted by the gate.
    pub final_increment: f64,
    /// Fraction of paths that must pass each gate.
    pub pass_fraction: f64,
    /// Small-data bound on `‖u₀‖₂` for `k = 4`.
    pub delta: f64,
}

impl Default for ScatterSection {
    fn default() -> Self {
        Self {
            paths: 20,
            checkpoints: vec![10.0, 20.0, 40.0],
            v_times: vec![5.0, 10.0, 20.0],
            final_increment: 1e-3,
            pass_fraction: 0.9,
            delta: 0.1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub experiment: Experiment,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    #[serde(default)]
    pub estimators: Vec<Estimator>,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default = "default_initial")]
    pub initial: Profile,
    #[serde(default)]
    pub noise: NoiseSection,
    #[serde(default)]
    pub oscint: OscintSection,
    #[serde(default)]
    pub probe: ProbeSection,
    #[serde(default)]
    pub ensemble: EnsembleSection,
    #[serde(default)]
    pub beta: BetaSection,
    #[serde(default)]
    pub scatter: ScatterSection,
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

fn default_initial() -> Profile {
    Profile::Gaussian {
        amplitude: 0.1,
        width: 1.0,
        center: 0.0,
        scale: Scale::L2,
    }
}

/// A validated manifest and the non-fatal remarks about it.
#[derive(Clone, Debug, PartialEq)]
pub struct Parsed {
    pub manifest: Manifest,
    pub warnings: Vec<String>,
}

/// Parse and validate; on failure the error lists every problem found.
pub fn parse_manifest(text: &str) -> Result<Parsed> {
    let mut errors = Vec::new();
    let de = toml::Deserializer::parse(text).map_err(|e| Error::Manifest(vec![e.to_string()]))?;
    let parsed: std::result::Result<Manifest, _> = serde_ignored::deserialize(de, |path| {
        errors.push(format!("unknown key `{path}`"));
    });
    let manifest = match parsed {
        Ok(m) => m,
        Err(e) => {
            errors.push(e.to_string().trim().to_string());
            return Err(Error::Manifest(errors));
        }
    };
    if !errors.is_empty() {
        return Err(Error::Manifest(errors));
    }
    let warnings = manifest.validate()?;
    Ok(Parsed { manifest, warnings })
}

impl Manifest {
    /// The manifest with nothing but the required keys.
    pub fn minimal(experiment: Experiment) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            experiment,
            output: default_output(),
            estimators: Vec::new(),
            grid: GridSection::default(),
            solver: SolverSection::default(),
            initial: default_initial(),
            noise: NoiseSection::default(),
            oscint: OscintSection::default(),
            probe: ProbeSection::default(),
            ensemble: EnsembleSection::default(),
            beta: BetaSection::default(),
            scatter: ScatterSection::default(),
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Manifest(vec![e.to_string()]))
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.grid.n, self.grid.length)
    }

    pub fn solver_config(&self) -> Result<SolverConfig> {
        let s = &self.solver;
        SolverConfig::with_dealias(&self.grid()?, s.k, s.sign, s.dt, s.dealias)
    }

    /// Number of solver steps up to the horizon.
    pub fn steps(&self) -> usize {
        (self.solver.horizon / self.solver.dt).round() as usize
    }

    pub fn initial_field(&self) -> Result<Field> {
        self.initial.sample(&self.grid()?, self.solver.k, self.solver.sign)
    }

    pub fn noise_spec(&self) -> Result<NoiseSpec> {
        let phi = self.noise.profile.sample(&self.grid()?, self.solver.k, self.solver.sign)?;
        NoiseSpec::new(phi, self.noise.envelope, self.noise.seed)
    }

    /// Every constraint violation as an error; remarks as warnings.
    pub fn validate(&self) -> Result<Vec<String>> {
        let mut errors = Vec::new();
        let mut warnings = Vec::new();
        let mut check = |r: Result<()>| {
            if let Err(e) = r {
                errors.push(e.to_string());
            }
        };
        if self.schema_version != SCHEMA_VERSION {
            check(Err(Error::InvalidArgument(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            ))));
        }
        let solver = self.solver_config();
        check(solver.as_ref().map(|_| ()).map_err(clone_err));
        let s = &self.solver;
        if self.uses_solver() {
            let ratio = s.horizon / s.dt;
            if !(s.horizon > 0.0) || (ratio - ratio.round()).abs() > 1e-9 * ratio.max(1.0) {
                check(Err(Error::InvalidArgument(format!(
                    "horizon {} must be a positive multiple of dt {}",
                    s.horizon, s.dt
                ))));
            } else if s.stride == 0 || !self.steps().is_multiple_of(s.stride) {
                check(Err(Error::InvalidArgument(format!(
                    "snapshot stride {} must divide the step count {}",
                    s.stride,
                    self.steps()
                ))));
            }
            if solver.is_ok() {
                check(self.initial_field().map(|_| ()));
                check(self.noise_spec().map(|_| ()));
            }
        }
        let energy_like = self
            .estimators
            .iter()
            .any(|e| matches!(e, Estimator::Energy | Estimator::MassEnergy | Estimator::Drift));
        if s.k % 2 == 1 && (energy_like || self.experiment == Experiment::Scatter && s.k > 4) {
            check(Err(Error::InvalidArgument(format!(
                "energy experiments need even k (the energy is sign-definite only then), got k = {}",
                s.k
            ))));
        }
        if !self.estimators.is_empty() && self.experiment != Experiment::Ensemble {
            warnings.push(format!(
                "estimators are only used by ensemble runs, not by {}",
                self.experiment.name()
            ));
        }
        match self.experiment {
            Experiment::Simulate => {}
            Experiment::Oscint => {
                let o = &self.oscint;
                if o.pairs.is_empty() {
                    check(Err(Error::InvalidArgument("oscint needs at least one (b, alpha) pair".into())));
                }
                for &[b, alpha] in &o.pairs {
                    check(OscQuery::new(b, alpha, 0.0).validate());
                }
                if o.x.len() < 7 || o.x.iter().any(|&x| !(x >= 100.0)) || o.x.windows(2).any(|w| w[1] <= w[0]) {
                    check(Err(Error::InvalidArgument(
                        "oscint x grid needs at least 7 increasing points >= 100".into(),
                    )));
                }
            }
            Experiment::ProbeKato | Experiment::ProbeStrichartz => {
                let p = &self.probe;
                check(p.config().map(|_| ()));
                if p.data == 0 {
                    check(Err(Error::InvalidArgument("probe needs at least one datum".into())));
                }
                if self.experiment == Experiment::ProbeKato {
                    if p.kato.is_empty() {
                        check(Err(Error::InvalidArgument("probe-kato needs a [[probe.kato]] entry".into())));
                    }
                    for t in &p.kato {
                        let v = validate_kato(t.p, t.q, t.alpha);
                        if !v.admissible {
                            check(Err(Error::InvalidArgument(format!(
                                "Kato triple ({}, {}, {}): {}",
                                t.p, t.q, t.alpha, v.diagnostic
                            ))));
                        }
                    }
                } else {
                    if p.strichartz.is_empty() {
                        check(Err(Error::InvalidArgument(
                            "probe-strichartz needs a [[probe.strichartz]] entry".into(),
                        )));
                    }
                    for e in &p.strichartz {
                        check(StrichartzPair::from_p(e.p, e.beta).map(|_| ()));
                    }
                }
            }
            Experiment::Beta => {
                let b = &self.beta;
                if b.paths == 0 || b.times.is_empty() {
                    check(Err(Error::InvalidArgument("beta needs paths >= 1 and some times".into())));
                }
                if b.times.iter().any(|&t| !(t > 0.0 && t <= s.horizon + 1e-12)) {
                    check(Err(Error::InvalidArgument(format!(
                        "beta times must lie in (0, horizon = {}]",
                        s.horizon
                    ))));
                }
            }
            Experiment::Ensemble => {
                if self.ensemble.paths < 2 {
                    check(Err(Error::InvalidArgument("an ensemble needs at least 2 paths".into())));
                }
                if self.estimators.is_empty() {
                    check(Err(Error::InvalidArgument("ensemble needs at least one estimator".into())));
                }
            }
            Experiment::Scatter => {
                let c = &self.scatter;
                let increasing = |v: &[f64]| v.len() >= 3 && v[0] > 0.0 && v.windows(2).all(|w| w[1] > w[0]);
                if !increasing(&c.checkpoints) || !increasing(&c.v_times) {
                    check(Err(Error::InvalidArgument(
                        "scatter needs at least 3 increasing positive checkpoints and v times".into(),
                    )));
                }
                let last = c.checkpoints.iter().chain(&c.v_times).cloned().fold(0.0, f64::max);
                if last > s.horizon + 1e-12 {
                    check(Err(Error::InvalidArgument(format!(
                        "scatter times reach {last}, beyond the horizon {}",
                        s.horizon
                    ))));
                }
                if c.paths == 0 || !(c.pass_fraction > 0.0 && c.pass_fraction <= 1.0) {
                    check(Err(Error::InvalidArgument(
                        "scatter needs paths >= 1 and pass_fraction in (0, 1]".into(),
                    )));
                }
                match self.noise.envelope.gamma() {
                    Some(g) if g > 2.0 / 3.0 => {}
                    Some(g) => warnings.push(format!(
                        "gamma = {g} is at or below 2/3; forward scattering is only expected above it"
                    )),
                    None => {}
                }
                if s.k == 4 && solver.is_ok() {
                    if let Ok(u0) = self.initial_field() {
                        let m = u0.l2_norm();
                        if m > c.delta {
                            check(Err(Error::InvalidArgument(format!(
                                "k = 4 scattering runs need small data: ‖u0‖₂ = {m} > delta = {}",
                                c.delta
                            ))));
                        }
                    }
                }
            }
        }
        if errors.is_empty() {
            Ok(warnings)
        } else {
            Err(Error::Manifest(errors))
        }
    }

    fn uses_solver(&self) -> bool {
        matches!(
            self.experiment,
            Experiment::Simulate | Experiment::Beta | Experiment::Ensemble | Experiment::Scatter
        )
    }
}

fn clone_err(e: &Error) -> Error {
    Error::InvalidArgument(e.to_string())
}
