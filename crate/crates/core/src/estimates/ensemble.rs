//! Monte Carlo ensembles over independent noise streams.
//!
//! Members are keyed by their stream id and kept until the statistics are
//! formed, in ascending id order. Merging partial ensembles is a union of
//! maps, so the final numbers are bit-identical whatever the execution or
//! merge order.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::functionals::{beta_functionals, MIN_SNAPSHOTS};
use crate::error::{Error, Result};
use crate::noise::{convolution_trace, sample_path_stream, NoiseSpec};
use crate::solver::{energy, ito_drift, mass, simulate_stochastic, SolverConfig};
use crate::spectral::{Field, SpaceTimeTrace};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MemberFailure {
    pub seed: u64,
    pub error: String,
}

/// Per-member samples of one estimator, not yet reduced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsemblePartial {
    pub estimator: String,
    pub t_grid: Vec<f64>,
    pub samples: BTreeMap<u64, Vec<f64>>,
    pub failures: BTreeMap<u64, String>,
}

impl EnsemblePartial {
    pub fn new(estimator: impl Into<String>, t_grid: Vec<f64>) -> Self {
        Self {
            estimator: estimator.into(),
            t_grid,
            samples: BTreeMap::new(),
            failures: BTreeMap::new(),
        }
    }

    pub fn record(&mut self, seed: u64, outcome: Result<Vec<f64>>) -> Result<()> {
        if self.samples.contains_key(&seed) || self.failures.contains_key(&seed) {
            return Err(Error::InvalidArgument(format!("member {seed} recorded twice")));
        }
        match outcome {
            Ok(v) if v.len() == self.t_grid.len() => {
                self.samples.insert(seed, v);
            }
            Ok(v) => {
                self.failures.insert(
                    seed,
                    format!("{} values for {} time nodes", v.len(), self.t_grid.len()),
                );
            }
            Err(e) => {
                self.failures.insert(seed, e.to_string());
            }
        }
        Ok(())
    }

    /// Union of two partials over disjoint members of the same estimator.
    pub fn merge(mut self, other: EnsemblePartial) -> Result<Self> {
        if self.estimator != other.estimator || self.t_grid != other.t_grid {
            return Err(Error::InvalidArgument(format!(
                "cannot merge partials of {} and {}",
                self.estimator, other.estimator
            )));
        }
        for (seed, v) in other.samples {
            self.record(seed, Ok(v))?;
        }
        for (seed, e) in other.failures {
            if self.samples.contains_key(&seed) || self.failures.insert(seed, e).is_some() {
                return Err(Error::InvalidArgument(format!("member {seed} recorded twice")));
            }
        }
        Ok(self)
    }

    /// Mean and standard error per node over the finite samples, with
    /// Welford updates in ascending member order.
    pub fn finish(&self) -> Result<EnsembleStats> {
        let nodes = self.t_grid.len();
        let mut count = vec![0usize; nodes];
        let mut mean = vec![0.0; nodes];
        let mut m2 = vec![0.0; nodes];
        for v in self.samples.values() {
            for j in 0..nodes {
                let x = v[j];
                if !x.is_finite() {
                    continue;
                }
                count[j] += 1;
                let d = x - mean[j];
                mean[j] += d / count[j] as f64;
                m2[j] += d * (x - mean[j]);
            }
        }
        if let Some(j) = count.iter().position(|&c| c < 2) {
            return Err(Error::InvalidArgument(format!(
                "estimator {} has {} finite samples at t = {}, need 2",
                self.estimator, count[j], self.t_grid[j]
            )));
        }
        let standard_error = (0..nodes)
            .map(|j| (m2[j] / (count[j] - 1) as f64 / count[j] as f64).sqrt())
            .collect();
        Ok(EnsembleStats {
            estimator: self.estimator.clone(),
            t_grid: self.t_grid.clone(),
            mean,
            standard_error,
            paths: count,
            seeds: self.samples.keys().copied().collect(),
            failures: self
                .failures
                .iter()
                .map(|(&seed, e)| MemberFailure {
                    seed,
                    error: e.clone(),
                })
                .collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleStats {
    pub estimator: String,
    pub t_grid: Vec<f64>,
    pub mean: Vec<f64>,
    pub standard_error: Vec<f64>,
    pub paths: Vec<usize>,
    pub seeds: Vec<u64>,
    pub failures: Vec<MemberFailure>,
}

impl EnsembleStats {
    /// `(mean - reference) / SE` at node `j`.
    pub fn z_score(&self, j: usize, reference: f64) -> f64 {
        (self.mean[j] - reference) / self.standard_error[j]
    }
}

/// Evaluate `f` for every member in parallel and collect the samples.
pub fn ensemble_map<F>(
    estimator: &str,
    t_grid: Vec<f64>,
    seeds: &[u64],
    f: F,
) -> Result<EnsemblePartial>
where
    F: Fn(u64) -> Result<Vec<f64>> + Sync,
{
    let outcomes: Vec<(u64, Result<Vec<f64>>)> = seeds.par_iter().map(|&s| (s, f(s))).collect();
    let mut partial = EnsemblePartial::new(estimator, t_grid);
    for (s, o) in outcomes {
        partial.record(s, o)?;
    }
    Ok(partial)
}

/// Path statistics the stochastic ensemble can report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Estimator {
    /// `M(u(t))`
    Mass,
    /// `E(u(t))`
    Energy,
    /// `M(u(t)) + E(u(t))`
    MassEnergy,
    /// Exact Itô drift of `M + E` at `u(t)`.
    Drift,
    /// `‖z(t)‖₂²` of the stochastic convolution.
    ConvolutionMass,
    /// `α_{j,T}(z)²` for `j = 1…4`, at every `T` with enough snapshots.
    Alpha1,
    Alpha2,
    Alpha3,
    Alpha4,
}

impl Estimator {
    pub fn name(&self) -> &'static str {
        match self {
            Estimator::Mass => "mass",
            Estimator::Energy => "energy",
            Estimator::MassEnergy => "mass-energy",
            Estimator::Drift => "drift",
            Estimator::ConvolutionMass => "convolution-mass",
            Estimator::Alpha1 => "alpha1",
            Estimator::Alpha2 => "alpha2",
            Estimator::Alpha3 => "alpha3",
            Estimator::Alpha4 => "alpha4",
        }
    }

    fn alpha_index(&self) -> Option<usize> {
        match self {
            Estimator::Alpha1 => Some(0),
            Estimator::Alpha2 => Some(1),
            Estimator::Alpha3 => Some(2),
            Estimator::Alpha4 => Some(3),
            _ => None,
        }
    }

    fn needs_solution(&self) -> bool {
        matches!(
            self,
            Estimator::Mass | Estimator::Energy | Estimator::MassEnergy | Estimator::Drift
        )
    }

    /// Snapshot indices at which the estimator is reported.
    fn nodes(&self, snapshots: usize) -> Vec<usize> {
        let first = if self.alpha_index().is_some() { MIN_SNAPSHOTS - 1 } else { 0 };
        (first..snapshots).collect()
    }
}

/// Initial datum, solver, noise and sampling shared by all members.
#[derive(Clone, Debug)]
pub struct EnsembleModel {
    pub u0: Field,
    pub solver: SolverConfig,
    pub noise: NoiseSpec,
    pub steps: usize,
    pub stride: usize,
}

impl EnsembleModel {
    fn times(&self) -> Vec<f64> {
        (0..=self.steps / self.stride)
            .map(|j| (j * self.stride) as f64 * self.solver.dt)
            .collect()
    }

    /// All requested estimators on member `seed` (its noise stream).
    pub fn member(&self, estimators: &[Estimator], seed: u64) -> Result<Vec<Vec<f64>>> {
        let path = sample_path_stream(self.noise.seed, seed, self.solver.dt, self.steps)?;
        let solution = if estimators.iter().any(Estimator::needs_solution) {
            Some(simulate_stochastic(&self.u0, &self.solver, &self.noise, &path, self.stride)?)
        } else {
            None
        };
        let z = if estimators.iter().any(|e| !e.needs_solution()) {
            Some(convolution_trace(&self.noise, &path, self.stride)?)
        } else {
            None
        };
        let (k, sign) = (self.solver.k, self.solver.sign);
        estimators
            .iter()
            .map(|e| {
                let nodes = e.nodes(self.steps / self.stride + 1);
                let u = |j: usize| solution.as_ref().expect("solved").snapshot(j);
                let z: &SpaceTimeTrace = match &z {
                    Some(z) => z,
                    None => solution.as_ref().expect("solved"),
                };
                nodes
                    .iter()
                    .map(|&j| match e {
                        Estimator::Mass => Ok(mass(u(j))),
                        Estimator::Energy => Ok(energy(u(j), k, sign)),
                        Estimator::MassEnergy => Ok(mass(u(j)) + energy(u(j), k, sign)),
                        Estimator::Drift => {
                            Ok(ito_drift(u(j), &self.solver, &self.noise, z.time(j))?.drift)
                        }
                        Estimator::ConvolutionMass => Ok(mass(z.snapshot(j))),
                        _ => {
                            let b = beta_functionals(z, k, z.time(j))?;
                            Ok(b.as_array()[e.alpha_index().expect("alpha")].powi(2))
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

/// Run the model over `seeds`, one [`EnsembleStats`] per estimator.
pub fn ensemble_run(
    model: &EnsembleModel,
    estimators: &[Estimator],
    seeds: &[u64],
) -> Result<Vec<EnsembleStats>> {
    ensemble_partials(model, estimators, seeds)?
        .iter()
        .map(EnsemblePartial::finish)
        .collect()
}

/// Unreduced per-estimator partials, for merging across processes.
pub fn ensemble_partials(
    model: &EnsembleModel,
    estimators: &[Estimator],
    seeds: &[u64],
) -> Result<Vec<EnsemblePartial>> {
    if seeds.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "an ensemble needs at least 2 members, got {}",
            seeds.len()
        )));
    }
    if model.stride == 0 || !model.steps.is_multiple_of(model.stride) {
        return Err(Error::InvalidArgument(format!(
            "snapshot stride {} must divide the step count {}",
            model.stride, model.steps
        )));
    }
    let times = model.times();
    let outcomes: Vec<(u64, Result<Vec<Vec<f64>>>)> = seeds
        .par_iter()
        .map(|&s| (s, model.member(estimators, s)))
        .collect();
    let mut partials: Vec<EnsemblePartial> = estimators
        .iter()
        .map(|e| {
            let grid = e.nodes(times.len()).iter().map(|&j| times[j]).collect();
            EnsemblePartial::new(e.name(), grid)
        })
        .collect();
    for (seed, outcome) in outcomes {
        match outcome {
            Ok(values) => {
                for (p, v) in partials.iter_mut().zip(values) {
                    p.record(seed, Ok(v))?;
                }
            }
            Err(e) => {
                let msg = e.to_string();
                for p in partials.iter_mut() {
                    p.record(seed, Err(Error::InvalidArgument(msg.clone())))?;
                }
            }
        }
    }
    Ok(partials)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::Envelope;
    use crate::solver::Sign;
    use crate::spectral::Grid;

    fn model(envelope: Envelope) -> EnsembleModel {
        let g = Grid::new(64, 20.0).unwrap();
        EnsembleModel {
            u0: Field::from_fn(&g, |x| 0.3 * (-x * x).exp()),
            solver: SolverConfig::new(&g, 4, Sign::Defocusing, 0.02).unwrap(),
            noise: NoiseSpec::new(Field::from_fn(&g, |x| (-x * x).exp()), envelope, 4).unwrap(),
            steps: 40,
            stride: 10,
        }
    }

    #[test]
    fn silent_noise_gives_zero_error() {
        let m = model(Envelope::Zero);
        let stats = ensemble_run(&m, &[Estimator::Mass], &[0, 1]).unwrap();
        assert!(stats[0].standard_error.iter().all(|&s| s == 0.0));
        assert_eq!(stats[0].t_grid.len(), 5);
    }

    #[test]
    fn merge_is_order_independent() {
        let m = model(Envelope::Power { gamma: 0.7 });
        let est = [Estimator::Mass, Estimator::ConvolutionMass];
        let seeds: Vec<u64> = (0..8).collect();
        let whole = ensemble_run(&m, &est, &seeds).unwrap();
        let a = ensemble_partials(&m, &est, &[5, 1, 7, 3]).unwrap();
        let b = ensemble_partials(&m, &est, &[6, 0, 2, 4]).unwrap();
        for (j, (pa, pb)) in a.into_iter().zip(b).enumerate() {
            let ab = pa.clone().merge(pb.clone()).unwrap().finish().unwrap();
            let ba = pb.merge(pa).unwrap().finish().unwrap();
            assert_eq!(ab, whole[j]);
            assert_eq!(ba, whole[j]);
        }
    }

    #[test]
    fn duplicate_members_rejected() {
        let mut p = EnsemblePartial::new("x", vec![0.0]);
        p.record(3, Ok(vec![1.0])).unwrap();
        assert!(p.record(3, Ok(vec![2.0])).is_err());
        assert!(ensemble_run(&model(Envelope::Zero), &[Estimator::Mass], &[1]).is_err());
    }

    #[test]
    fn failures_are_recorded() {
        let p = ensemble_map("x", vec![0.0], &[0, 1, 2], |s| {
            if s == 1 {
                Err(Error::InvalidArgument("boom".into()))
            } else {
                Ok(vec![s as f64])
            }
        })
        .unwrap();
        let stats = p.finish().unwrap();
        assert_eq!(stats.failures.len(), 1);
        assert_eq!(stats.failures[0].seed, 1);
        assert_eq!(stats.paths, vec![2]);
        assert_eq!(stats.mean, vec![1.0]);
    }
}
