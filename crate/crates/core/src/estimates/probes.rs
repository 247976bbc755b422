//! Empirical constants of the linear Kato and Strichartz estimates.
//!
//! Each datum is evolved by the Airy group over the symmetric window
//! `t ∈ [-H, H]` and the mixed norm is accumulated one snapshot at a time,
//! so only `O(n)` memory is used however long the window. The ratio
//! `‖weight · V(t)u₀‖ / ‖u₀‖₂` is maximised over the data.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::admissibility::{KatoTriple, StrichartzPair};
use crate::error::{Error, Result};
use crate::spectral::{multiplier, weighted_norm, DerivativeKind, Exponent, Field, Grid};

/// Space/time resolution of a probe: grid, half-window `H` and time step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub n: usize,
    pub length: f64,
    pub horizon: f64,
    pub dt: f64,
}

impl ProbeConfig {
    pub fn new(n: usize, length: f64, horizon: f64, dt: f64) -> Result<Self> {
        Grid::new(n, length)?;
        if !(horizon > 0.0 && dt > 0.0 && dt <= horizon) {
            return Err(Error::InvalidArgument(format!(
                "probe needs 0 < dt <= horizon, got dt = {dt}, horizon = {horizon}"
            )));
        }
        Ok(Self {
            n,
            length,
            horizon,
            dt,
        })
    }

    pub fn grid(&self) -> Grid {
        Grid::new(self.n, self.length).expect("validated")
    }

    /// Twice the points on the same domain, half the time step.
    pub fn refined(&self) -> Self {
        Self {
            n: 2 * self.n,
            dt: 0.5 * self.dt,
            ..self.clone()
        }
    }

    /// Twice the domain (same spacing) and twice the time window.
    pub fn extended(&self) -> Self {
        Self {
            n: 2 * self.n,
            length: 2.0 * self.length,
            horizon: 2.0 * self.horizon,
            ..self.clone()
        }
    }

    fn steps(&self) -> usize {
        (2.0 * self.horizon / self.dt).round() as usize
    }
}

/// `e^{-(x-c)²/(2w²)} · cos(ξ₀x + θ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeDatum {
    pub center: f64,
    pub width: f64,
    pub frequency: f64,
    pub phase: f64,
}

impl ProbeDatum {
    pub fn sample(&self, grid: &Grid) -> Field {
        Field::from_fn(grid, |x| {
            let s = (x - self.center) / self.width;
            (-0.5 * s * s).exp() * (self.frequency * x + self.phase).cos()
        })
    }
}

/// Seeded random wave packets: centre in [-2, 2], width in [1, 2],
/// carrier frequency in [0, 1.5].
pub fn probe_data(seed: u64, count: usize) -> Vec<ProbeDatum> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| ProbeDatum {
            center: rng.random_range(-2.0..2.0),
            width: rng.random_range(1.0..2.0),
            frequency: rng.random_range(0.0..1.5),
            phase: rng.random_range(0.0..2.0 * PI),
        })
        .collect()
}

#[derive(Clone, Copy, Debug)]
enum Order {
    /// `L^p_x L^q_t`
    SpaceTime(Exponent, Exponent),
    /// `L^q_t L^p_x`
    TimeSpace(Exponent, Exponent),
}

/// Streaming mixed norm of `D^order V(t) u₀` over `t ∈ [-H, H]`.
fn flow_norm(u0: &Field, order: f64, norm: Order, cfg: &ProbeConfig) -> Result<f64> {
    let grid = u0.grid();
    let m = cfg.steps();
    let symbol = multiplier(grid, order, DerivativeKind::Homogeneous);
    let start = grid.airy_symbol(-cfg.horizon);
    let step = grid.airy_symbol(cfg.dt);
    let mut hat: Vec<Complex64> = u0
        .forward()
        .into_coefficients()
        .into_iter()
        .zip(symbol.iter().zip(&start))
        .map(|(c, (s, e))| c * s * e)
        .collect();
    let dx = grid.spacing();
    let n = grid.n();
    let time_weight = |j: usize| if j == 0 || j == m { 0.5 * cfg.dt } else { cfg.dt };
    match norm {
        Order::SpaceTime(p, q) => {
            let mut acc = vec![0.0f64; n];
            for j in 0..=m {
                if j > 0 {
                    hat.iter_mut().zip(&step).for_each(|(c, e)| *c *= e);
                }
                let v = grid.inverse(&hat);
                let w = time_weight(j);
                for (a, x) in acc.iter_mut().zip(&v) {
                    *a = match q {
                        Exponent::Infinity => (*a).max(x.abs()),
                        Exponent::Finite(q) => *a + w * x.abs().powf(q),
                    };
                }
            }
            if let Exponent::Finite(q) = q {
                acc.iter_mut().for_each(|a| *a = a.powf(1.0 / q));
            }
            Ok(weighted_norm(&acc, &vec![dx; n], p))
        }
        Order::TimeSpace(q, p) => {
            let mut inner = Vec::with_capacity(m + 1);
            let mut weights = Vec::with_capacity(m + 1);
            for j in 0..=m {
                if j > 0 {
                    hat.iter_mut().zip(&step).for_each(|(c, e)| *c *= e);
                }
                let v = grid.inverse(&hat);
                inner.push(weighted_norm(&v, &vec![dx; n], p));
                weights.push(time_weight(j));
            }
            Ok(weighted_norm(&inner, &weights, q))
        }
    }
}

/// Per-datum ratios and their maximum.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProbeResult {
    pub config: ProbeConfig,
    pub ratio: f64,
    pub worst: usize,
    pub ratios: Vec<f64>,
}

fn probe(
    data: &[ProbeDatum],
    cfg: &ProbeConfig,
    order: f64,
    norm: Order,
) -> Result<ProbeResult> {
    if data.is_empty() {
        return Err(Error::InvalidArgument("probe needs at least one datum".into()));
    }
    let grid = cfg.grid();
    let ratios = data
        .par_iter()
        .map(|d| {
            let u0 = d.sample(&grid);
            let mass = u0.l2_norm();
            if mass == 0.0 {
                return Err(Error::InvalidArgument("probe datum vanishes on the grid".into()));
            }
            flow_norm(&u0.scaled(1.0 / mass), order, norm, cfg)
        })
        .collect::<Result<Vec<f64>>>()?;
    let (worst, ratio) = ratios
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |b, (j, r)| if r > b.1 { (j, r) } else { b });
    Ok(ProbeResult {
        config: cfg.clone(),
        ratio,
        worst,
        ratios,
    })
}

/// `max ‖D^α V(t)u₀‖_{L^p_x L^q_t} / ‖u₀‖₂` over the data.
pub fn kato_constant_probe(
    triple: &KatoTriple,
    data: &[ProbeDatum],
    cfg: &ProbeConfig,
) -> Result<ProbeResult> {
    let t = KatoTriple::new(triple.p, triple.q, triple.alpha)?;
    probe(data, cfg, t.alpha, Order::SpaceTime(t.p, t.q))
}

/// `max ‖D^{(β/2)(1/p'-1/p)} V(t)u₀‖_{L^q_t L^p_x} / ‖u₀‖₂` over the data.
pub fn strichartz_constant_probe(
    pair: &StrichartzPair,
    data: &[ProbeDatum],
    cfg: &ProbeConfig,
) -> Result<ProbeResult> {
    let s = StrichartzPair::new(pair.p, pair.q, pair.beta)?;
    probe(data, cfg, s.weight_order(), Order::TimeSpace(s.q, s.p))
}

/// A probe at a base resolution, after grid refinement and after domain
/// and window doubling.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Refinement {
    pub base: f64,
    pub refined: f64,
    pub extended: f64,
    /// Largest relative change against the base ratio.
    pub drift: f64,
}

impl Refinement {
    pub fn from_ratios(base: f64, refined: f64, extended: f64) -> Self {
        let drift = ((refined - base).abs()).max((extended - base).abs()) / base;
        Self {
            base,
            refined,
            extended,
            drift,
        }
    }
}

pub fn kato_refinement(
    triple: &KatoTriple,
    data: &[ProbeDatum],
    cfg: &ProbeConfig,
) -> Result<Refinement> {
    let r = |c: &ProbeConfig| kato_constant_probe(triple, data, c).map(|p| p.ratio);
    Ok(Refinement::from_ratios(r(cfg)?, r(&cfg.refined())?, r(&cfg.extended())?))
}

pub fn strichartz_refinement(
    pair: &StrichartzPair,
    data: &[ProbeDatum],
    cfg: &ProbeConfig,
) -> Result<Refinement> {
    let r = |c: &ProbeConfig| strichartz_constant_probe(pair, data, c).map(|p| p.ratio);
    Ok(Refinement::from_ratios(r(cfg)?, r(&cfg.refined())?, r(&cfg.extended())?))
}
