//! Forward scattering diagnostics: the decomposition `u = u_* + z_*`, the
//! remainder `v = u - z_* - y` against the deterministic flow `y` started
//! from `u_*(T)`, and Cauchy increments of the pullbacks `V(-t)u(t)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::{tail_trace, BrownianPath, NoiseSpec};
use crate::solver::{simulate_deterministic, simulate_stochastic_from, SolverConfig};
use crate::spectral::{
    airy_propagate, fractional_derivative, mixed_norm_xt, sobolev_norm, DerivativeKind, Exponent,
    Field, SpaceTimeTrace, ZeroMode,
};

/// `u_* = u - z_*` on aligned traces.
pub fn decompose(u: &SpaceTimeTrace, zstar: &SpaceTimeTrace) -> Result<SpaceTimeTrace> {
    u.zip_with(zstar, |a, b| a - b)
}

/// Exponents of the scattering size: `(5, 10)` for k = 4, `(5k/4, 5k/2)` beyond.
pub fn scattering_exponents(k: u32) -> (Exponent, Exponent) {
    let k = k as f64;
    (Exponent::Finite(1.25 * k), Exponent::Finite(2.5 * k))
}

/// `‖u‖_{L^{5k/4}_x L^{5k/2}_t}` over the whole trace.
pub fn scattering_size(trace: &SpaceTimeTrace, k: u32) -> Result<f64> {
    if k < 4 {
        return Err(Error::InvalidArgument(format!("k must be >= 4, got {k}")));
    }
    let (p, q) = scattering_exponents(k);
    mixed_norm_xt(trace, p, q)
}

/// The four traces of the `v` construction on `[T, end]`.
#[derive(Clone, Debug)]
pub struct VDecomposition {
    pub u: SpaceTimeTrace,
    pub zstar: SpaceTimeTrace,
    pub y: SpaceTimeTrace,
    pub v: SpaceTimeTrace,
}

/// Co-evolve `u` (stochastic, from `u(T) = y_init + z_*(T)`), `y`
/// (deterministic, from `y_init`) and `z_*` on `[T, path end]`, and form
/// `v = u - z_* - y`, so `v(T) = 0`.
///
/// The tail `z_*` is truncated at `tail_horizon`, which must satisfy the
/// noise module's truncation rule at the path end.
pub fn solve_v(
    y_init: &Field,
    cfg: &SolverConfig,
    spec: &NoiseSpec,
    path: &BrownianPath,
    t_start: f64,
    stride: usize,
    tail_horizon: f64,
) -> Result<VDecomposition> {
    let start = path.index_of(t_start)?;
    if start >= path.steps() {
        return Err(Error::InvalidArgument(format!(
            "T = {t_start} must precede the path end {}",
            path.t_end()
        )));
    }
    let steps = path.steps() - start;
    if stride == 0 || !steps.is_multiple_of(stride) {
        return Err(Error::InvalidArgument(format!(
            "snapshot stride {stride} must divide the {steps} steps after T"
        )));
    }
    let times: Vec<f64> = (0..=steps / stride)
        .map(|j| (start + j * stride) as f64 * path.dt)
        .collect();
    let zstar = tail_trace(spec, path, &times, tail_horizon)?;
    let u_start = y_init.add(zstar.snapshot(0));
    let u = simulate_stochastic_from(&u_start, cfg, spec, path, start, stride)?;
    let y = shift(simulate_deterministic(y_init, cfg, steps, stride)?, zstar.t0())?;
    // (u - z_*) - y with the same association as y(T) = u_*(T)
    let v = decompose(&u, &zstar)?.zip_with(&y, |a, b| a - b)?;
    Ok(VDecomposition { u, zstar, y, v })
}

fn shift(tr: SpaceTimeTrace, t0: f64) -> Result<SpaceTimeTrace> {
    SpaceTimeTrace::new(tr.grid(), t0, tr.dt(), tr.snapshots().to_vec())
}

/// Space in which pullbacks are compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PullbackSpace {
    L2,
    H1,
}

impl PullbackSpace {
    /// L² for the mass-critical k = 4, H¹ above it.
    pub fn for_degree(k: u32) -> Self {
        if k == 4 {
            PullbackSpace::L2
        } else {
            PullbackSpace::H1
        }
    }

    pub fn norm(self, f: &Field) -> f64 {
        match self {
            PullbackSpace::L2 => f.l2_norm(),
            PullbackSpace::H1 => sobolev_norm(f, 1.0),
        }
    }
}

/// The norms of `v` on `[T, end]` that control the remainder.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VNorms {
    pub t: f64,
    /// `‖⟨∂_x⟩ v‖_{L⁵_x L¹⁰_t}`
    pub lambda1: f64,
    /// `‖v‖_{L^{5k/4}_x L^{5k/2}_t}`
    pub lambda2: f64,
    /// `‖∂_x² v‖_{L^∞_x L²_t}`
    pub d2_smoothing: f64,
    /// `sup_t ‖v‖_{H¹}`
    pub energy: f64,
}

pub fn v_norms(v: &SpaceTimeTrace, k: u32) -> Result<VNorms> {
    let bracket = v.try_map(|f| {
        fractional_derivative(f, 1.0, DerivativeKind::Inhomogeneous, ZeroMode::Require)
    })?;
    let d2 = v.map(|f| f.derivative(2));
    Ok(VNorms {
        t: v.t0(),
        lambda1: mixed_norm_xt(&bracket, Exponent::Finite(5.0), Exponent::Finite(10.0))?,
        lambda2: scattering_size(v, k)?,
        d2_smoothing: mixed_norm_xt(&d2, Exponent::Infinity, Exponent::Finite(2.0))?,
        energy: v
            .snapshots()
            .iter()
            .map(|f| sobolev_norm(f, 1.0))
            .fold(0.0, f64::max),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScatteringReport {
    pub space: PullbackSpace,
    pub t_checkpoints: Vec<f64>,
    /// `‖V(-t_{i+1})u(t_{i+1}) - V(-t_i)u(t_i)‖` for successive checkpoints.
    pub cauchy_increments: Vec<f64>,
    pub scattering_size: f64,
    pub v_norms: Vec<VNorms>,
    #[serde(skip)]
    pub u_plus: Option<Field>,
}

impl ScatteringReport {
    /// Whether the Cauchy increments decrease strictly.
    pub fn increments_decrease(&self) -> bool {
        self.cauchy_increments.windows(2).all(|w| w[1] < w[0])
    }

    /// Whether the `v` scattering sizes are nonincreasing in `T`.
    pub fn v_sizes_nonincreasing(&self) -> bool {
        self.v_norms.windows(2).all(|w| w[1].lambda2 <= w[0].lambda2)
    }
}

/// Pullbacks of `u` at the checkpoints and their Cauchy increments, plus
/// the `v` norms of any supplied remainders.
pub fn scattering_diagnostic(
    u: &SpaceTimeTrace,
    checkpoints: &[f64],
    space: PullbackSpace,
    k: u32,
    v_traces: &[SpaceTimeTrace],
) -> Result<ScatteringReport> {
    if checkpoints.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least 3 checkpoints, got {}",
            checkpoints.len()
        )));
    }
    if checkpoints.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("checkpoints must increase".into()));
    }
    let pullbacks = checkpoints
        .iter()
        .map(|&t| {
            let n = u
                .index_of(t)
                .ok_or_else(|| Error::Misaligned(format!("checkpoint {t} is not a snapshot time")))?;
            airy_propagate(u.snapshot(n), -u.time(n))
        })
        .collect::<Result<Vec<_>>>()?;
    let cauchy_increments = pullbacks
        .windows(2)
        .map(|w| space.norm(&w[1].sub(&w[0])))
        .collect();
    Ok(ScatteringReport {
        space,
        t_checkpoints: checkpoints.to_vec(),
        cauchy_increments,
        scattering_size: scattering_size(u, k)?,
        v_norms: v_traces
            .iter()
            .map(|v| v_norms(v, k))
            .collect::<Result<_>>()?,
        u_plus: pullbacks.last().cloned(),
    })
}
