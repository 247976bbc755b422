//! Brownian forcing `dW = g(t) φ(x) dB(t)`, the stochastic convolution
//! `z(t) = ∫_0^t V(t-s) dW(s)` and its tail.
//!
//! The tail is taken with the sign that makes `u - z_*` free of noise:
//! `z_*(t) = -∫_t^∞ V(t-s) dW(s)`, so that `dz_* + ∂_x³ z_* dt = dW`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{Field, Grid, SpaceTimeTrace};

/// Residual noise mass allowed beyond a tail horizon, relative to `∫_t^∞ g²`.
pub const HORIZON_RULE: f64 = 1e-4;

// far-field cells grow geometrically by this factor past the end of a path
const FAR_GROWTH: f64 = 1.02;
const FAR_STREAM: u64 = 1 << 63;

/// Time envelope `g(t)` of the forcing.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Envelope {
    /// `(1+t)^{-γ}`.
    Power { gamma: f64 },
    /// `(1+t)^{-γ}` for `t < end`, zero afterwards.
    Truncated { gamma: f64, end: f64 },
    Constant { level: f64 },
    Zero,
}

fn power_mass(gamma: f64, a: f64, b: f64) -> f64 {
    let e = 1.0 - 2.0 * gamma;
    if e.abs() < 1e-14 {
        ((1.0 + b) / (1.0 + a)).ln()
    } else {
        ((1.0 + b).powf(e) - (1.0 + a).powf(e)) / e
    }
}

impl Envelope {
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            Envelope::Power { gamma } => (1.0 + t.abs()).powf(-gamma),
            Envelope::Truncated { gamma, end } => {
                if t < end {
                    (1.0 + t.abs()).powf(-gamma)
                } else {
                    0.0
                }
            }
            Envelope::Constant { level } => level,
            Envelope::Zero => 0.0,
        }
    }

    /// Decay exponent, if the envelope has one.
    pub fn gamma(&self) -> Option<f64> {
        match *self {
            Envelope::Power { gamma } | Envelope::Truncated { gamma, .. } => Some(gamma),
            _ => None,
        }
    }

    /// `∫_a^b g(s)² ds` for `0 <= a <= b`, exact.
    pub fn square_integral(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        match *self {
            Envelope::Power { gamma } => power_mass(gamma, a, b),
            Envelope::Truncated { gamma, end } => {
                if a >= end {
                    0.0
                } else {
                    power_mass(gamma, a, b.min(end))
                }
            }
            Envelope::Constant { level } => level * level * (b - a),
            Envelope::Zero => 0.0,
        }
    }

    /// `∫_t^∞ g(s)² ds`; infinite when `g² ` is not integrable.
    pub fn tail_mass(&self, t: f64) -> f64 {
        match *self {
            Envelope::Power { gamma } => {
                if gamma > 0.5 {
                    (1.0 + t).powf(1.0 - 2.0 * gamma) / (2.0 * gamma - 1.0)
                } else {
                    f64::INFINITY
                }
            }
            Envelope::Truncated { end, .. } => self.square_integral(t, end.max(t)),
            Envelope::Constant { level } => {
                if level == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            Envelope::Zero => 0.0,
        }
    }

    /// Smallest horizon meeting [`HORIZON_RULE`] for a tail started at `t`.
    pub fn horizon_for(&self, t: f64) -> Result<f64> {
        let total = self.tail_mass(t);
        if total == 0.0 {
            return Ok(t);
        }
        match *self {
            Envelope::Power { gamma } if gamma > 0.5 => {
                Ok((1.0 + t) * HORIZON_RULE.powf(1.0 / (1.0 - 2.0 * gamma)) - 1.0)
            }
            Envelope::Truncated { end, .. } => Ok(end.max(t)),
            _ => Err(Error::HorizonRule {
                t,
                horizon: f64::INFINITY,
                ratio: f64::INFINITY,
            }),
        }
    }

    fn check_horizon(&self, t: f64, horizon: f64) -> Result<()> {
        if !(horizon > t) {
            return Err(Error::InvalidArgument(format!(
                "tail horizon {horizon} must exceed start {t}"
            )));
        }
        let total = self.tail_mass(t);
        if total == 0.0 {
            return Ok(());
        }
        let ratio = self.tail_mass(horizon) / total;
        if ratio.is_finite() && ratio <= HORIZON_RULE * (1.0 + 1e-9) {
            Ok(())
        } else {
            Err(Error::HorizonRule { t, horizon, ratio })
        }
    }
}

/// Spatial profile, envelope and seed of the forcing.
#[derive(Clone, Debug)]
pub struct NoiseSpec {
    pub phi: Field,
    pub envelope: Envelope,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(phi: Field, envelope: Envelope, seed: u64) -> Result<Self> {
        if phi.values().iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("noise profile has non-finite values".into()));
        }
        if let Some(gamma) = envelope.gamma() {
            if !(gamma > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "envelope exponent must be positive, got {gamma}"
                )));
            }
        }
        Ok(Self {
            phi,
            envelope,
            seed,
        })
    }

    pub fn grid(&self) -> &Grid {
        self.phi.grid()
    }

    pub fn gamma(&self) -> Option<f64> {
        self.envelope.gamma()
    }

    /// Same profile and seed with `g ≡ 0`.
    pub fn silenced(&self) -> Self {
        Self {
            envelope: Envelope::Zero,
            ..self.clone()
        }
    }

    /// `‖φ‖₂² ∫_a^b g²`, the Itô-isometry variance of the forcing over `[a, b]`.
    pub fn variance(&self, a: f64, b: f64) -> f64 {
        let n = self.phi.l2_norm();
        n * n * self.envelope.square_integral(a, b)
    }
}

/// Increments `ΔB_n` of a Brownian motion on `t_n = n·dt`.
#[derive(Clone, Debug, PartialEq)]
pub struct BrownianPath {
    pub seed: u64,
    pub stream: u64,
    pub dt: f64,
    pub increments: Vec<f64>,
}

impl BrownianPath {
    pub fn steps(&self) -> usize {
        self.increments.len()
    }

    pub fn t_end(&self) -> f64 {
        self.steps() as f64 * self.dt
    }

    /// First `m` increments; the generator makes this a prefix of any
    /// longer path with the same seed and stream.
    pub fn truncated(&self, m: usize) -> Self {
        Self {
            increments: self.increments[..m.min(self.steps())].to_vec(),
            ..self.clone()
        }
    }

    /// Step index of time `t`, if it lies on the path grid.
    pub fn index_of(&self, t: f64) -> Result<usize> {
        let x = t / self.dt;
        let n = x.round();
        if (x - n).abs() > 1e-9 * x.abs().max(1.0) || n < 0.0 || n as usize > self.steps() {
            return Err(Error::Misaligned(format!(
                "time {t} is not on the path grid (dt = {}, {} steps)",
                self.dt,
                self.steps()
            )));
        }
        Ok(n as usize)
    }
}

fn generator(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Path on stream 0 of `seed`.
pub fn sample_path(seed: u64, dt: f64, m: usize) -> Result<BrownianPath> {
    sample_path_stream(seed, 0, dt, m)
}

/// Path on an independent ChaCha stream keyed by `(seed, stream)`.
pub fn sample_path_stream(seed: u64, stream: u64, dt: f64, m: usize) -> Result<BrownianPath> {
    if !(dt > 0.0 && dt.is_finite()) || m == 0 {
        return Err(Error::InvalidArgument(format!(
            "path needs dt > 0 and m >= 1, got dt = {dt}, m = {m}"
        )));
    }
    if stream & FAR_STREAM != 0 {
        return Err(Error::InvalidArgument("stream index uses the reserved top bit".into()));
    }
    let mut rng = generator(seed, stream);
    let sd = dt.sqrt();
    let increments = (0..m)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            sd * z
        })
        .collect();
    Ok(BrownianPath {
        seed,
        stream,
        dt,
        increments,
    })
}

fn check_path(path: &BrownianPath) -> Result<()> {
    if !(path.dt > 0.0) {
        return Err(Error::InvalidArgument("path has no time step".into()));
    }
    Ok(())
}

/// `z(t_n)` at the requested times by the exact-in-Fourier recursion
/// `ẑ_{n+1} = e^{i dt ξ³}(ẑ_n + φ̂ g(t_n) ΔB_n)`, `ẑ_0 = 0`.
pub fn stochastic_convolution(
    spec: &NoiseSpec,
    path: &BrownianPath,
    times: &[f64],
) -> Result<SpaceTimeTrace> {
    check_path(path)?;
    let idx = times
        .iter()
        .map(|&t| path.index_of(t))
        .collect::<Result<Vec<_>>>()?;
    if idx.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Misaligned("times must increase strictly".into()));
    }
    let grid = spec.grid();
    let phi_hat = spec.phi.forward().into_coefficients();
    let step = grid.airy_symbol(path.dt);
    let mut z = vec![Complex64::new(0.0, 0.0); grid.n()];
    let mut snaps = Vec::with_capacity(idx.len());
    let mut next = 0;
    let last = idx.last().copied().unwrap_or(0);
    for n in 0..=last {
        if next < idx.len() && idx[next] == n {
            snaps.push(Field::new(grid, grid.inverse(&z))?);
            next += 1;
        }
        if n == last {
            break;
        }
        let kick = spec.envelope.value(n as f64 * path.dt) * path.increments[n];
        for ((zj, pj), ej) in z.iter_mut().zip(&phi_hat).zip(&step) {
            *zj = (*zj + pj * kick) * ej;
        }
    }
    SpaceTimeTrace::from_times(times, snaps)
}

/// Convenience: `z` at every `stride`-th step of the whole path.
pub fn convolution_trace(
    spec: &NoiseSpec,
    path: &BrownianPath,
    stride: usize,
) -> Result<SpaceTimeTrace> {
    stochastic_convolution(spec, path, &strided_times(path, stride)?)
}

pub(crate) fn strided_times(path: &BrownianPath, stride: usize) -> Result<Vec<f64>> {
    if stride == 0 || !path.steps().is_multiple_of(stride) {
        return Err(Error::Misaligned(format!(
            "stride {stride} does not divide {} steps",
            path.steps()
        )));
    }
    Ok((0..=path.steps() / stride)
        .map(|j| (j * stride) as f64 * path.dt)
        .collect())
}

/// Tail `z_*` held in the interaction picture: `z_*(t) = V(t) A(t)` with
/// `A(t) = -Σ_{t_j >= t} V(-t_j) φ̂ g_j ΔB_j - A_far`.
struct TailSum {
    far: Vec<Complex64>,
    far_mass: f64,
}

impl TailSum {
    /// Far-field part beyond the path: geometric cells from the path end to
    /// `horizon`, each an exact-variance Gaussian increment `∫_cell g² `
    /// placed at the cell's left point.
    fn new(spec: &NoiseSpec, path: &BrownianPath, horizon: f64) -> Self {
        let grid = spec.grid();
        let n = grid.n();
        let mut far = vec![Complex64::new(0.0, 0.0); n];
        let mut left = path.t_end();
        let mut width = path.dt;
        let mut mass = 0.0;
        if horizon > left {
            let phi_hat = spec.phi.forward().into_coefficients();
            let mut rng = generator(path.seed, path.stream | FAR_STREAM);
            while left < horizon {
                let right = (left + width).min(horizon);
                let var = spec.envelope.square_integral(left, right);
                let xi: f64 = StandardNormal.sample(&mut rng);
                if var > 0.0 {
                    let amp = var.sqrt() * xi;
                    mass += var;
                    let phase = grid.airy_symbol(-left);
                    for ((f, p), e) in far.iter_mut().zip(&phi_hat).zip(&phase) {
                        *f += p * e * amp;
                    }
                }
                left = right;
                width *= FAR_GROWTH;
            }
        }
        Self {
            far,
            far_mass: mass,
        }
    }
}

fn path_kick_hat(spec: &NoiseSpec, phi_hat: &[Complex64], path: &BrownianPath, j: usize) -> Vec<Complex64> {
    let grid = spec.grid();
    let tj = j as f64 * path.dt;
    let kick = spec.envelope.value(tj) * path.increments[j];
    phi_hat
        .iter()
        .zip(grid.airy_symbol(-tj))
        .map(|(p, e)| p * e * kick)
        .collect()
}

/// `z_*(t)` with the upper limit truncated at `horizon`, which must satisfy
/// the [`HORIZON_RULE`]. Increments on the path grid are used up to the path
/// end; beyond it the far-field cells take over.
pub fn tail_convolution(
    spec: &NoiseSpec,
    path: &BrownianPath,
    t: f64,
    horizon: f64,
) -> Result<Field> {
    check_path(path)?;
    spec.envelope.check_horizon(t, horizon)?;
    let nt = path.index_of(t)?;
    let tail = TailSum::new(spec, path, horizon);
    let grid = spec.grid();
    let phi_hat = spec.phi.forward().into_coefficients();
    let end = path_end_index(path, horizon);
    let mut acc = tail.far.clone();
    for j in nt..end {
        for (a, d) in acc.iter_mut().zip(path_kick_hat(spec, &phi_hat, path, j)) {
            *a += d;
        }
    }
    Ok(to_field(grid, &acc, t))
}

fn path_end_index(path: &BrownianPath, horizon: f64) -> usize {
    if horizon >= path.t_end() {
        path.steps()
    } else {
        ((horizon / path.dt).round() as usize).min(path.steps())
    }
}

// z_*(t) = -V(t) A
fn to_field(grid: &Grid, acc: &[Complex64], t: f64) -> Field {
    let hat: Vec<Complex64> = acc
        .iter()
        .zip(grid.airy_symbol(t))
        .map(|(a, e)| -a * e)
        .collect();
    Field::new(grid, grid.inverse(&hat)).expect("grid-sized")
}

/// `z_*` at the requested (uniform) times with one horizon shared by all of
/// them, by a single backward sweep over the path.
pub fn tail_trace(
    spec: &NoiseSpec,
    path: &BrownianPath,
    times: &[f64],
    horizon: f64,
) -> Result<SpaceTimeTrace> {
    SpaceTimeTrace::from_times(times, tail_fields(spec, path, times, horizon)?)
}

/// As [`tail_trace`] for any increasing grid-aligned times.
pub fn tail_fields(
    spec: &NoiseSpec,
    path: &BrownianPath,
    times: &[f64],
    horizon: f64,
) -> Result<Vec<Field>> {
    check_path(path)?;
    if times.is_empty() {
        return Err(Error::InvalidArgument("no tail times requested".into()));
    }
    for &t in times {
        spec.envelope.check_horizon(t, horizon)?;
    }
    let idx = times
        .iter()
        .map(|&t| path.index_of(t))
        .collect::<Result<Vec<_>>>()?;
    if idx.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Misaligned("times must increase strictly".into()));
    }
    let grid = spec.grid();
    let phi_hat = spec.phi.forward().into_coefficients();
    let tail = TailSum::new(spec, path, horizon);
    let mut acc = tail.far.clone();
    let end = path_end_index(path, horizon);
    let mut snaps = vec![None; idx.len()];
    let mut j = end;
    for (slot, &n) in idx.iter().enumerate().rev() {
        while j > n {
            j -= 1;
            for (a, d) in acc.iter_mut().zip(path_kick_hat(spec, &phi_hat, path, j)) {
                *a += d;
            }
        }
        snaps[slot] = Some(to_field(grid, &acc, times[slot]));
    }
    Ok(snaps.into_iter().map(Option::unwrap).collect())
}

/// Mean-square mass of the far-field part of the tail beyond a path, for
/// diagnostics.
pub fn far_field_mass(spec: &NoiseSpec, path: &BrownianPath, horizon: f64) -> f64 {
    TailSum::new(spec, path, horizon).far_mass * spec.phi.l2_norm().powi(2)
}

/// Result of [`tail_decay_probe`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TailProbe {
    pub times: Vec<f64>,
    pub mean: Vec<f64>,
    pub standard_error: Vec<f64>,
    pub paths: usize,
    pub slope: f64,
    /// 95% half-width of the slope from the per-node standard errors.
    pub slope_halfwidth: f64,
}

/// Log–log slope of `Ê‖z_*(t)‖₂²` against `t`; paths use streams
/// `0..n_paths` of `spec.seed`, each long enough to cover `t_grid`.
pub fn tail_decay_probe(
    spec: &NoiseSpec,
    t_grid: &[f64],
    n_paths: usize,
    dt: f64,
) -> Result<TailProbe> {
    if t_grid.len() < 2 || t_grid.windows(2).any(|w| w[1] <= w[0]) || t_grid[0] <= 0.0 {
        return Err(Error::InvalidArgument("tail probe needs increasing positive times".into()));
    }
    if n_paths < 2 {
        return Err(Error::InvalidArgument("tail probe needs at least two paths".into()));
    }
    let t_max = *t_grid.last().expect("non-empty");
    let horizon = spec.envelope.horizon_for(t_max)?;
    let m = (t_max / dt).round() as usize;
    let per_path = (0..n_paths as u64)
        .into_par_iter()
        .map(|stream| {
            let path = sample_path_stream(spec.seed, stream, dt, m)?;
            let fields = tail_fields(spec, &path, t_grid, horizon)?;
            Ok(fields.iter().map(|f| f.l2_norm().powi(2)).collect::<Vec<f64>>())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let nt = t_grid.len();
    let n = n_paths as f64;
    let mut mean = vec![0.0; nt];
    let mut se = vec![0.0; nt];
    for i in 0..nt {
        let m1 = per_path.iter().map(|v| v[i]).sum::<f64>() / n;
        let var = per_path.iter().map(|v| (v[i] - m1).powi(2)).sum::<f64>() / (n - 1.0);
        mean[i] = m1;
        se[i] = (var / n).sqrt();
    }
    let lx: Vec<f64> = t_grid.iter().map(|t| t.ln()).collect();
    let ly: Vec<f64> = mean.iter().map(|m| m.ln()).collect();
    let mx = lx.iter().sum::<f64>() / nt as f64;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let coef: Vec<f64> = lx.iter().map(|x| (x - mx) / sxx).collect();
    let slope: f64 = coef.iter().zip(&ly).map(|(c, y)| c * y).sum();
    let var_slope: f64 = coef
        .iter()
        .zip(mean.iter().zip(&se))
        .map(|(c, (m, s))| c * c * (s / m).powi(2))
        .sum();
    Ok(TailProbe {
        times: t_grid.to_vec(),
        mean,
        standard_error: se,
        paths: n_paths,
        slope,
        slope_halfwidth: 1.96 * var_slope.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_spec(envelope: Envelope) -> NoiseSpec {
        let grid = Grid::new(64, 20.0).unwrap();
        let phi = Field::from_fn(&grid, |x| (-x * x).exp());
        NoiseSpec::new(phi, envelope, 7).unwrap()
    }

    #[test]
    fn envelope_masses() {
        let g = Envelope::Power { gamma: 0.7 };
        let numeric: f64 = (0..100_000)
            .map(|i| {
                let t = 2.0 + (i as f64 + 0.5) * 3.0 / 100_000.0;
                g.value(t).powi(2) * 3.0 / 100_000.0
            })
            .sum();
        assert!((g.square_integral(2.0, 5.0) - numeric).abs() < 1e-9);
        assert!((g.tail_mass(10.0) - 11f64.powf(-0.4) / 0.4).abs() < 1e-14);
        let h = g.horizon_for(10.0).unwrap();
        assert!((g.tail_mass(h) / g.tail_mass(10.0) - HORIZON_RULE).abs() < 1e-9);
        assert!(Envelope::Constant { level: 1.0 }.horizon_for(0.0).is_err());
        let cut = Envelope::Truncated { gamma: 0.7, end: 3.0 };
        assert_eq!(cut.value(3.0), 0.0);
        assert_eq!(cut.tail_mass(4.0), 0.0);
        assert!((cut.square_integral(1.0, 9.0) - g.square_integral(1.0, 3.0)).abs() < 1e-15);
    }

    #[test]
    fn paths_are_reproducible_and_prefix_stable() {
        let a = sample_path(3, 0.01, 500).unwrap();
        let b = sample_path(3, 0.01, 500).unwrap();
        assert_eq!(a, b);
        let long = sample_path(3, 0.01, 900).unwrap();
        assert_eq!(long.truncated(500), a);
        assert_ne!(sample_path(4, 0.01, 500).unwrap().increments, a.increments);
        assert!(sample_path(3, 0.0, 5).is_err());
        assert!(sample_path(3, 0.1, 0).is_err());
    }

    #[test]
    fn zero_envelope_gives_zero() {
        let spec = gaussian_spec(Envelope::Zero);
        let path = sample_path(1, 0.05, 40).unwrap();
        let tr = convolution_trace(&spec, &path, 10).unwrap();
        assert!(tr.snapshots().iter().all(|f| f.sup_norm() == 0.0));
        let tail = tail_convolution(&spec, &path, 1.0, 1.5).unwrap();
        assert_eq!(tail.sup_norm(), 0.0);
    }

    #[test]
    fn single_step_is_propagated_kick() {
        let spec = gaussian_spec(Envelope::Power { gamma: 0.7 });
        let path = sample_path(9, 0.1, 1).unwrap();
        let tr = stochastic_convolution(&spec, &path, &[0.0, 0.1]).unwrap();
        let expect = crate::spectral::airy_propagate(&spec.phi.scaled(path.increments[0]), 0.1)
            .unwrap();
        let diff = tr.snapshot(1).sub(&expect).sup_norm();
        assert!(diff < 1e-14, "{diff}");
        assert_eq!(tr.snapshot(0).sup_norm(), 0.0);
    }

    #[test]
    fn misaligned_times_rejected() {
        let spec = gaussian_spec(Envelope::Power { gamma: 0.7 });
        let path = sample_path(9, 0.1, 10).unwrap();
        assert!(stochastic_convolution(&spec, &path, &[0.0, 0.15]).is_err());
        assert!(stochastic_convolution(&spec, &path, &[0.0, 2.0]).is_err());
    }

    #[test]
    fn horizon_rule_enforced() {
        let spec = gaussian_spec(Envelope::Power { gamma: 0.7 });
        let path = sample_path(9, 0.1, 100).unwrap();
        assert!(matches!(
            tail_convolution(&spec, &path, 5.0, 100.0),
            Err(Error::HorizonRule { .. })
        ));
    }

    #[test]
    fn tail_trace_matches_pointwise_tails() {
        let spec = gaussian_spec(Envelope::Power { gamma: 3.0 });
        let path = sample_path(5, 0.05, 2000).unwrap();
        let times = [1.0, 2.0, 3.0];
        let horizon = spec.envelope.horizon_for(3.0).unwrap();
        let tr = tail_trace(&spec, &path, &times, horizon).unwrap();
        for (i, &t) in times.iter().enumerate() {
            let single = tail_convolution(&spec, &path, t, horizon).unwrap();
            assert!(tr.snapshot(i).sub(&single).sup_norm() < 1e-13);
        }
    }
}
