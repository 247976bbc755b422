//! Integrating-factor RK4 for `u_t + u_xxx = s (u^{k+1})_x` with additive
//! noise, the mass/energy functionals and the soliton oracle.
//!
//! In Fourier variables `û_t = iξ³ û + N(û)`; the scheme integrates
//! `w = e^{-itξ³} û` with classical RK4, so the Airy part is exact.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::{BrownianPath, NoiseSpec};
use crate::spectral::{Field, Grid, SpaceTimeTrace};

/// Stability constant in `dt <= CFL · dx / ((k+1) ‖u‖_∞^k)`; RK4 is stable up
/// to `2.8/π ≈ 0.89` on the advective scale of the dealiased spectrum.
pub const CFL: f64 = 0.8;
/// Largest tolerated growth of `‖u‖₂` over one step.
pub const GROWTH_LIMIT: f64 = 10.0;

/// Sign in front of `(u^{k+1})_x` on the right-hand side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    /// `+(u^{k+1})_x`, the defocusing problem.
    Defocusing,
    /// `-(u^{k+1})_x`.
    Focusing,
    /// Nonlinearity switched off.
    Off,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Defocusing => 1.0,
            Sign::Focusing => -1.0,
            Sign::Off => 0.0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub grid: Grid,
    pub k: u32,
    pub sign: Sign,
    pub dt: f64,
    pub dealias: f64,
}

impl SolverConfig {
    pub fn new(grid: &Grid, k: u32, sign: Sign, dt: f64) -> Result<Self> {
        Self::with_dealias(grid, k, sign, dt, 2.0 / 3.0)
    }

    pub fn with_dealias(grid: &Grid, k: u32, sign: Sign, dt: f64, dealias: f64) -> Result<Self> {
        if k < 4 {
            return Err(Error::InvalidArgument(format!("nonlinearity degree k must be >= 4, got {k}")));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidArgument(format!("time step must be positive, got {dt}")));
        }
        if !(dealias > 0.5 && dealias < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "dealiasing fraction must lie in (1/2, 1), got {dealias}"
            )));
        }
        Ok(Self {
            grid: grid.clone(),
            k,
            sign,
            dt,
            dealias,
        })
    }

    /// Scaling-critical regularity `(k-4)/(2k)`.
    pub fn s_k(&self) -> f64 {
        (self.k as f64 - 4.0) / (2.0 * self.k as f64)
    }

    pub fn with_dt(&self, dt: f64) -> Result<Self> {
        Self::with_dealias(&self.grid, self.k, self.sign, dt, self.dealias)
    }

    pub fn with_sign(&self, sign: Sign) -> Self {
        Self {
            sign,
            ..self.clone()
        }
    }

    /// Largest step allowed by [`CFL`] for data of sup norm `sup`.
    pub fn cfl_bound(&self, sup: f64) -> f64 {
        if self.sign == Sign::Off || sup == 0.0 {
            return f64::INFINITY;
        }
        CFL * self.grid.spacing() / ((self.k + 1) as f64 * sup.powi(self.k as i32))
    }
}

/// Precomputed symbols for repeated stepping on one configuration.
pub struct Stepper {
    cfg: SolverConfig,
    half: Vec<Complex64>,
    full: Vec<Complex64>,
    // i ξ · sign on kept modes, zero on dealiased ones
    deriv: Vec<Complex64>,
    keep: Vec<bool>,
}

impl Stepper {
    pub fn new(cfg: &SolverConfig) -> Self {
        let grid = &cfg.grid;
        let cutoff = cfg.dealias * grid.max_frequency();
        let keep: Vec<bool> = grid.frequencies().iter().map(|k| k.abs() <= cutoff).collect();
        let s = cfg.sign.value();
        let deriv = grid
            .derivative_symbol()
            .iter()
            .zip(&keep)
            .map(|(d, &kp)| if kp { d * s } else { Complex64::new(0.0, 0.0) })
            .collect();
        Self {
            cfg: cfg.clone(),
            half: grid.airy_symbol(0.5 * cfg.dt),
            full: grid.airy_symbol(cfg.dt),
            deriv,
            keep,
        }
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    /// `dt · N(û)` and the sup norm of the dealiased field it was built from.
    fn rhs(&self, hat: &[Complex64]) -> Result<(Vec<Complex64>, f64)> {
        let grid = &self.cfg.grid;
        let filtered: Vec<Complex64> = hat
            .iter()
            .zip(&self.keep)
            .map(|(c, &kp)| if kp { *c } else { Complex64::new(0.0, 0.0) })
            .collect();
        let u = grid.inverse(&filtered);
        let sup = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let p = self.cfg.k as i32 + 1;
        let power: Vec<f64> = u.iter().map(|v| v.powi(p)).collect();
        if power.iter().any(|v| !v.is_finite()) {
            return Err(Error::Instability {
                t: f64::NAN,
                reason: "non-finite nonlinear term".into(),
            });
        }
        let mut out = grid.forward(&power);
        for (o, d) in out.iter_mut().zip(&self.deriv) {
            *o *= d * self.cfg.dt;
        }
        Ok((out, sup))
    }

    /// One deterministic step in Fourier variables.
    pub fn step_hat(&self, hat: &mut Vec<Complex64>) -> Result<()> {
        if self.cfg.sign == Sign::Off {
            for (c, e) in hat.iter_mut().zip(&self.full) {
                *c *= e;
            }
            return Ok(());
        }
        let before: f64 = hat.iter().map(|c| c.norm_sqr()).sum();
        let (a, sup) = self.rhs(hat)?;
        let bound = self.cfg.cfl_bound(sup);
        if self.cfg.dt > bound {
            return Err(Error::Cfl {
                dt: self.cfg.dt,
                bound,
            });
        }
        let e = &self.half;
        let stage: Vec<Complex64> = (0..hat.len()).map(|j| e[j] * (hat[j] + 0.5 * a[j])).collect();
        let (b, _) = self.rhs(&stage)?;
        let stage: Vec<Complex64> = (0..hat.len()).map(|j| e[j] * hat[j] + 0.5 * b[j]).collect();
        let (c, _) = self.rhs(&stage)?;
        let stage: Vec<Complex64> = (0..hat.len())
            .map(|j| self.full[j] * hat[j] + e[j] * c[j])
            .collect();
        let (d, _) = self.rhs(&stage)?;
        for j in 0..hat.len() {
            hat[j] = self.full[j] * hat[j]
                + (self.full[j] * a[j] + 2.0 * e[j] * (b[j] + c[j]) + d[j]) / 6.0;
        }
        let after: f64 = hat.iter().map(|c| c.norm_sqr()).sum();
        if !after.is_finite() || after > GROWTH_LIMIT * GROWTH_LIMIT * before.max(f64::MIN_POSITIVE) {
            return Err(Error::Instability {
                t: f64::NAN,
                reason: format!("L² norm grew from {:e} to {:e}", before.sqrt(), after.sqrt()),
            });
        }
        Ok(())
    }
}

fn with_time(err: Error, t: f64) -> Error {
    match err {
        Error::Instability { reason, .. } => Error::Instability { t, reason },
        e => e,
    }
}

/// `sign · ∂_x P[(P u)^{k+1}]` with `P` the dealiasing projection.
pub fn nonlinear_term(u: &Field, k: u32, sign: Sign, dealias: f64) -> Result<Field> {
    let cfg = SolverConfig::with_dealias(u.grid(), k, sign, 1.0, dealias)?;
    let stepper = Stepper::new(&cfg);
    let hat = u.grid().forward(u.values());
    let (n, _) = stepper.rhs(&hat)?;
    Field::new(u.grid(), u.grid().inverse(&n))
}

pub fn step_deterministic(u: &Field, cfg: &SolverConfig) -> Result<Field> {
    cfg.grid.same_as(u.grid())?;
    let stepper = Stepper::new(cfg);
    let mut hat = u.grid().forward(u.values());
    stepper.step_hat(&mut hat)?;
    Field::new(u.grid(), u.grid().inverse(&hat))
}

/// One step of the stochastic flow: the increment `φ g(t) ΔB` is added
/// first, then the deterministic step is taken from the kicked state.
pub fn step_stochastic(
    u: &Field,
    cfg: &SolverConfig,
    spec: &NoiseSpec,
    d_b: f64,
    t: f64,
) -> Result<Field> {
    cfg.grid.same_as(spec.grid())?;
    let kicked = u.zip_with(&spec.phi, |a, p| a + p * spec.envelope.value(t) * d_b);
    step_deterministic(&kicked, cfg).map_err(|e| with_time(e, t))
}

/// `Σ u² dx`.
pub fn mass(u: &Field) -> f64 {
    let n = u.l2_norm();
    n * n
}

/// `½ Σ u_x² dx + sign/(k+2) Σ u^{k+2} dx`, `u_x` spectral.
pub fn energy(u: &Field, k: u32, sign: Sign) -> f64 {
    let dx = u.grid().spacing();
    let ux = u.derivative(1);
    let kinetic: f64 = ux.values().iter().map(|v| v * v).sum::<f64>() * dx;
    let potential: f64 = u.values().iter().map(|v| v.powi(k as i32 + 2)).sum::<f64>() * dx;
    0.5 * kinetic + sign.value() * potential / (k as f64 + 2.0)
}

/// Mass, energy and the Itô integrands of `M + E`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct EnergyReport {
    pub mass: f64,
    pub energy: f64,
    /// `∫(2uφ + u^{k+1}φ + u_x φ_x) g dx`, the martingale integrand.
    pub f1: f64,
    /// `∫((k+1)/2 u^k φ² + φ² + φ_x²) g² dx`.
    pub f2: f64,
    /// Exact Itô drift of `M + E`: `∫(φ² + ½φ_x² + s(k+1)/2 u^k φ²) g² dx`.
    /// It differs from `f2` by `½‖φ_x‖² g²` (and the sign `s`).
    pub drift: f64,
}

pub fn ito_drift(u: &Field, cfg: &SolverConfig, spec: &NoiseSpec, t: f64) -> Result<EnergyReport> {
    u.grid().same_as(spec.grid())?;
    let k = cfg.k as i32;
    let s = cfg.sign.value();
    let g = spec.envelope.value(t);
    let dx = u.grid().spacing();
    let ux = u.derivative(1);
    let phi = &spec.phi;
    let phix = phi.derivative(1);
    let (mut f1, mut f2, mut drift) = (0.0, 0.0, 0.0);
    for j in 0..u.grid().n() {
        let (v, vx, p, px) = (u.values()[j], ux.values()[j], phi.values()[j], phix.values()[j]);
        let vk = v.powi(k);
        f1 += 2.0 * v * p + vk * v * p + vx * px;
        f2 += 0.5 * (k + 1) as f64 * vk * p * p + p * p + px * px;
        drift += p * p + 0.5 * px * px + 0.5 * s * (k + 1) as f64 * vk * p * p;
    }
    Ok(EnergyReport {
        mass: mass(u),
        energy: energy(u, cfg.k, cfg.sign),
        f1: f1 * g * dx,
        f2: f2 * g * g * dx,
        drift: drift * g * g * dx,
    })
}

/// `steps` deterministic steps from `u0`, keeping every `stride`-th state.
pub fn simulate_deterministic(
    u0: &Field,
    cfg: &SolverConfig,
    steps: usize,
    stride: usize,
) -> Result<SpaceTimeTrace> {
    check_stride(steps, stride)?;
    cfg.grid.same_as(u0.grid())?;
    let stepper = Stepper::new(cfg);
    let grid = &cfg.grid;
    let mut hat = grid.forward(u0.values());
    let mut snaps = vec![u0.clone()];
    for n in 0..steps {
        stepper
            .step_hat(&mut hat)
            .map_err(|e| with_time(e, n as f64 * cfg.dt))?;
        if (n + 1) % stride == 0 {
            snaps.push(Field::new(grid, grid.inverse(&hat))?);
        }
    }
    SpaceTimeTrace::new(grid, 0.0, stride as f64 * cfg.dt, snaps)
}

/// Stochastic run over the whole path, keeping every `stride`-th state.
pub fn simulate_stochastic(
    u0: &Field,
    cfg: &SolverConfig,
    spec: &NoiseSpec,
    path: &BrownianPath,
    stride: usize,
) -> Result<SpaceTimeTrace> {
    simulate_stochastic_from(u0, cfg, spec, path, 0, stride)
}

/// Stochastic run from `u(t_start)` at path step `start` to the path end.
pub fn simulate_stochastic_from(
    u_start: &Field,
    cfg: &SolverConfig,
    spec: &NoiseSpec,
    path: &BrownianPath,
    start: usize,
    stride: usize,
) -> Result<SpaceTimeTrace> {
    let steps = path.steps().checked_sub(start).ok_or_else(|| {
        Error::InvalidArgument(format!("start step {start} beyond the path end {}", path.steps()))
    })?;
    check_stride(steps, stride)?;
    cfg.grid.same_as(u_start.grid())?;
    cfg.grid.same_as(spec.grid())?;
    if (path.dt - cfg.dt).abs() > 1e-12 * cfg.dt {
        return Err(Error::Misaligned(format!(
            "path step {} differs from solver step {}",
            path.dt, cfg.dt
        )));
    }
    let stepper = Stepper::new(cfg);
    let grid = &cfg.grid;
    let phi_hat = spec.phi.forward().into_coefficients();
    let mut hat = grid.forward(u_start.values());
    let mut snaps = vec![u_start.clone()];
    for n in start..path.steps() {
        let t = n as f64 * cfg.dt;
        let kick = spec.envelope.value(t) * path.increments[n];
        if kick != 0.0 {
            for (h, p) in hat.iter_mut().zip(&phi_hat) {
                *h += p * kick;
            }
        }
        stepper.step_hat(&mut hat).map_err(|e| with_time(e, t))?;
        if (n + 1 - start).is_multiple_of(stride) {
            snaps.push(Field::new(grid, grid.inverse(&hat))?);
        }
    }
    SpaceTimeTrace::new(grid, start as f64 * cfg.dt, stride as f64 * cfg.dt, snaps)
}

fn check_stride(steps: usize, stride: usize) -> Result<()> {
    if stride == 0 || !steps.is_multiple_of(stride) {
        return Err(Error::InvalidArgument(format!(
            "snapshot stride {stride} must divide the step count {steps}"
        )));
    }
    Ok(())
}

/// Ground state `Q(x) = ((k+2)/2)^{1/k} sech^{2/k}(kx/2)` of
/// `Q'' - Q + Q^{k+1} = 0`.
pub fn ground_state(k: u32, x: f64) -> f64 {
    let kf = k as f64;
    ((kf + 2.0) / 2.0).powf(1.0 / kf) * (1.0 / (0.5 * kf * x).cosh()).powf(2.0 / kf)
}

/// Traveling wave `Q_c(x - x0)`, `Q_c(x) = c^{1/k} Q(√c x)`, of the focusing
/// equation; it moves right with speed `c`.
pub fn soliton(k: u32, sign: Sign, c: f64, x0: f64, grid: &Grid) -> Result<Field> {
    if sign != Sign::Focusing {
        return Err(Error::InvalidArgument(
            "solitary waves exist only for the focusing sign".into(),
        ));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidArgument(format!("soliton speed must be positive, got {c}")));
    }
    let amp = c.powf(1.0 / k as f64);
    let rc = c.sqrt();
    Ok(Field::from_fn(grid, |x| amp * ground_state(k, rc * (x - x0))))
}

/// `max |Q'' - Q + Q^{k+1}|` on `grid` with spectral `Q''`.
pub fn ground_state_residual(k: u32, grid: &Grid) -> f64 {
    let q = Field::from_fn(grid, |x| ground_state(k, x));
    let q2 = q.derivative(2);
    q.values()
        .iter()
        .zip(q2.values())
        .map(|(&v, &d)| (d - v + v.powi(k as i32 + 1)).abs())
        .fold(0.0, f64::max)
}
