use num_complex::Complex64;

use super::grid::Grid;
use crate::error::{Error, Result};

/// Real samples `u(x_j)` on a [`Grid`].
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
}

/// Fourier coefficients `û(ξ_j)` in the grid's storage order.
#[derive(Clone, Debug)]
pub struct SpectralField {
    grid: Grid,
    coefficients: Vec<Complex64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivativeKind {
    /// Symbol `|ξ|^α`, with the zero mode sent to zero unless `α = 0`.
    Homogeneous,
    /// Symbol `(1 + ξ²)^{α/2}`.
    Inhomogeneous,
}

/// What to do with a non-vanishing zero mode under a negative homogeneous order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ZeroMode {
    #[default]
    Require,
    Discard,
}

impl Field {
    pub fn new(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::InvalidArgument(format!(
                "field has {} values for a grid of {} points",
                values.len(),
                grid.n()
            )));
        }
        Ok(Self {
            grid: grid.clone(),
            values,
        })
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self {
            grid: grid.clone(),
            values: vec![0.0; grid.n()],
        }
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: grid.clone(),
            values: grid.points().into_iter().map(f).collect(),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn forward(&self) -> SpectralField {
        SpectralField {
            grid: self.grid.clone(),
            coefficients: self.grid.forward(&self.values),
        }
    }

    /// `(Σ |u_j|^2 dx)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v * v).sum::<f64>() * self.grid.spacing()).sqrt()
    }

    pub fn lp_norm(&self, p: super::Exponent) -> f64 {
        super::norms::lp_norm(&self.values, self.grid.spacing(), p)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn dot(&self, other: &Field) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum::<f64>()
            * self.grid.spacing()
    }

    pub fn scaled(&self, s: f64) -> Field {
        self.map(|v| v * s)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_with(&self, other: &Field, f: impl Fn(f64, f64) -> f64) -> Field {
        debug_assert_eq!(self.grid, other.grid);
        Field {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn add(&self, other: &Field) -> Field {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Field) -> Field {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn derivative(&self, order: u32) -> Field {
        Field {
            grid: self.grid.clone(),
            values: self.grid.derivative(&self.values, order),
        }
    }

    /// Cyclic shift of the profile by `shift` (any real amount), spectrally.
    pub fn translate(&self, shift: f64) -> Field {
        let mut hat = self.forward();
        let nyq = self.grid.nyquist_index();
        for (j, (c, &k)) in hat
            .coefficients
            .iter_mut()
            .zip(self.grid.frequencies())
            .enumerate()
        {
            if j == nyq {
                *c *= (k * shift).cos();
            } else {
                *c *= Complex64::from_polar(1.0, -k * shift);
            }
        }
        hat.inverse()
    }
}

impl SpectralField {
    pub fn new(grid: &Grid, coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.len() != grid.n() {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients for a grid of {} points",
                coefficients.len(),
                grid.n()
            )));
        }
        Ok(Self {
            grid: grid.clone(),
            coefficients,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn coefficients_mut(&mut self) -> &mut [Complex64] {
        &mut self.coefficients
    }

    pub fn into_coefficients(self) -> Vec<Complex64> {
        self.coefficients
    }

    pub fn inverse(&self) -> Field {
        Field {
            grid: self.grid.clone(),
            values: self.grid.inverse(&self.coefficients),
        }
    }

    /// `(1/L) Σ |û_j|^2`, equal to the squared physical L² norm.
    pub fn energy(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>() / self.grid.length()
    }

    pub fn apply(&mut self, symbol: impl Fn(usize, f64) -> Complex64) {
        for (j, (c, &k)) in self
            .coefficients
            .iter_mut()
            .zip(self.grid.frequencies())
            .enumerate()
        {
            *c *= symbol(j, k);
        }
    }
}

/// Fourier multiplier `|ξ|^α` (homogeneous) or `⟨ξ⟩^α` (inhomogeneous).
pub fn fractional_derivative(
    f: &Field,
    alpha: f64,
    kind: DerivativeKind,
    zero_mode: ZeroMode,
) -> Result<Field> {
    if !alpha.is_finite() {
        return Err(Error::InvalidArgument(format!("non-finite order {alpha}")));
    }
    let mut hat = f.forward();
    if kind == DerivativeKind::Homogeneous && alpha < 0.0 && zero_mode == ZeroMode::Require {
        let value = hat.coefficients[0].norm();
        let threshold = 1e-10 * f.l2_norm();
        if value > threshold {
            return Err(Error::NonZeroMean { value, threshold });
        }
    }
    let symbols = multiplier(f.grid(), alpha, kind);
    for (c, s) in hat.coefficients.iter_mut().zip(&symbols) {
        *c *= *s;
    }
    Ok(hat.inverse())
}

pub(crate) fn multiplier(grid: &Grid, alpha: f64, kind: DerivativeKind) -> Vec<f64> {
    grid.frequencies()
        .iter()
        .map(|&k| match kind {
            DerivativeKind::Homogeneous => {
                if alpha == 0.0 {
                    1.0
                } else if k == 0.0 {
                    0.0
                } else {
                    k.abs().powf(alpha)
                }
            }
            DerivativeKind::Inhomogeneous => (1.0 + k * k).powf(0.5 * alpha),
        })
        .collect()
}

/// Exact Airy evolution `û(t,ξ) = e^{itξ³} û(0,ξ)`, solving `∂_t u + u_xxx = 0`.
pub fn airy_propagate(f: &Field, t: f64) -> Result<Field> {
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!("non-finite time {t}")));
    }
    if t == 0.0 {
        return Ok(f.clone());
    }
    let mut hat = f.forward();
    let symbol = f.grid().airy_symbol(t);
    for (c, s) in hat.coefficients.iter_mut().zip(&symbol) {
        *c *= s;
    }
    Ok(hat.inverse())
}

/// `‖⟨ξ⟩^s û‖` under the discrete Plancherel measure.
pub fn sobolev_norm(f: &Field, s: f64) -> f64 {
    let hat = f.forward();
    let sum: f64 = hat
        .coefficients
        .iter()
        .zip(f.grid().frequencies())
        .map(|(c, &k)| (1.0 + k * k).powf(s) * c.norm_sqr())
        .sum();
    (sum / f.grid().length()).sqrt()
}
