use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Periodic grid of `n` points on `[-L/2, L/2)`.
///
/// Spectral coefficients are stored in FFT order: index `j` carries the
/// frequency `2π·j/L` for `j < n/2` and `2π·(j-n)/L` otherwise, so the
/// unpaired Nyquist mode `-π n/L` sits at index `n/2`.
#[derive(Clone)]
pub struct Grid {
    inner: Arc<GridInner>,
}

struct GridInner {
    n: usize,
    length: f64,
    spacing: f64,
    frequencies: Vec<f64>,
    // e^{-i x_0 ξ_j}, folds the grid origin into the transform
    shift: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("n", &self.n())
            .field("length", &self.length())
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.n() == other.n() && self.length() == other.length())
    }
}

impl Grid {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "point count must be a power of two >= 8, got {n}"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "period must be positive and finite, got {length}"
            )));
        }
        let spacing = length / n as f64;
        let dk = 2.0 * PI / length;
        let half = n / 2;
        let frequencies: Vec<f64> = (0..n)
            .map(|j| {
                if j < half {
                    j as f64 * dk
                } else {
                    (j as f64 - n as f64) * dk
                }
            })
            .collect();
        let x0 = -0.5 * length;
        let shift = frequencies
            .iter()
            .map(|&k| Complex64::from_polar(1.0, -x0 * k))
            .collect();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        Ok(Self {
            inner: Arc::new(GridInner {
                n,
                length,
                spacing,
                frequencies,
                shift,
                forward,
                inverse,
            }),
        })
    }

    pub fn n(&self) -> usize {
        self.inner.n
    }

    pub fn length(&self) -> f64 {
        self.inner.length
    }

    pub fn spacing(&self) -> f64 {
        self.inner.spacing
    }

    /// Frequencies in storage (FFT) order.
    pub fn frequencies(&self) -> &[f64] {
        &self.inner.frequencies
    }

    pub fn nyquist_index(&self) -> usize {
        self.inner.n / 2
    }

    pub fn max_frequency(&self) -> f64 {
        PI / self.inner.spacing
    }

    pub fn point(&self, j: usize) -> f64 {
        -0.5 * self.inner.length + j as f64 * self.inner.spacing
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n()).map(|j| self.point(j)).collect()
    }

    /// `û(ξ) = Σ_j u(x_j) e^{-i x_j ξ} dx`.
    pub fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        debug_assert_eq!(values.len(), self.n());
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.inner.forward.process(&mut buf);
        let dx = self.inner.spacing;
        for (c, s) in buf.iter_mut().zip(&self.inner.shift) {
            *c *= s * dx;
        }
        buf
    }

    /// Inverse of [`Grid::forward`]; returns the complex physical values.
    pub fn inverse_complex(&self, coefficients: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(coefficients.len(), self.n());
        let inv_len = 1.0 / self.inner.length;
        let mut buf: Vec<Complex64> = coefficients
            .iter()
            .zip(&self.inner.shift)
            .map(|(c, s)| c * s.conj() * inv_len)
            .collect();
        self.inner.inverse.process(&mut buf);
        buf
    }

    /// Inverse transform keeping the real part.
    pub fn inverse(&self, coefficients: &[Complex64]) -> Vec<f64> {
        self.inverse_complex(coefficients)
            .into_iter()
            .map(|c| c.re)
            .collect()
    }

    /// Complex-to-complex forward transform with the same normalization.
    pub fn forward_complex(&self, values: &[Complex64]) -> Vec<Complex64> {
        let mut buf = values.to_vec();
        self.inner.forward.process(&mut buf);
        let dx = self.inner.spacing;
        for (c, s) in buf.iter_mut().zip(&self.inner.shift) {
            *c *= s * dx;
        }
        buf
    }

    /// Symbol `e^{itξ³}` of the Airy group in storage order.
    ///
    /// The Nyquist mode has no partner of opposite frequency, so an odd
    /// symbol cannot act on it without leaving the real fields; it is held
    /// fixed, which keeps the group unitary and real.
    pub fn airy_symbol(&self, t: f64) -> Vec<Complex64> {
        let nyq = self.nyquist_index();
        self.frequencies()
            .iter()
            .enumerate()
            .map(|(j, &k)| {
                if j == nyq {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::from_polar(1.0, t * k * k * k)
                }
            })
            .collect()
    }

    /// Symbol `iξ` of `∂_x`, zero on the Nyquist mode.
    pub fn derivative_symbol(&self) -> Vec<Complex64> {
        let nyq = self.nyquist_index();
        self.frequencies()
            .iter()
            .enumerate()
            .map(|(j, &k)| {
                if j == nyq {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(0.0, k)
                }
            })
            .collect()
    }

    /// Spectral derivative `∂_x^order` of real samples.
    pub fn derivative(&self, values: &[f64], order: u32) -> Vec<f64> {
        let mut hat = self.forward(values);
        let sym = self.derivative_symbol();
        for (c, s) in hat.iter_mut().zip(&sym) {
            *c *= s.powu(order);
        }
        self.inverse(&hat)
    }

    /// Zero every mode with `|ξ| > fraction · ξ_max`.
    pub fn truncate(&self, coefficients: &mut [Complex64], fraction: f64) {
        let cutoff = fraction * self.max_frequency();
        for (c, &k) in coefficients.iter_mut().zip(self.frequencies()) {
            if k.abs() > cutoff {
                *c = Complex64::new(0.0, 0.0);
            }
        }
    }

    pub fn same_as(&self, other: &Grid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "({}, {}) vs ({}, {})",
                self.n(),
                self.length(),
                other.n(),
                other.length()
            )))
        }
    }
}
