use std::ops::Range;

use super::field::Field;
use super::grid::Grid;
use crate::error::{Error, Result};

/// Snapshots `u(t_n, ·)` on a uniform time grid `t_n = t0 + n·dt`.
#[derive(Clone, Debug)]
pub struct SpaceTimeTrace {
    grid: Grid,
    t0: f64,
    dt: f64,
    snapshots: Vec<Field>,
}

impl SpaceTimeTrace {
    pub fn new(grid: &Grid, t0: f64, dt: f64, snapshots: Vec<Field>) -> Result<Self> {
        if snapshots.is_empty() {
            return Err(Error::InvalidArgument("trace needs at least one snapshot".into()));
        }
        if snapshots.len() > 1 && !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidArgument(format!("time step must be positive, got {dt}")));
        }
        for s in &snapshots {
            grid.same_as(s.grid())?;
        }
        Ok(Self {
            grid: grid.clone(),
            t0,
            dt,
            snapshots,
        })
    }

    /// Build from explicit times, which must be uniform to relative 1e-12.
    pub fn from_times(times: &[f64], snapshots: Vec<Field>) -> Result<Self> {
        if times.len() != snapshots.len() || times.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "{} times for {} snapshots",
                times.len(),
                snapshots.len()
            )));
        }
        let grid = snapshots[0].grid().clone();
        if times.len() == 1 {
            return Self::new(&grid, times[0], 0.0, snapshots);
        }
        let m = times.len() - 1;
        let dt = (times[m] - times[0]) / m as f64;
        let scale = times[0].abs().max(times[m].abs()).max(dt);
        for (n, &t) in times.iter().enumerate() {
            let expect = times[0] + n as f64 * dt;
            if (t - expect).abs() > 1e-12 * scale {
                return Err(Error::Misaligned(format!("time {t} is off the uniform grid")));
            }
        }
        Self::new(&grid, times[0], dt, snapshots)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    /// Number of time steps `m` (one less than the snapshot count).
    pub fn steps(&self) -> usize {
        self.snapshots.len() - 1
    }

    pub fn time(&self, n: usize) -> f64 {
        self.t0 + n as f64 * self.dt
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|n| self.time(n)).collect()
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.steps())
    }

    pub fn snapshots(&self) -> &[Field] {
        &self.snapshots
    }

    pub fn snapshot(&self, n: usize) -> &Field {
        &self.snapshots[n]
    }

    pub fn last(&self) -> &Field {
        self.snapshots.last().expect("non-empty trace")
    }

    /// Trapezoid weights on the time grid.
    pub fn time_weights(&self) -> Vec<f64> {
        let m = self.steps();
        if m == 0 {
            return vec![0.0];
        }
        let mut w = vec![self.dt; m + 1];
        w[0] *= 0.5;
        w[m] *= 0.5;
        w
    }

    /// Index of the snapshot at time `t`, if `t` lies on the grid.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        if self.len() == 1 {
            return ((t - self.t0).abs() <= 1e-9 * self.t0.abs().max(1.0)).then_some(0);
        }
        let x = (t - self.t0) / self.dt;
        let n = x.round();
        if (x - n).abs() > 1e-6 || n < 0.0 || n as usize >= self.len() {
            None
        } else {
            Some(n as usize)
        }
    }

    pub fn window(&self, range: Range<usize>) -> Result<Self> {
        if range.start >= range.end || range.end > self.len() {
            return Err(Error::InvalidArgument(format!(
                "window {range:?} outside 0..{}",
                self.len()
            )));
        }
        Ok(Self {
            grid: self.grid.clone(),
            t0: self.time(range.start),
            dt: self.dt,
            snapshots: self.snapshots[range].to_vec(),
        })
    }

    /// Snapshots with `t_a <= t <= t_b` (grid-aligned endpoints).
    pub fn restrict(&self, t_a: f64, t_b: f64) -> Result<Self> {
        let a = self
            .index_of(t_a)
            .ok_or_else(|| Error::Misaligned(format!("{t_a} is not on the trace grid")))?;
        let b = self
            .index_of(t_b)
            .ok_or_else(|| Error::Misaligned(format!("{t_b} is not on the trace grid")))?;
        self.window(a..b + 1)
    }

    pub fn map(&self, f: impl Fn(&Field) -> Field) -> Self {
        Self {
            grid: self.grid.clone(),
            t0: self.t0,
            dt: self.dt,
            snapshots: self.snapshots.iter().map(f).collect(),
        }
    }

    pub fn try_map(&self, f: impl Fn(&Field) -> Result<Field>) -> Result<Self> {
        Ok(Self {
            grid: self.grid.clone(),
            t0: self.t0,
            dt: self.dt,
            snapshots: self.snapshots.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn check_aligned(&self, other: &SpaceTimeTrace) -> Result<()> {
        self.grid.same_as(&other.grid)?;
        let tol = 1e-9 * self.dt.abs().max(1e-300);
        if self.len() != other.len()
            || (self.t0 - other.t0).abs() > tol.max(1e-12 * self.t0.abs())
            || (self.dt - other.dt).abs() > 1e-12 * self.dt.abs()
        {
            return Err(Error::Misaligned(format!(
                "traces ({}, {}, {}) and ({}, {}, {})",
                self.t0,
                self.dt,
                self.len(),
                other.t0,
                other.dt,
                other.len()
            )));
        }
        Ok(())
    }

    pub fn zip_with(&self, other: &SpaceTimeTrace, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check_aligned(other)?;
        Ok(Self {
            grid: self.grid.clone(),
            t0: self.t0,
            dt: self.dt,
            snapshots: self
                .snapshots
                .iter()
                .zip(&other.snapshots)
                .map(|(a, b)| a.zip_with(b, &f))
                .collect(),
        })
    }
}
