//! Numerical laboratory for the stochastic generalized KdV equation
//!
//! ```text
//! du + u_xxx dt = ±(u^{k+1})_x dt + g(t) φ(x) dB(t)
//! ```
//!
//! on a periodic grid standing in for the real line. The crate is split by
//! concern:
//!
//! * [`spectral`]: grids, fields, the Airy group, fractional derivatives and
//!   every norm the other modules evaluate (Sobolev and mixed space-time).
//! * [`oscillatory`]: contour-deformed quadrature for the dispersive
//!   oscillatory integrals `I^{b,α}`, `J^{b,α}` and their decay fits.
//! * [`noise`]: Brownian paths, the stochastic convolution and its tail.
//! * [`solver`]: integrating-factor RK4 for the deterministic and
//!   stochastic flows, mass/energy functionals and the soliton oracle.
//! * [`estimates`]: admissibility arithmetic, a-priori functionals,
//!   empirical constant probes and the Monte Carlo ensemble runner.
//! * [`scattering`]: the decomposition `u = u_* + z_*`, the `v` equation and
//!   forward scattering diagnostics.
//! * [`manifest`]: the run configuration format shared with the CLI.

pub mod error;
pub mod estimates;
pub mod io;
pub mod manifest;
pub mod noise;
pub mod oscillatory;
pub mod scattering;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
pub use spectral::{Exponent, Field, Grid, SpaceTimeTrace, SpectralField};
