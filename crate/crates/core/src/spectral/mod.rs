//! Periodic spectral representation of fields, the Airy group and norms.

mod field;
mod grid;
mod norms;
mod trace;

pub use field::{
    airy_propagate, fractional_derivative, sobolev_norm, DerivativeKind, Field, SpectralField,
    ZeroMode,
};
pub(crate) use field::multiplier;
pub use grid::Grid;
pub use norms::{lp_norm, mixed_norm_tx, mixed_norm_xt, Exponent};
pub(crate) use norms::weighted_norm;
pub use trace::SpaceTimeTrace;

/// Make a grid; see [`Grid::new`].
pub fn make_grid(n: usize, length: f64) -> crate::Result<Grid> {
    Grid::new(n, length)
}
