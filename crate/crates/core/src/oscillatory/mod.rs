//! Certified evaluation of the dispersive oscillatory integrals and their
//! decay envelopes.

mod airy;
mod decay;
mod integral;
pub mod quadrature;

pub use airy::{airy_reference, AIRY_RANGE, SERIES_LIMIT};
pub use decay::{
    default_decay_grid, envelope, envelope_bound, fit_decay_slope, predicted_exponent, Branch,
    DecayFit, EnvelopeBound,
};
pub use integral::{
    osc_integral_direct, osc_integral_i, osc_integral_j, osc_integral_scaled, HalfLineSplit,
    LegRecord, OscQuery, OscResult, OscSplits,
};
