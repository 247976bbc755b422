//! Admissibility arithmetic, the a-priori functionals of the stochastic
//! convolution, empirical Kato/Strichartz constants and Monte Carlo
//! ensembles.

mod admissibility;
mod ensemble;
mod functionals;
mod probes;

pub use admissibility::{
    kato_family_for_pq_order, validate_kato, validate_strichartz, KatoTriple, StrichartzPair,
    Verdict,
};
pub use ensemble::{
    ensemble_map, ensemble_partials, ensemble_run, EnsembleModel, EnsemblePartial, EnsembleStats,
    Estimator, MemberFailure,
};
pub use functionals::{
    alpha4_orders, beta_functionals, pk_qk, taper, time_fractional, BetaFunctionals, MIN_SNAPSHOTS,
    TAPER_FRACTION,
};
pub use probes::{
    kato_constant_probe, kato_refinement, probe_data, strichartz_constant_probe,
    strichartz_refinement, ProbeConfig, ProbeDatum, ProbeResult, Refinement,
};
