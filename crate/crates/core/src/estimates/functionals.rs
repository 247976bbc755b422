//! The a-priori functionals `α_{j,T}(z)` of the stochastic convolution.
//!
//! `D_t^σ` has no canonical meaning on a finite window. Here it is the
//! discrete multiplier `|ω|^σ` applied to the trace after a cosine taper
//! over the first and last [`TAPER_FRACTION`] of the window; the taper is
//! part of the definition of `α₄`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{
    fractional_derivative, mixed_norm_xt, DerivativeKind, Exponent, Field, SpaceTimeTrace, ZeroMode,
};

pub const TAPER_FRACTION: f64 = 0.1;
pub const MIN_SNAPSHOTS: usize = 16;

/// `α₁ … α₄` on one window `[t0, T]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaFunctionals {
    pub t: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub alpha4: f64,
}

impl BetaFunctionals {
    pub fn as_array(&self) -> [f64; 4] {
        [self.alpha1, self.alpha2, self.alpha3, self.alpha4]
    }
}

/// Exponents `(p_k, q_k)` with `1/p_k = 2/(5k) + 1/10`, `1/q_k = 3/10 - 4/(5k)`.
pub fn pk_qk(k: u32) -> (Exponent, Exponent) {
    let k = k as f64;
    (
        Exponent::from_recip(2.0 / (5.0 * k) + 0.1),
        Exponent::from_recip(0.3 - 4.0 / (5.0 * k)),
    )
}

/// Orders `(1/10 - 2/(5k), 3/10 - 6/(5k))` of `D_x` and `D_t` in `α₄`.
pub fn alpha4_orders(k: u32) -> (f64, f64) {
    let k = k as f64;
    (0.1 - 2.0 / (5.0 * k), 0.3 - 6.0 / (5.0 * k))
}

fn spatial(tr: &SpaceTimeTrace, order: f64) -> Result<SpaceTimeTrace> {
    if order == 0.0 {
        return Ok(tr.clone());
    }
    tr.try_map(|f| fractional_derivative(f, order, DerivativeKind::Homogeneous, ZeroMode::Require))
}

/// Cosine taper weights: zero at both ends, one in the interior.
pub fn taper(len: usize, fraction: f64) -> Vec<f64> {
    let m = len.saturating_sub(1).max(1) as f64;
    (0..len)
        .map(|j| {
            let s = j as f64 / m;
            let edge = s.min(1.0 - s);
            if edge >= fraction {
                1.0
            } else {
                0.5 * (1.0 - (PI * edge / fraction).cos())
            }
        })
        .collect()
}

/// `D_t^σ` on the tapered trace, one spatial point at a time.
pub fn time_fractional(tr: &SpaceTimeTrace, sigma: f64) -> Result<SpaceTimeTrace> {
    let len = tr.len();
    if len < MIN_SNAPSHOTS {
        return Err(Error::TraceTooShort(format!(
            "{len} snapshots, the time multiplier needs {MIN_SNAPSHOTS}"
        )));
    }
    if sigma == 0.0 {
        return Ok(tr.clone());
    }
    let w = taper(len, TAPER_FRACTION);
    let period = len as f64 * tr.dt();
    let symbol: Vec<f64> = (0..len)
        .map(|j| {
            let m = if j <= len / 2 { j as f64 } else { j as f64 - len as f64 };
            (2.0 * PI * m / period).abs().powf(sigma)
        })
        .collect();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(len);
    let inv = planner.plan_fft_inverse(len);
    let n = tr.grid().n();
    let mut out = vec![vec![0.0; n]; len];
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for x in 0..n {
        for (t, b) in buf.iter_mut().enumerate() {
            *b = Complex64::new(w[t] * tr.snapshot(t).values()[x], 0.0);
        }
        fwd.process(&mut buf);
        for (b, s) in buf.iter_mut().zip(&symbol) {
            *b *= s / len as f64;
        }
        inv.process(&mut buf);
        for (t, b) in buf.iter().enumerate() {
            out[t][x] = b.re;
        }
    }
    let snaps = out
        .into_iter()
        .map(|v| Field::new(tr.grid(), v))
        .collect::<Result<Vec<_>>>()?;
    SpaceTimeTrace::new(tr.grid(), tr.t0(), tr.dt(), snaps)
}

/// `α₁ … α₄` of `z` on `[t0, T]`.
///
/// `α₁ = sup_t ‖D^{s_k} z‖₂`, `α₂ = ‖D^{1+s_k} z‖_{L^∞_x L²_t}`,
/// `α₃ = ‖D^{s_k} z‖_{L⁵_x L¹⁰_t}` and
/// `α₄ = ‖D_x^{a} D_t^{σ} z‖_{L^{p_k}_x L^{q_k}_t}`. When both orders of `α₄`
/// vanish (k = 4) no taper is applied and `α₄` is the `α₃` norm verbatim.
pub fn beta_functionals(z: &SpaceTimeTrace, k: u32, t_end: f64) -> Result<BetaFunctionals> {
    if k < 4 {
        return Err(Error::InvalidArgument(format!("k must be >= 4, got {k}")));
    }
    let w = z.restrict(z.t0(), t_end)?;
    if w.len() < MIN_SNAPSHOTS {
        return Err(Error::TraceTooShort(format!(
            "{} snapshots in [{}, {t_end}], need {MIN_SNAPSHOTS}",
            w.len(),
            z.t0()
        )));
    }
    let s_k = (k as f64 - 4.0) / (2.0 * k as f64);
    let ds = spatial(&w, s_k)?;
    let alpha1 = ds.snapshots().iter().map(Field::l2_norm).fold(0.0, f64::max);
    let alpha2 = mixed_norm_xt(&spatial(&w, 1.0 + s_k)?, Exponent::Infinity, Exponent::Finite(2.0))?;
    let alpha3 = mixed_norm_xt(&ds, Exponent::Finite(5.0), Exponent::Finite(10.0))?;
    let (a, sigma) = alpha4_orders(k);
    let (pk, qk) = pk_qk(k);
    let alpha4 = if a.abs() < 1e-15 && sigma.abs() < 1e-15 {
        mixed_norm_xt(&w, pk, qk)?
    } else {
        mixed_norm_xt(&time_fractional(&spatial(&w, a)?, sigma)?, pk, qk)?
    };
    Ok(BetaFunctionals {
        t: t_end,
        alpha1,
        alpha2,
        alpha3,
        alpha4,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::{convolution_trace, sample_path, Envelope, NoiseSpec};
    use crate::spectral::Grid;

    fn z_trace(gamma: f64, steps: usize) -> SpaceTimeTrace {
        let g = Grid::new(64, 20.0).unwrap();
        let phi = Field::from_fn(&g, |x| (-x * x).exp());
        let spec = NoiseSpec::new(phi, Envelope::Power { gamma }, 5).unwrap();
        let path = sample_path(5, 0.05, steps).unwrap();
        convolution_trace(&spec, &path, 1).unwrap()
    }

    #[test]
    fn exponents_for_k4_and_k6() {
        let (p, q) = pk_qk(4);
        assert!((p.recip() - 0.2).abs() < 1e-15 && (q.recip() - 0.1).abs() < 1e-15);
        assert_eq!(alpha4_orders(4), (0.0, 0.0));
        let (p, q) = pk_qk(6);
        assert!((p.recip() - (2.0 / 30.0 + 0.1)).abs() < 1e-15);
        assert!((q.recip() - (0.3 - 4.0 / 30.0)).abs() < 1e-15);
    }

    #[test]
    fn zero_input() {
        let g = Grid::new(32, 10.0).unwrap();
        let tr = SpaceTimeTrace::new(&g, 0.0, 0.1, vec![Field::zeros(&g); 20]).unwrap();
        for k in [4, 6] {
            let b = beta_functionals(&tr, k, tr.t_end()).unwrap();
            assert_eq!(b.as_array(), [0.0; 4]);
        }
    }

    #[test]
    fn k4_coincidence() {
        let tr = z_trace(0.7, 60);
        let b = beta_functionals(&tr, 4, tr.t_end()).unwrap();
        assert!(b.alpha3 > 0.0);
        assert!((b.alpha3 - b.alpha4).abs() <= 1e-9 * b.alpha3);
    }

    #[test]
    fn short_trace_rejected() {
        let tr = z_trace(0.7, 10);
        assert!(matches!(beta_functionals(&tr, 4, tr.t_end()), Err(Error::TraceTooShort(_))));
    }

    #[test]
    fn monotone_in_t() {
        let tr = z_trace(0.7, 80);
        for k in [4, 6] {
            let a = beta_functionals(&tr, k, 2.0).unwrap();
            let b = beta_functionals(&tr, k, 4.0).unwrap();
            // α₁–α₃ are norms over nested windows; α₄ depends on the taper
            for j in 0..3 {
                assert!(b.as_array()[j] >= a.as_array()[j]);
            }
        }
    }

    #[test]
    fn time_multiplier_of_a_tone() {
        // interior of a tapered cos(ωt) is mapped to ω^σ cos(ωt) up to leakage
        let g = Grid::new(8, 1.0).unwrap();
        let (len, dt) = (512, 0.05);
        let period = len as f64 * dt;
        let omega = 2.0 * PI * 40.0 / period;
        let snaps = (0..len)
            .map(|n| Field::from_fn(&g, |_| (omega * n as f64 * dt).cos()))
            .collect();
        let tr = SpaceTimeTrace::new(&g, 0.0, dt, snaps).unwrap();
        let d = time_fractional(&tr, 0.5).unwrap();
        let mid = len / 2;
        let expect = omega.sqrt() * (omega * mid as f64 * dt).cos();
        assert!((d.snapshot(mid).values()[0] - expect).abs() < 1e-2 * omega.sqrt());
    }
}
