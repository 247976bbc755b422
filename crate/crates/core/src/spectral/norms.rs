use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::trace::SpaceTimeTrace;
use crate::error::{Error, Result};

/// Lebesgue exponent with `∞` carried symbolically.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    /// Exponent with reciprocal `r`; `r == 0` gives `∞`.
    pub fn from_recip(r: f64) -> Self {
        if r == 0.0 {
            Exponent::Infinity
        } else {
            Exponent::Finite(1.0 / r)
        }
    }

    pub fn recip(self) -> f64 {
        match self {
            Exponent::Finite(p) => 1.0 / p,
            Exponent::Infinity => 0.0,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    /// Hölder conjugate `p'` with `1/p + 1/p' = 1`.
    pub fn conjugate(self) -> Self {
        match self {
            Exponent::Infinity => Exponent::Finite(1.0),
            Exponent::Finite(p) if p == 1.0 => Exponent::Infinity,
            Exponent::Finite(p) => Exponent::Finite(p / (p - 1.0)),
        }
    }

    pub(crate) fn check_norm(self) -> Result<Self> {
        match self {
            Exponent::Finite(p) if !(p >= 1.0) || !p.is_finite() => Err(Error::InvalidExponent(p)),
            e => Ok(e),
        }
    }
}

impl From<f64> for Exponent {
    fn from(p: f64) -> Self {
        if p.is_infinite() && p > 0.0 {
            Exponent::Infinity
        } else {
            Exponent::Finite(p)
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if matches!(t.to_ascii_lowercase().as_str(), "inf" | "infinity" | "∞") {
            return Ok(Exponent::Infinity);
        }
        t.parse::<f64>()
            .map(Exponent::Finite)
            .map_err(|_| Error::InvalidArgument(format!("cannot parse exponent {s:?}")))
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => s.serialize_f64(*p),
            Exponent::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(p) => Ok(Exponent::Finite(p)),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Weighted `(Σ w_i |v_i|^p)^{1/p}`, or `max |v_i|` for `p = ∞`.
///
/// Values are scaled by their maximum first so large exponents neither
/// overflow nor underflow.
pub(crate) fn weighted_norm(values: &[f64], weights: &[f64], p: Exponent) -> f64 {
    let max = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    match p {
        Exponent::Infinity => max,
        Exponent::Finite(p) => {
            if max == 0.0 {
                return 0.0;
            }
            let sum: f64 = values
                .iter()
                .zip(weights)
                .map(|(v, w)| w * (v.abs() / max).powf(p))
                .sum();
            max * sum.powf(1.0 / p)
        }
    }
}

/// Spatial `L^p` norm with uniform weight `dx`.
pub fn lp_norm(values: &[f64], dx: f64, p: Exponent) -> f64 {
    let w = vec![dx; values.len()];
    weighted_norm(values, &w, p)
}

/// `‖f‖_{L^p_x L^q_t}`: time integral inside (trapezoid), space outside.
pub fn mixed_norm_xt(tr: &SpaceTimeTrace, p: Exponent, q: Exponent) -> Result<f64> {
    let p = p.check_norm()?;
    let q = q.check_norm()?;
    let n = tr.grid().n();
    let tw = tr.time_weights();
    let mut column = vec![0.0; tr.len()];
    let inner: Vec<f64> = (0..n)
        .map(|j| {
            for (c, s) in column.iter_mut().zip(tr.snapshots()) {
                *c = s.values()[j];
            }
            weighted_norm(&column, &tw, q)
        })
        .collect();
    Ok(lp_norm(&inner, tr.grid().spacing(), p))
}

/// `‖f‖_{L^q_t L^p_x}`: space inside, time outside (trapezoid).
pub fn mixed_norm_tx(tr: &SpaceTimeTrace, q: Exponent, p: Exponent) -> Result<f64> {
    let p = p.check_norm()?;
    let q = q.check_norm()?;
    let dx = tr.grid().spacing();
    let inner: Vec<f64> = tr
        .snapshots()
        .iter()
        .map(|s| lp_norm(s.values(), dx, p))
        .collect();
    Ok(weighted_norm(&inner, &tr.time_weights(), q))
}
