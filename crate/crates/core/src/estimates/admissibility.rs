use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::Exponent;

const TOL: f64 = 1e-12;

/// Outcome of an admissibility check, with the first failed condition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub admissible: bool,
    pub diagnostic: String,
}

impl Verdict {
    fn from_failures(failures: Vec<String>) -> Self {
        if failures.is_empty() {
            Self {
                admissible: true,
                diagnostic: "admissible".into(),
            }
        } else {
            Self {
                admissible: false,
                diagnostic: failures.join("; "),
            }
        }
    }
}

fn in_range(name: &str, value: f64, lo: f64, hi: f64, out: &mut Vec<String>) {
    if !(value >= lo - TOL && value <= hi + TOL) {
        out.push(format!("{name} = {value} outside [{lo}, {hi}]"));
    }
}

/// `2/p = 1/2 - 1/q`, `α = 2/q - 1/p` with `(p, q, α) ∈ [4,∞]×[2,∞]×[-1/4,1]`.
pub fn validate_kato(p: Exponent, q: Exponent, alpha: f64) -> Verdict {
    let mut failures = Vec::new();
    let (rp, rq) = (p.recip(), q.recip());
    // reciprocals: p ∈ [4,∞] ⇔ 1/p ∈ [0,1/4]
    in_range("1/p", rp, 0.0, 0.25, &mut failures);
    in_range("1/q", rq, 0.0, 0.5, &mut failures);
    in_range("alpha", alpha, -0.25, 1.0, &mut failures);
    let gap = 2.0 * rp - (0.5 - rq);
    if gap.abs() > TOL {
        failures.push(format!("2/p - (1/2 - 1/q) = {gap:e}"));
    }
    let gap = alpha - (2.0 * rq - rp);
    if gap.abs() > TOL {
        failures.push(format!("alpha - (2/q - 1/p) = {gap:e}"));
    }
    Verdict::from_failures(failures)
}

/// `1/q = ((β+1)/3)(1/2 - 1/p)` with `p ∈ [2,∞]`, `β ∈ [0,1/2]`.
pub fn validate_strichartz(p: Exponent, q: Exponent, beta: f64) -> Verdict {
    let mut failures = Vec::new();
    let (rp, rq) = (p.recip(), q.recip());
    in_range("1/p", rp, 0.0, 0.5, &mut failures);
    in_range("1/q", rq, 0.0, 1.0, &mut failures);
    in_range("beta", beta, 0.0, 0.5, &mut failures);
    let gap = rq - (beta + 1.0) / 3.0 * (0.5 - rp);
    if gap.abs() > TOL {
        failures.push(format!("1/q - ((beta+1)/3)(1/2 - 1/p) = {gap:e}"));
    }
    Verdict::from_failures(failures)
}

/// A Kato-admissible triple; construction validates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KatoTriple {
    pub p: Exponent,
    pub q: Exponent,
    pub alpha: f64,
}

impl KatoTriple {
    pub fn new(p: impl Into<Exponent>, q: impl Into<Exponent>, alpha: f64) -> Result<Self> {
        let (p, q) = (p.into(), q.into());
        let v = validate_kato(p, q, alpha);
        if !v.admissible {
            return Err(Error::InvalidArgument(format!(
                "({p}, {q}, {alpha}) is not Kato admissible: {}",
                v.diagnostic
            )));
        }
        Ok(Self { p, q, alpha })
    }
}

impl fmt::Display for KatoTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.p, self.q, self.alpha)
    }
}

/// A Strichartz-admissible pair with its smoothing parameter `β`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrichartzPair {
    pub p: Exponent,
    pub q: Exponent,
    pub beta: f64,
}

impl StrichartzPair {
    pub fn new(p: impl Into<Exponent>, q: impl Into<Exponent>, beta: f64) -> Result<Self> {
        let (p, q) = (p.into(), q.into());
        let v = validate_strichartz(p, q, beta);
        if !v.admissible {
            return Err(Error::InvalidArgument(format!(
                "({p}, {q}) with beta = {beta} is not Strichartz admissible: {}",
                v.diagnostic
            )));
        }
        Ok(Self { p, q, beta })
    }

    /// The pair with the given `p` and `β`, `q` solved from the condition.
    pub fn from_p(p: impl Into<Exponent>, beta: f64) -> Result<Self> {
        let p = p.into();
        let rq = (beta + 1.0) / 3.0 * (0.5 - p.recip());
        Self::new(p, Exponent::from_recip(rq), beta)
    }

    /// Order `(β/2)(1/p' - 1/p)` of the smoothing weight.
    pub fn weight_order(&self) -> f64 {
        0.5 * self.beta * (1.0 - 2.0 * self.p.recip())
    }
}

impl fmt::Display for StrichartzPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}; beta = {})", self.p, self.q, self.beta)
    }
}

/// The one-parameter family `(5/(1-α), 10/(4α+1), α)`, `α ∈ [-1/4, 1/6)`.
pub fn kato_family_for_pq_order(alpha: f64) -> Result<KatoTriple> {
    if !(-0.25..1.0 / 6.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!(
            "family parameter must lie in [-1/4, 1/6), got {alpha}"
        )));
    }
    let p = Exponent::from_recip((1.0 - alpha) / 5.0);
    let q = Exponent::from_recip((4.0 * alpha + 1.0) / 10.0);
    KatoTriple::new(p, q, alpha)
}
