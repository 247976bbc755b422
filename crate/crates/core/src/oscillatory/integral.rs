//! The integrals `I^{b,α}(x) = ∫ e^{i(ξ^b + xξ)} |ξ|^α dξ` and
//! `J^{b,α}(x) = ∫ e^{i(|ξ|^b + xξ)} |ξ|^α dξ`.
//!
//! Both reduce to the half-line integral
//! `G(x) = ∫_0^∞ e^{i(cξ^b + xξ)} ξ^α dξ`, which is evaluated on a deformed
//! contour where the integrand decays:
//!
//! * `x >= 0`: the ray `ξ = r e^{iπ/(2b)}`, on which `cξ^b = i c r^b`.
//! * `x < 0`: a stationary point `ξ_0 = (|x|/(cb))^{1/(b-1)}` sits on the
//!   axis. The path runs `0 → ξ_0(1-i)/2` in the lower half plane, then into
//!   `ξ_0` along the steepest-descent direction `e^{iπ/4}`, then leaves along
//!   `ξ_0 + ρ e^{iπ/(2b)}`. The last two legs carry the phase relative to
//!   `φ(ξ_0)`, which is reduced mod 2π separately (in double-double for
//!   integer `b`) so that large `|x|` does not cost accuracy.
//!
//! The weight `ξ^α` is integrated exactly near the origin by Gauss–Jacobi
//! nodes on `[0, h_0]`, `h_0 = min(1/(b|x|), c^{-1/b}/2)`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::quadrature::{adaptive, singular_block};
use crate::error::{Error, Result};

const ABS_TOL: f64 = 1e-11;
const REL_TOL: f64 = 1e-12;
const MAX_PANELS: usize = 8000;
// below this stationary phase size the plain ray is used for x < 0 as well
const LAMBDA_MIN: f64 = 1.0;
const TWO_PI_HI: f64 = 2.0 * PI;
const TWO_PI_LO: f64 = 2.449_293_598_294_706_4e-16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OscQuery {
    pub b: f64,
    pub alpha: f64,
    pub x: f64,
    /// Time scale; `None` means `t = 1`.
    #[serde(default)]
    pub t: Option<f64>,
}

impl OscQuery {
    pub fn new(b: f64, alpha: f64, x: f64) -> Self {
        Self {
            b,
            alpha,
            x,
            t: None,
        }
    }

    pub fn at_time(self, t: f64) -> Self {
        Self { t: Some(t), ..self }
    }

    /// Parameter checks shared by every integral with real order.
    pub fn validate(&self) -> Result<()> {
        self.check(false)
    }

    fn check(&self, integer_b: bool) -> Result<()> {
        let Self { b, alpha, x, t } = *self;
        if !(b.is_finite() && b > 1.0) || (integer_b && (b.fract() != 0.0 || b < 2.0)) {
            let want = if integer_b { "an integer >= 2" } else { "real > 1" };
            return Err(Error::InvalidQuery(format!("order b must be {want}, got {b}")));
        }
        if !(alpha > -1.0 && alpha < b - 1.0) {
            return Err(Error::InvalidQuery(format!(
                "weight exponent {alpha} outside (-1, {})",
                b - 1.0
            )));
        }
        if !x.is_finite() {
            return Err(Error::InvalidQuery(format!("non-finite x = {x}")));
        }
        if let Some(t) = t {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::InvalidQuery(format!("time scale must be positive, got {t}")));
            }
        }
        Ok(())
    }
}

/// One piece of the deformed contour.
#[derive(Clone, Debug, Serialize)]
pub struct LegRecord {
    pub name: String,
    pub length: f64,
    pub panels: usize,
    pub error: f64,
}

/// Decomposition used for one half-line integral `G(x)`.
#[derive(Clone, Debug, Serialize)]
pub struct HalfLineSplit {
    pub x: f64,
    pub stationary_point: Option<f64>,
    pub singular_block: f64,
    pub legs: Vec<LegRecord>,
    pub tail_radius: f64,
    pub tail_bound: f64,
    pub rounding: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct OscSplits {
    pub halves: Vec<HalfLineSplit>,
}

#[derive(Clone, Debug)]
pub struct OscResult {
    pub value: Complex64,
    pub abs_error: f64,
    pub splits: OscSplits,
}

struct Half {
    value: Complex64,
    error: f64,
    split: HalfLineSplit,
}

// ---- double-double helpers -------------------------------------------------

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn dd_mul(x: (f64, f64), y: f64) -> (f64, f64) {
    let (p, e) = two_prod(x.0, y);
    quick_two_sum(p, e + x.1 * y)
}

fn dd_add(x: (f64, f64), y: (f64, f64)) -> (f64, f64) {
    let (s, e) = two_sum(x.0, y.0);
    quick_two_sum(s, e + x.1 + y.1)
}

fn reduce_two_pi(x: (f64, f64)) -> f64 {
    let k = (x.0 / TWO_PI_HI).round();
    let r = (-k).mul_add(TWO_PI_HI, x.0);
    r - k * TWO_PI_LO + x.1
}

// ---- phase pieces -----------------------------------------------------------

/// `(1+u)^b - 1 - b u` without cancellation for small `u`.
fn binomial_remainder(b: f64, int_b: Option<i32>, u: Complex64) -> Complex64 {
    if u.norm() > 0.25 {
        let w = Complex64::new(1.0, 0.0) + u;
        let p = match int_b {
            Some(n) => w.powi(n),
            None => w.powf(b),
        };
        return p - 1.0 - u * b;
    }
    let mut coef = 0.5 * b * (b - 1.0);
    let mut up = u * u;
    let mut sum = up * coef;
    for j in 3..200 {
        coef *= (b - j as f64 + 1.0) / j as f64;
        if coef == 0.0 {
            break;
        }
        up *= u;
        let term = up * coef;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

fn int_order(b: f64) -> Option<i32> {
    (b.fract() == 0.0 && b <= 64.0).then_some(b as i32)
}

fn singular_scale(c: f64, b: f64, x: f64, cap: f64) -> (f64, f64) {
    let mut h0 = (0.5 * c.powf(-1.0 / b)).min(cap);
    if x != 0.0 {
        h0 = h0.min(1.0 / (b * x.abs()));
    }
    // e^{icξ^b} is not smooth at 0 for fractional b; shrink the Jacobi block
    // until that factor is 1 to near machine precision
    let hs = if int_order(b).is_some() {
        h0
    } else {
        h0.min((1e-9 / c).powf(1.0 / b))
    };
    (h0, hs)
}

fn geometric_edges(start: f64, end: f64) -> Vec<f64> {
    let mut edges = vec![start];
    let mut e = start;
    while e * 2.0 < end {
        e *= 2.0;
        edges.push(e);
    }
    edges.push(end);
    edges
}

fn linear_then_geometric(step: f64, end: f64) -> Vec<f64> {
    let mut edges = vec![0.0];
    let mut e = step;
    while e < end {
        edges.push(e);
        e *= 2.0;
    }
    edges.push(end);
    edges
}

/// Integral of `s^α g(s)` over `[0, len]`: Jacobi block then adaptive panels.
fn weighted_leg(
    g: &impl Fn(f64) -> Complex64,
    alpha: f64,
    hs: f64,
    len: f64,
    tol: f64,
    name: &str,
) -> Result<(Complex64, LegRecord)> {
    let (block, block_err) = singular_block(hs, alpha, g);
    let fw = |s: f64| g(s) * s.powf(alpha);
    let rest = if len > hs {
        adaptive(&fw, &geometric_edges(hs, len), tol, REL_TOL, MAX_PANELS)?
    } else {
        super::quadrature::Adaptive {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            panels: 0,
        }
    };
    Ok((
        block + rest.value,
        LegRecord {
            name: name.to_string(),
            length: len,
            panels: rest.panels + 1,
            error: block_err + rest.error,
        },
    ))
}

/// Smallest doubling of `start` where the exponential tail bound
/// `|f(R)| / (κ(R) - α₊/R)` drops below `tol`.
fn tail_radius(
    start: f64,
    alpha: f64,
    modulus: impl Fn(f64) -> f64,
    kappa: impl Fn(f64) -> f64,
    tol: f64,
) -> Result<(f64, f64)> {
    let mut r = start;
    for _ in 0..200 {
        let den = kappa(r) - alpha.max(0.0) / r;
        if den > 0.0 {
            let bound = modulus(r) / den;
            if bound <= tol {
                return Ok((r, bound));
            }
        }
        r *= 2.0;
    }
    Err(Error::QuadratureBudget {
        target: tol,
        estimate: f64::INFINITY,
        panels: 0,
    })
}

fn half_line(c: f64, b: f64, alpha: f64, x: f64) -> Result<Half> {
    if x < 0.0 {
        let xi0 = (x.abs() / (c * b)).powf(1.0 / (b - 1.0));
        if c * xi0.powf(b) > LAMBDA_MIN {
            return stationary(c, b, alpha, x, xi0);
        }
    }
    ray(c, b, alpha, x)
}

fn ray(c: f64, b: f64, alpha: f64, x: f64) -> Result<Half> {
    let theta = PI / (2.0 * b);
    let dir = Complex64::from_polar(1.0, theta);
    let front = Complex64::from_polar(1.0, theta * (alpha + 1.0));
    let i = Complex64::i();
    let g = |r: f64| (i * x * r * dir - c * r.powf(b)).exp() * front;
    let tol = ABS_TOL / 2.0;
    let (h0, hs) = singular_scale(c, b, x, f64::INFINITY);
    let (radius, tail) = tail_radius(
        2.0 * h0,
        alpha,
        |r| r.powf(alpha) * (-c * r.powf(b) - x * r * theta.sin()).exp(),
        |r| c * b * r.powf(b - 1.0) + x * theta.sin(),
        1e-2 * tol,
    )?;
    let (value, leg) = weighted_leg(&g, alpha, hs, radius, tol, "ray")?;
    let error = leg.error + tail;
    Ok(Half {
        value,
        error,
        split: HalfLineSplit {
            x,
            stationary_point: None,
            singular_block: hs,
            legs: vec![leg],
            tail_radius: radius,
            tail_bound: tail,
            rounding: 0.0,
        },
    })
}

fn stationary(c: f64, b: f64, alpha: f64, x: f64, xi0: f64) -> Result<Half> {
    let int_b = int_order(b);
    let i = Complex64::i();
    // φ(ξ_0) mod 2π and the residual slope φ'(ξ_0) at the rounded ξ_0
    let (phase0, slope, rounding_rel) = match int_b {
        Some(n) => {
            let mut p = (xi0, 0.0);
            for _ in 1..n - 1 {
                p = dd_mul(p, xi0);
            }
            let pm1 = p; // ξ_0^{b-1}
            let pb = dd_mul(pm1, xi0);
            let phi = dd_add(dd_mul(pb, c), two_prod(x, xi0));
            let d = dd_add(dd_mul(dd_mul(pm1, c), b), (x, 0.0));
            (reduce_two_pi(phi), d.0 + d.1, 0.0)
        }
        None => {
            let phi = c * xi0.powf(b) + x * xi0;
            let d = c * b * xi0.powf(b - 1.0) + x;
            (reduce_two_pi((phi, 0.0)), d, 4.0 * f64::EPSILON * phi.abs())
        }
    };
    let lambda = c * xi0.powf(b);
    let delta_phase = |delta: Complex64| lambda * binomial_remainder(b, int_b, delta / xi0) + delta * slope;
    let weight = |delta: Complex64| {
        (Complex64::new(1.0, 0.0) + delta / xi0).powf(alpha) * xi0.powf(alpha)
    };
    let tol = ABS_TOL / 4.0;
    let len1 = xi0 * FRAC_1_SQRT_2;
    let curvature = c * b * (b - 1.0) * xi0.powf(b - 2.0);
    let h1 = (1.0 / curvature.sqrt()).min(0.5 * len1);

    // B1: 0 → ξ_0(1-i)/2 with the absolute phase
    let d1 = Complex64::from_polar(1.0, -PI / 4.0);
    let rot_b = Complex64::from_polar(1.0, -b * PI / 4.0);
    let front1 = Complex64::from_polar(1.0, -PI * (alpha + 1.0) / 4.0);
    let g1 = |s: f64| (i * (c * s.powf(b) * rot_b + x * s * d1)).exp() * front1;
    let (_, hs) = singular_scale(c, b, x, 0.5 * len1);
    let (b1, leg1) = weighted_leg(&g1, alpha, hs, len1, tol, "origin-to-valley")?;

    // B2: valley → ξ_0 along e^{iπ/4}, parametrized by distance from ξ_0
    let d2 = Complex64::from_polar(1.0, PI / 4.0);
    let g2 = |rho: f64| {
        let delta = -d2 * rho;
        (i * delta_phase(delta)).exp() * weight(delta) * d2
    };
    let b2 = adaptive(&g2, &linear_then_geometric(h1, len1), tol, REL_TOL, MAX_PANELS)?;

    // C: ξ_0 → ∞ along e^{iπ/(2b)}
    let theta = PI / (2.0 * b);
    let d3 = Complex64::from_polar(1.0, theta);
    let g3 = |rho: f64| {
        let delta = d3 * rho;
        (i * delta_phase(delta)).exp() * weight(delta) * d3
    };
    let (radius, tail) = tail_radius(
        h1,
        alpha,
        |rho| {
            let delta = d3 * rho;
            (-(delta_phase(delta).im)).exp() * weight(delta).norm()
        },
        |rho| theta.sin() * (c * b * (xi0 + d3 * rho).norm().powf(b - 1.0) + x),
        1e-2 * tol,
    )?;
    let c3 = adaptive(&g3, &linear_then_geometric(h1, radius), tol, REL_TOL, MAX_PANELS)?;

    let rotated = b2.value + c3.value;
    let rounding = rotated.norm() * rounding_rel.max(4.0 * f64::EPSILON);
    let value = b1 + Complex64::from_polar(1.0, phase0) * rotated;
    let error = leg1.error + b2.error + c3.error + tail + rounding;
    Ok(Half {
        value,
        error,
        split: HalfLineSplit {
            x,
            stationary_point: Some(xi0),
            singular_block: hs,
            legs: vec![
                leg1,
                LegRecord {
                    name: "valley-to-stationary".into(),
                    length: len1,
                    panels: b2.panels,
                    error: b2.error,
                },
                LegRecord {
                    name: "stationary-ray".into(),
                    length: radius,
                    panels: c3.panels,
                    error: c3.error,
                },
            ],
            tail_radius: radius,
            tail_bound: tail,
            rounding,
        },
    })
}

fn combine(a: Half, b: Half) -> OscResult {
    OscResult {
        value: a.value + b.value,
        abs_error: a.error + b.error,
        splits: OscSplits {
            halves: vec![a.split, b.split],
        },
    }
}

/// `∫ e^{i(cξ^b + xξ)} |ξ|^α dξ` for integer `b`.
fn full_line_i(c: f64, b: f64, alpha: f64, x: f64) -> Result<OscResult> {
    if b as i64 % 2 == 0 {
        Ok(combine(half_line(c, b, alpha, x)?, half_line(c, b, alpha, -x)?))
    } else {
        // ξ → -ξ maps the negative half onto the conjugate of the positive one
        let h = half_line(c, b, alpha, x)?;
        Ok(OscResult {
            value: Complex64::new(2.0 * h.value.re, 0.0),
            abs_error: 2.0 * h.error,
            splits: OscSplits {
                halves: vec![h.split],
            },
        })
    }
}

/// `I^{b,α}(x)` for integer `b >= 2`; a time scale in the query is ignored
/// here (see [`osc_integral_scaled`]).
pub fn osc_integral_i(q: &OscQuery) -> Result<OscResult> {
    q.check(true)?;
    full_line_i(1.0, q.b, q.alpha, q.x)
}

/// `J^{b,α}(x)` for real `b > 1`. Computed as `G(|x|) + G(-|x|)`, so it is
/// even in `x` by construction.
pub fn osc_integral_j(q: &OscQuery) -> Result<OscResult> {
    q.check(false)?;
    let ax = q.x.abs();
    Ok(combine(
        half_line(1.0, q.b, q.alpha, ax)?,
        half_line(1.0, q.b, q.alpha, -ax)?,
    ))
}

/// `∫ e^{i(tξ^b + xξ)} |ξ|^α dξ` through the exact reduction
/// `t^{-(α+1)/b} I^{b,α}(x t^{-1/b})`.
pub fn osc_integral_scaled(q: &OscQuery) -> Result<OscResult> {
    q.check(true)?;
    let t = q.t.unwrap_or(1.0);
    if t == 1.0 {
        return osc_integral_i(q);
    }
    let scale = t.powf(-(q.alpha + 1.0) / q.b);
    let xs = q.x * t.powf(-1.0 / q.b);
    let inner = full_line_i(1.0, q.b, q.alpha, xs)?;
    // the rounded argument shifts the phase by ~ε|x'|ξ₀ near the stationary point
    let xi0 = (xs.abs() / q.b).powf(1.0 / (q.b - 1.0));
    let argument = 4.0 * f64::EPSILON * (1.0 + xs.abs() * xi0) * inner.value.norm();
    Ok(OscResult {
        value: inner.value * scale,
        abs_error: (inner.abs_error + argument) * scale,
        splits: inner.splits,
    })
}

/// The same integral as [`osc_integral_scaled`] but with `t` kept inside the
/// phase: an independent route used to check the reduction.
pub fn osc_integral_direct(q: &OscQuery) -> Result<OscResult> {
    q.check(true)?;
    full_line_i(q.t.unwrap_or(1.0), q.b, q.alpha, q.x)
}
