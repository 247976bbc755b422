//! Decay exponents of `I^{b,α}` and their empirical verification.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::integral::{osc_integral_i, OscQuery};
use crate::error::{Error, Result};

/// Which mechanism sets the decay: the `|ξ|^α` singularity at the origin or
/// the stationary points of the phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Origin,
    Stationary,
}

impl Branch {
    /// Branch whose exponent dominates: origin for `α <= -1/2`.
    pub fn designated(alpha: f64) -> Self {
        if alpha <= -0.5 {
            Branch::Origin
        } else {
            Branch::Stationary
        }
    }
}

/// `-1-α` for the origin branch, `(α - b/2 + 1)/(b-1)` for the stationary one.
pub fn predicted_exponent(b: f64, alpha: f64, branch: Branch) -> f64 {
    match branch {
        Branch::Origin => -1.0 - alpha,
        Branch::Stationary => (alpha - 0.5 * b + 1.0) / (b - 1.0),
    }
}

/// Sign of `x` on which a branch is observed in isolation. For odd `b` the
/// stationary set is empty when `x > 0`; for even `b` the integral is even
/// and both mechanisms are present on either side.
fn branch_side(b: f64, branch: Branch) -> f64 {
    if b as i64 % 2 == 0 {
        1.0
    } else {
        match branch {
            Branch::Origin => 1.0,
            Branch::Stationary => -1.0,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecayFit {
    pub b: f64,
    pub alpha: f64,
    pub branch: Branch,
    pub predicted_exponent: f64,
    pub fitted_exponent: f64,
    /// `|x|` values, strictly increasing.
    pub sample_points: Vec<f64>,
    pub envelope: Vec<f64>,
}

/// `100·2^{j/2}` for `j = 0..13`, then `10^4`.
pub fn default_decay_grid() -> Vec<f64> {
    let mut xs: Vec<f64> = (0..14).map(|j| 100.0 * 2f64.powf(0.5 * j as f64)).collect();
    xs.push(1e4);
    xs
}

const ENVELOPE_SAMPLES: usize = 48;

/// Local peak value of `|I^{b,α}|` around `x`: the maximum over a window of
/// 1.5 local oscillation periods `2π/ξ_0`, refined by a parabola through the
/// best sample and its neighbours.
pub fn envelope(b: f64, alpha: f64, x: f64) -> Result<f64> {
    let xi0 = (x.abs() / b).powf(1.0 / (b - 1.0)).max(1e-3);
    let width = (1.5 * 2.0 * PI / xi0).min(0.05 * x.abs().max(1.0));
    let step = width / (ENVELOPE_SAMPLES - 1) as f64;
    let start = x - 0.5 * width;
    let values = (0..ENVELOPE_SAMPLES)
        .map(|j| {
            let q = OscQuery::new(b, alpha, start + j as f64 * step);
            osc_integral_i(&q).map(|r| r.value.norm())
        })
        .collect::<Result<Vec<f64>>>()?;
    let (jmax, &vmax) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("samples");
    if jmax == 0 || jmax + 1 == values.len() {
        return Ok(vmax);
    }
    let (y0, y1, y2) = (values[jmax - 1], vmax, values[jmax + 1]);
    let curv = y0 - 2.0 * y1 + y2;
    if curv >= 0.0 {
        return Ok(vmax);
    }
    let d = 0.5 * (y0 - y2) / curv;
    Ok((y1 - 0.25 * (y0 - y2) * d).max(vmax))
}

fn check_range(xs: &[f64]) -> Result<()> {
    if xs.len() < 7 {
        return Err(Error::InvalidArgument(format!(
            "decay fit needs at least 7 sample points, got {}",
            xs.len()
        )));
    }
    if xs.iter().any(|&x| !(x >= 100.0)) {
        return Err(Error::InvalidArgument("decay samples must satisfy |x| >= 100".into()));
    }
    if xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("decay samples must increase strictly".into()));
    }
    let span = xs[xs.len() - 1] / xs[0];
    if span < 100.0 * (1.0 - 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "decay samples span a factor {span}, need two orders of magnitude"
        )));
    }
    Ok(())
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Log–log slope of the envelope of `|I^{b,α}|` over `|x| ∈ x_range`, on the
/// side of `x` where `branch` acts alone (or dominates, for even `b`).
pub fn fit_decay_slope(b: f64, alpha: f64, branch: Branch, x_range: &[f64]) -> Result<DecayFit> {
    check_range(x_range)?;
    OscQuery::new(b, alpha, 0.0);
    let side = branch_side(b, branch);
    let envelope: Vec<f64> = x_range
        .par_iter()
        .map(|&x| envelope(b, alpha, side * x))
        .collect::<Result<_>>()?;
    let lx: Vec<f64> = x_range.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = envelope.iter().map(|y| y.ln()).collect();
    Ok(DecayFit {
        b,
        alpha,
        branch,
        predicted_exponent: predicted_exponent(b, alpha, branch),
        fitted_exponent: least_squares_slope(&lx, &ly),
        sample_points: x_range.to_vec(),
        envelope,
    })
}

/// `|I^{b,α}(x)| <= C (1+|x|)^p` with `p` the larger of the two exponents.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnvelopeBound {
    pub b: f64,
    pub alpha: f64,
    pub exponent: f64,
    pub constant: f64,
    /// Signed sample points and the envelope there.
    pub points: Vec<f64>,
    pub envelopes: Vec<f64>,
}

impl EnvelopeBound {
    pub fn bound(&self, x: f64) -> f64 {
        self.constant * (1.0 + x.abs()).powf(self.exponent)
    }
}

/// Fit the constant from envelopes at `±x` for every `x` in `xs`, with a 10%
/// margin.
pub fn envelope_bound(b: f64, alpha: f64, xs: &[f64]) -> Result<EnvelopeBound> {
    let exponent = predicted_exponent(b, alpha, Branch::Origin)
        .max(predicted_exponent(b, alpha, Branch::Stationary));
    let signed: Vec<f64> = xs.iter().flat_map(|&x| [x, -x]).collect();
    let envelopes = signed
        .par_iter()
        .map(|&x| envelope(b, alpha, x))
        .collect::<Result<Vec<f64>>>()?;
    let worst = signed
        .iter()
        .zip(&envelopes)
        .map(|(x, e)| e / (1.0 + x.abs()).powf(exponent))
        .fold(0.0, f64::max);
    Ok(EnvelopeBound {
        b,
        alpha,
        exponent,
        constant: 1.1 * worst,
        points: signed,
        envelopes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponents_from_the_two_mechanisms() {
        assert_eq!(predicted_exponent(3.0, 0.0, Branch::Stationary), -0.25);
        assert_eq!(predicted_exponent(3.0, -0.75, Branch::Origin), -0.25);
        for b in [2.0, 3.0, 4.0, 2.5] {
            let o = predicted_exponent(b, -0.5, Branch::Origin);
            let s = predicted_exponent(b, -0.5, Branch::Stationary);
            assert!((o + 0.5).abs() < 1e-15 && (s + 0.5).abs() < 1e-15);
        }
        assert_eq!(Branch::designated(-0.5), Branch::Origin);
        assert_eq!(Branch::designated(-0.49), Branch::Stationary);
    }

    #[test]
    fn range_checks() {
        assert!(fit_decay_slope(3.0, 0.0, Branch::Stationary, &[100.0, 200.0, 400.0]).is_err());
        let short: Vec<f64> = (0..8).map(|j| 100.0 * 1.5f64.powi(j)).collect();
        assert!(fit_decay_slope(3.0, 0.0, Branch::Stationary, &short).is_err());
        let low: Vec<f64> = (0..8).map(|j| 50.0 * 2f64.powi(j)).collect();
        assert!(fit_decay_slope(3.0, 0.0, Branch::Stationary, &low).is_err());
        let grid = default_decay_grid();
        assert!(check_range(&grid).is_ok());
        assert!(grid.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn airy_stationary_slope() {
        let fit = fit_decay_slope(3.0, 0.0, Branch::Stationary, &default_decay_grid()).unwrap();
        assert!((fit.fitted_exponent + 0.25).abs() < 0.05, "{}", fit.fitted_exponent);
    }

    #[test]
    fn origin_slope_for_singular_weight() {
        let fit = fit_decay_slope(3.0, -0.75, Branch::Origin, &default_decay_grid()).unwrap();
        assert!((fit.fitted_exponent + 0.25).abs() < 0.05, "{}", fit.fitted_exponent);
    }

    #[test]
    fn fresnel_weighted_slope() {
        let fit = fit_decay_slope(2.0, 0.5, Branch::Stationary, &default_decay_grid()).unwrap();
        assert!((fit.fitted_exponent - 0.5).abs() < 0.05, "{}", fit.fitted_exponent);
    }
}
