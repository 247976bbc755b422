use std::f64::consts::PI;

use crate::error::{Error, Result};

// Ai(0) and -Ai'(0)
const C1: f64 = 0.355_028_053_887_817_2;
const C2: f64 = 0.258_819_403_792_806_8;

/// Switch from the Maclaurin series to the asymptotic expansions.
pub const SERIES_LIMIT: f64 = 7.0;
pub const AIRY_RANGE: f64 = 30.0;

/// Airy function `Ai(x)` for `|x| <= 30` to about `1e-10` absolute.
///
/// Maclaurin series `Ai = c1 f - c2 g` for `|x| <= 7`, the standard
/// large-argument expansions beyond, truncated at their smallest term.
pub fn airy_reference(x: f64) -> Result<f64> {
    if !x.is_finite() || x.abs() > AIRY_RANGE {
        return Err(Error::InvalidArgument(format!(
            "Airy reference defined for |x| <= {AIRY_RANGE}, got {x}"
        )));
    }
    Ok(if x.abs() <= SERIES_LIMIT {
        maclaurin(x)
    } else if x > 0.0 {
        decaying(x)
    } else {
        oscillating(-x)
    })
}

fn maclaurin(x: f64) -> f64 {
    let x3 = x * x * x;
    let (mut f, mut g) = (1.0, x);
    let (mut tf, mut tg) = (1.0, x);
    for k in 1..200 {
        let k = k as f64;
        tf *= x3 / ((3.0 * k - 1.0) * (3.0 * k));
        tg *= x3 / ((3.0 * k) * (3.0 * k + 1.0));
        f += tf;
        g += tg;
        if tf.abs() < 1e-18 * f.abs().max(1.0) && tg.abs() < 1e-18 * g.abs().max(1.0) {
            break;
        }
    }
    C1 * f - C2 * g
}

// u_k coefficients of the asymptotic series, u_0 = 1
fn coefficients(n: usize) -> Vec<f64> {
    let mut u = vec![1.0];
    for k in 1..n {
        let kf = k as f64;
        let prev = u[k - 1];
        u.push(
            prev * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                / ((2.0 * kf - 1.0) * 216.0 * kf),
        );
    }
    u
}

fn decaying(x: f64) -> f64 {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let u = coefficients(60);
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    for (k, uk) in u.iter().enumerate() {
        let term = uk / zeta.powi(k as i32);
        if term > last {
            break;
        }
        sum += if k % 2 == 0 { term } else { -term };
        last = term;
    }
    (-zeta).exp() / (2.0 * PI.sqrt() * x.powf(0.25)) * sum
}

fn oscillating(x: f64) -> f64 {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let u = coefficients(60);
    let (mut even, mut odd) = (0.0, 0.0);
    let mut last = f64::INFINITY;
    for (k, uk) in u.iter().enumerate() {
        let term = uk / zeta.powi(k as i32);
        if term > last {
            break;
        }
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            even += sign * term;
        } else {
            odd += sign * term;
        }
        last = term;
    }
    let theta = zeta - PI / 4.0;
    (theta.cos() * even + theta.sin() * odd) / (PI.sqrt() * x.powf(0.25))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        // Ai(0) = 3^{-2/3}/Γ(2/3)
        let gamma_2_3 = statrs::function::gamma::gamma(2.0 / 3.0);
        let a0 = 3f64.powf(-2.0 / 3.0) / gamma_2_3;
        assert!((airy_reference(0.0).unwrap() - a0).abs() < 1e-15);
        assert!((airy_reference(1.0).unwrap() - 0.135_292_416_312_881_4).abs() < 1e-12);
        assert!((airy_reference(-1.0).unwrap() - 0.535_560_883_292_352_1).abs() < 1e-12);
        assert!((airy_reference(-10.0).unwrap() - 0.040_241_238_486_443_2).abs() < 1e-11);
        assert!((airy_reference(10.0).unwrap() - 1.104_753_255_289_87e-10).abs() < 1e-18);
    }

    #[test]
    fn branches_agree_at_switchover() {
        for x in [-SERIES_LIMIT, SERIES_LIMIT] {
            let series = maclaurin(x);
            let asym = if x > 0.0 { decaying(x) } else { oscillating(-x) };
            assert!((series - asym).abs() < 1e-10, "x={x}: {series} vs {asym}");
        }
    }

    #[test]
    fn monotone_decay_for_positive_argument() {
        let mut prev = airy_reference(1.0).unwrap();
        for i in 1..=290 {
            let v = airy_reference(1.0 + 0.1 * i as f64).unwrap();
            assert!(v < prev && v > 0.0);
            prev = v;
        }
    }

    #[test]
    fn satisfies_airy_equation() {
        // sixth-order central second difference
        let h = 0.02;
        let c = [1.0 / 90.0, -3.0 / 20.0, 1.5, -49.0 / 18.0, 1.5, -3.0 / 20.0, 1.0 / 90.0];
        let ai = |x: f64| airy_reference(x).unwrap();
        let mut x = -4.0;
        while x <= 4.0 {
            let d2: f64 = (0..7).map(|i| c[i] * ai(x + (i as f64 - 3.0) * h)).sum::<f64>() / (h * h);
            assert!((d2 - x * ai(x)).abs() < 1e-8, "x = {x}");
            x += 0.125;
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(airy_reference(30.5).is_err());
        assert!(airy_reference(f64::NAN).is_err());
    }
}
