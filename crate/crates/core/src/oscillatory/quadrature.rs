//! Gauss rules and a panel-adaptive integrator for complex integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Nodes and weights on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn legendre_rule(n: usize) -> Rule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Rule { nodes, weights }
}

pub fn gauss_legendre_12() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| legendre_rule(12))
}

pub fn gauss_legendre_24() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| legendre_rule(24))
}

/// Gauss–Jacobi rule for the weight `(1+s)^alpha` on `[-1, 1]`, `alpha > -1`,
/// by Golub–Welsch on the Jacobi matrix of `P^{(0, alpha)}`.
pub fn gauss_jacobi(n: usize, alpha: f64) -> Rule {
    let (a, b) = (0.0f64, alpha);
    let mut j = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        j[(k, k)] = if k == 0 {
            (b - a) / (a + b + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        };
        if k + 1 < n {
            let m = kf + 1.0;
            let s = 2.0 * m + a + b;
            let off = if k == 0 {
                // the (m + a + b) factor cancels against (s - 1) at m = 1
                (4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b).powi(2) * (3.0 + a + b))).sqrt()
            } else {
                (4.0 * m * (m + a) * (m + b) * (m + a + b) / (s * s * (s + 1.0) * (s - 1.0)))
                    .sqrt()
            };
            j[(k, k + 1)] = off;
            j[(k + 1, k)] = off;
        }
    }
    let mu0 = 2f64.powf(alpha + 1.0) / (alpha + 1.0);
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    Rule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

/// `∫_a^b f` with a fixed rule.
pub fn apply(rule: &Rule, a: f64, b: f64, f: &impl Fn(f64) -> Complex64) -> Complex64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut sum = Complex64::new(0.0, 0.0);
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        sum += f(mid + half * x) * *w;
    }
    sum * half
}

/// `∫_0^h ξ^alpha f(ξ) dξ` by Gauss–Jacobi with 20 and 40 nodes; returns the
/// 40-node value and the difference as error estimate.
pub fn singular_block(h: f64, alpha: f64, f: &impl Fn(f64) -> Complex64) -> (Complex64, f64) {
    let scale = (0.5 * h).powf(alpha + 1.0);
    let eval = |rule: &Rule| {
        let mut sum = Complex64::new(0.0, 0.0);
        for (s, w) in rule.nodes.iter().zip(&rule.weights) {
            sum += f(0.5 * h * (1.0 + s)) * *w;
        }
        sum * scale
    };
    let coarse = eval(&gauss_jacobi(20, alpha));
    let fine = eval(&gauss_jacobi(40, alpha));
    (fine, (fine - coarse).norm())
}

#[derive(Clone, Copy, Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn panel(a: f64, b: f64, f: &impl Fn(f64) -> Complex64) -> Panel {
    let coarse = apply(gauss_legendre_12(), a, b, f);
    let fine = apply(gauss_legendre_24(), a, b, f);
    Panel {
        a,
        b,
        value: fine,
        error: (fine - coarse).norm(),
    }
}

/// Outcome of [`adaptive`].
#[derive(Clone, Copy, Debug)]
pub struct Adaptive {
    pub value: Complex64,
    pub error: f64,
    pub panels: usize,
}

/// Globally adaptive G12/G24 quadrature over consecutive `edges`, bisecting
/// the worst panel until the summed estimate meets
/// `max(abs_tol, rel_tol · Σ|panel|)`.
pub fn adaptive(
    f: &impl Fn(f64) -> Complex64,
    edges: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Result<Adaptive> {
    let mut heap: BinaryHeap<Panel> = edges.windows(2).map(|w| panel(w[0], w[1], f)).collect();
    loop {
        let (mut value, mut error, mut size) = (Complex64::new(0.0, 0.0), 0.0, 0.0);
        for p in heap.iter() {
            value += p.value;
            error += p.error;
            size += p.value.norm();
        }
        let target = abs_tol.max(rel_tol * size);
        if !error.is_finite() || !value.is_finite() {
            return Err(Error::QuadratureBudget {
                target,
                estimate: error,
                panels: heap.len(),
            });
        }
        if error <= target {
            return Ok(Adaptive {
                value,
                error,
                panels: heap.len(),
            });
        }
        if heap.len() >= max_panels {
            return Err(Error::QuadratureBudget {
                target,
                estimate: error,
                panels: heap.len(),
            });
        }
        let worst = heap.pop().expect("non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(Error::QuadratureBudget {
                target,
                estimate: error,
                panels: heap.len() + 1,
            });
        }
        heap.push(panel(worst.a, mid, f));
        heap.push(panel(mid, worst.b, f));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(f: impl Fn(f64) -> f64) -> impl Fn(f64) -> Complex64 {
        move |x| Complex64::new(f(x), 0.0)
    }

    #[test]
    fn legendre_integrates_polynomials() {
        for rule in [gauss_legendre_12(), gauss_legendre_24()] {
            let n = rule.nodes.len();
            for d in 0..2 * n {
                let v = apply(rule, -1.0, 1.0, &real(|x| x.powi(d as i32))).re;
                let exact = if d % 2 == 1 { 0.0 } else { 2.0 / (d as f64 + 1.0) };
                assert!((v - exact).abs() < 1e-14, "degree {d}");
            }
        }
    }

    #[test]
    fn jacobi_moments() {
        // ∫_{-1}^{1} (1+s)^α (1+s)^j ds = 2^{α+j+1}/(α+j+1)
        for &alpha in &[-0.75, -0.5, 0.0, 0.25, 1.4] {
            let rule = gauss_jacobi(20, alpha);
            for j in 0..30 {
                let v: f64 = rule
                    .nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(s, w)| w * (1.0 + s).powi(j))
                    .sum();
                let exact = 2f64.powf(alpha + j as f64 + 1.0) / (alpha + j as f64 + 1.0);
                assert!((v - exact).abs() < 1e-12 * exact, "α={alpha} j={j}");
            }
        }
    }

    #[test]
    fn singular_block_handles_weight() {
        // ∫_0^1 ξ^{-3/4} cos ξ dξ against a fine substitution ξ = s^4
        let (v, err) = singular_block(1.0, -0.75, &real(f64::cos));
        let sub = adaptive(&real(|s: f64| 4.0 * (s.powi(4)).cos()), &[0.0, 1.0], 1e-15, 0.0, 100)
            .unwrap();
        assert!((v - sub.value).norm() < 1e-13);
        assert!(err < 1e-12);
    }

    #[test]
    fn adaptive_reports_budget_failure() {
        let f = real(|x: f64| (1.0 / x).sin());
        let r = adaptive(&f, &[1e-8, 1.0], 1e-14, 0.0, 8);
        assert!(matches!(r, Err(Error::QuadratureBudget { .. })));
    }

    #[test]
    fn adaptive_oscillatory() {
        let f = |x: f64| Complex64::from_polar(1.0, 50.0 * x);
        let r = adaptive(&f, &[0.0, 3.0], 1e-13, 0.0, 1000).unwrap();
        let exact = (Complex64::from_polar(1.0, 150.0) - 1.0) / Complex64::new(0.0, 50.0);
        assert!((r.value - exact).norm() < 1e-12);
    }
}
