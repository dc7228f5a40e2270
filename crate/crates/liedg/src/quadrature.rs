//! Gauss–Legendre quadrature on the unit interval.
//!
//! Nodes are computed by Newton iteration on the Legendre polynomials with
//! the classical Chebyshev initial guesses; for the orders used here
//! (up to 32) every node converges in a handful of iterations to machine
//! precision.

use crate::error::{Error, Result};

/// Nodes and weights on `[0, 1]`; a rule of `n` points integrates
/// polynomials up to degree `2n - 1` exactly.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// Approximate the integral of `f` over `[0, 1]`.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Value and derivative of the Legendre polynomial `P_n` at `x` (on
/// `[-1, 1]`), via the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss–Legendre rule with `n` points on `[0, 1]`, `1 <= n <= 32`.
pub fn gauss_legendre(n: usize) -> Result<QuadratureRule> {
    if n == 0 || n > 32 {
        return Err(Error::InvalidConfig(format!(
            "quadrature order {n} outside 1..=32"
        )));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev guess for the i-th root of P_n, descending in x.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..60 {
            let (p, d) = legendre(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        // Polish once more and store, mapped to [0, 1].
        let (p, dp) = legendre(n, x);
        x -= p / dp;
        nodes[i] = 0.5 * (x + 1.0);
        weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    // Newton walks roots from +1 downward; present them in increasing order.
    nodes.reverse();
    weights.reverse();
    Ok(QuadratureRule { nodes, weights })
}
