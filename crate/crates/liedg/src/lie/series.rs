//! Truncated Lie series for the right-trivialized tangent maps on matrix
//! algebras, where no closed form is available:
//!
//!   dexp_xi    = phi(ad_xi),  phi(z) = (e^z - 1)/z = sum z^k / (k+1)!
//!   dexpinv_xi = psi(ad_xi),  psi(z) = z/(e^z - 1) = sum B_k z^k / k!
//!
//! The caller supplies the adjoint action as a closure, so the same driver
//! serves gl(3), sl(3) and the semidirect pair algebra (and, dualized, their
//! coadjoint series). Terms are accumulated until they fall below 1e-16
//! relative to the input, with a hard cap of 30 terms; hitting the cap is a
//! convergence error, which in practice only happens outside the |ad| < 2*pi
//! region where psi's series diverges anyway.

use crate::error::{Error, Result};

/// Vector-space operations the series driver needs from a coordinate type.
pub trait AdSpace: Clone {
    fn add_scaled(&mut self, s: f64, other: &Self);
    fn norm2(&self) -> f64;
}

impl AdSpace for nalgebra::Matrix3<f64> {
    fn add_scaled(&mut self, s: f64, other: &Self) {
        *self += s * other;
    }
    fn norm2(&self) -> f64 {
        self.norm()
    }
}

impl AdSpace for (nalgebra::Matrix3<f64>, nalgebra::Matrix3<f64>) {
    fn add_scaled(&mut self, s: f64, other: &Self) {
        self.0 += s * other.0;
        self.1 += s * other.1;
    }
    fn norm2(&self) -> f64 {
        (self.0.norm_squared() + self.1.norm_squared()).sqrt()
    }
}

const MAX_TERMS: usize = 30;

/// Bernoulli numbers B_0..B_30 (B_1 = -1/2, matching psi(z) = z/(e^z - 1)).
const BERNOULLI: [f64; 31] = [
    1.0,
    -0.5,
    1.0 / 6.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    1.0 / 42.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    5.0 / 66.0,
    0.0,
    -691.0 / 2730.0,
    0.0,
    7.0 / 6.0,
    0.0,
    -3617.0 / 510.0,
    0.0,
    43867.0 / 798.0,
    0.0,
    -174611.0 / 330.0,
    0.0,
    854513.0 / 138.0,
    0.0,
    -236364091.0 / 2730.0,
    0.0,
    8553103.0 / 6.0,
    0.0,
    -23749461029.0 / 870.0,
    0.0,
    8615841276005.0 / 14322.0,
];

/// `sum_k ad^k(eta) / (k+1)!`. Entire, so the factorial always wins; the cap
/// only triggers for adjoint norms far outside any step this crate takes.
pub fn dexp_series<T: AdSpace>(ad: impl Fn(&T) -> T, eta: &T) -> Result<T> {
    let tol = 1e-16 * (1.0 + eta.norm2());
    let mut acc = eta.clone();
    let mut power = eta.clone(); // ad^k(eta)
    let mut factorial = 1.0f64; // (k+1)!
    for k in 1..=MAX_TERMS {
        power = ad(&power);
        factorial *= (k + 1) as f64;
        let coeff = 1.0 / factorial;
        acc.add_scaled(coeff, &power);
        if power.norm2() * coeff < tol {
            return Ok(acc);
        }
    }
    Err(Error::NoConvergence {
        op: "dexp series",
        iterations: MAX_TERMS,
        residual: power.norm2() / factorial,
    })
}

/// `sum_k B_k ad^k(eta) / k!`. Odd Bernoulli numbers beyond B_1 vanish, so
/// the stopping test bounds the tail through the adjoint power norm
/// (|B_k|/k! <= 4 (2*pi)^-k for k >= 2) instead of the last computed term.
pub fn dexpinv_series<T: AdSpace>(ad: impl Fn(&T) -> T, eta: &T) -> Result<T> {
    let tol = 1e-16 * (1.0 + eta.norm2());
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut acc = eta.clone();
    let mut power = eta.clone();
    let mut factorial = 1.0f64;
    let mut tail_bound = f64::INFINITY;
    for k in 1..=MAX_TERMS {
        power = ad(&power);
        factorial *= k as f64;
        acc.add_scaled(BERNOULLI[k] / factorial, &power);
        tail_bound = 4.0 * power.norm2() / two_pi.powi(k as i32);
        if tail_bound < tol {
            return Ok(acc);
        }
    }
    Err(Error::NoConvergence {
        op: "dexpinv series",
        iterations: MAX_TERMS,
        residual: tail_bound,
    })
}
