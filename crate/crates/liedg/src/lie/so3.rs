//! SO(3) kernel: Rodrigues exponential, principal logarithm, and the
//! right-trivialized tangent maps. The algebra so(3) is identified with R^3
//! through `hat`, so the commutator is the plain cross product and all
//! formulas are the classical rotation-vector ones (angle `|xi|`, not the
//! doubled quaternion angle).

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::lie::quat;

/// `dexpinv` on so(3) is singular at angle `2*pi`.
pub const DEXPINV_RADIUS: f64 = 2.0 * std::f64::consts::PI;

/// Rodrigues formula `exp(hat(v)) = I + sinc(t) hat(v) + ((1-cos t)/t^2) hat(v)^2`.
pub fn exp(v: &Vector3<f64>) -> Matrix3<f64> {
    let t = v.norm();
    let h = quat::hat(v);
    let (a, b) = if t < 1e-8 {
        (1.0 - t * t / 6.0, 0.5 - t * t / 24.0)
    } else {
        (t.sin() / t, (1.0 - t.cos()) / (t * t))
    };
    Matrix3::identity() + a * h + b * (h * h)
}

/// Principal logarithm, routed through the quaternion double cover: well
/// conditioned for all angles below `pi`, where the direct `asin`-based
/// extraction loses half the significant digits.
pub fn log(r: &Matrix3<f64>) -> Result<Vector3<f64>> {
    let orth = (r * r.transpose() - Matrix3::identity()).norm();
    if orth > 1e-8 || (r.determinant() - 1.0).abs() > 1e-8 {
        return Err(Error::LogDomain(format!(
            "matrix is not a rotation (|RR^T - I| = {orth:.3e}, det = {:.6})",
            r.determinant()
        )));
    }
    let q = quat::from_rotation_matrix(r)?;
    // The quaternion chart halves the angle; scale back up.
    Ok(2.0 * quat::log(&q)?)
}

/// Below this angle the Taylor forms are used; both branches carry ~1e-13
/// relative accuracy at the switch, so the coefficients are seamless there.
const SERIES_ANGLE: f64 = 5e-2;

fn dexp_coeffs(t: f64) -> (f64, f64) {
    if t < SERIES_ANGLE {
        let t2 = t * t;
        (
            0.5 - t2 / 24.0 + t2 * t2 / 720.0 - t2 * t2 * t2 / 40320.0,
            1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0 - t2 * t2 * t2 / 362880.0,
        )
    } else {
        // 1 - cos t = 2 sin^2(t/2) avoids cancellation for moderate angles.
        let s = (0.5 * t).sin();
        (2.0 * s * s / (t * t), (t - t.sin()) / (t * t * t))
    }
}

fn dexpinv_coeff(t: f64) -> Result<f64> {
    if t >= DEXPINV_RADIUS - 1e-9 {
        return Err(Error::TrivializationDomain {
            op: "so3::dexpinv",
            norm: t,
            radius: DEXPINV_RADIUS,
        });
    }
    Ok(if t < SERIES_ANGLE {
        let t2 = t * t;
        1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0 + t2 * t2 * t2 / 1209600.0
    } else {
        (1.0 - 0.5 * t / (0.5 * t).tan()) / (t * t)
    })
}

/// `dexp_sigma = I + ((1-cos t)/t^2) hat + ((t - sin t)/t^3) hat^2`, `t = |sigma|`.
pub fn dexp(sigma: &Vector3<f64>, eta: &Vector3<f64>) -> Vector3<f64> {
    let (c1, c2) = dexp_coeffs(sigma.norm());
    let se = sigma.cross(eta);
    eta + c1 * se + c2 * sigma.cross(&se)
}

/// `dexpinv_sigma = I - hat/2 + d2(t) hat^2`.
pub fn dexpinv(sigma: &Vector3<f64>, eta: &Vector3<f64>) -> Result<Vector3<f64>> {
    let d2 = dexpinv_coeff(sigma.norm())?;
    let se = sigma.cross(eta);
    Ok(eta - 0.5 * se + d2 * sigma.cross(&se))
}

pub fn ad(u: &Vector3<f64>, v: &Vector3<f64>) -> Vector3<f64> {
    u.cross(v)
}

pub fn coad(u: &Vector3<f64>, mu: &Vector3<f64>) -> Vector3<f64> {
    mu.cross(u)
}

pub fn dexp_dual(sigma: &Vector3<f64>, mu: &Vector3<f64>) -> Vector3<f64> {
    dexp(&(-sigma), mu)
}

pub fn dexpinv_dual(sigma: &Vector3<f64>, mu: &Vector3<f64>) -> Result<Vector3<f64>> {
    dexpinv(&(-sigma), mu)
}
