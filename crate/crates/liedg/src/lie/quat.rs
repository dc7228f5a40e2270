//! Unit-quaternion kernel: Hamilton product, exponential/logarithm on the
//! 3-sphere, the rotation (Euler–Rodriguez) map, and the right-trivialized
//! tangent maps of `exp`.
//!
//! Layout: scalar-first, `q = [q0, q1, q2, q3]` with imaginary part
//! `vec(q) = (q1, q2, q3)`. The algebra of imaginary quaternions is
//! identified with R^3; its commutator is `[u, v] = 2 u x v`, so every
//! `dexp`-type map below is the classical SO(3) formula evaluated at twice
//! the rotation-vector norm.

use nalgebra::{Matrix3, Vector3, Vector4};

use crate::error::{Error, Result};

/// Convergence radius for the inverse tangent maps: `dexpinv` on the
/// imaginary quaternions is singular where the angle `2|xi|` reaches `2*pi`.
pub const DEXPINV_RADIUS: f64 = std::f64::consts::PI;

pub fn scalar(q: &Vector4<f64>) -> f64 {
    q[0]
}

pub fn imag(q: &Vector4<f64>) -> Vector3<f64> {
    Vector3::new(q[1], q[2], q[3])
}

pub fn from_parts(w: f64, v: &Vector3<f64>) -> Vector4<f64> {
    Vector4::new(w, v[0], v[1], v[2])
}

pub fn identity() -> Vector4<f64> {
    Vector4::new(1.0, 0.0, 0.0, 0.0)
}

/// Hamilton product `p * q`.
pub fn mul(p: &Vector4<f64>, q: &Vector4<f64>) -> Vector4<f64> {
    let (pw, pv) = (scalar(p), imag(p));
    let (qw, qv) = (scalar(q), imag(q));
    from_parts(pw * qw - pv.dot(&qv), &(pw * qv + qw * pv + pv.cross(&qv)))
}

/// Conjugate; for unit quaternions this is the group inverse.
pub fn conj(q: &Vector4<f64>) -> Vector4<f64> {
    Vector4::new(q[0], -q[1], -q[2], -q[3])
}

/// Rescale to unit norm. Group operations renormalize their results so that
/// long trajectories cannot drift off the 3-sphere.
pub fn normalize(q: &Vector4<f64>) -> Result<Vector4<f64>> {
    let n = q.norm();
    if n < 1e-300 || !n.is_finite() {
        return Err(Error::Degenerate {
            op: "quat::normalize",
            detail: format!("norm {n:.3e}"),
        });
    }
    Ok(q / n)
}

/// Exponential of an imaginary quaternion `[0, v]`:
/// `exp([0, v]) = [cos |v|, sin |v| * v/|v|]`.
pub fn exp(v: &Vector3<f64>) -> Vector4<f64> {
    let theta = v.norm();
    from_parts(theta.cos(), &(sinc(theta) * v))
}

/// Principal logarithm; defined away from the antipode `q0 = -1`.
pub fn log(q: &Vector4<f64>) -> Result<Vector3<f64>> {
    let w = scalar(q);
    let v = imag(q);
    let s = v.norm();
    if s <= 1e-14 && w < 0.0 {
        return Err(Error::LogDomain(
            "quaternion at or near the antipode of the identity".into(),
        ));
    }
    let theta = s.atan2(w);
    // theta / s, smooth through s -> 0 (then theta ~ s / w and w ~ 1).
    let f = if s < 1e-8 {
        (1.0 - s * s / (3.0 * w * w)) / w
    } else {
        theta / s
    };
    Ok(f * v)
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Skew (cross-product) matrix of a 3-vector: `hat(v) w = v x w`.
pub fn hat(v: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -v[2], v[1], v[2], 0.0, -v[0], -v[1], v[0], 0.0)
}

/// Rotation matrix of a unit quaternion:
/// `E(q) = I + 2 q0 hat(v) + 2 hat(v)^2` with `v = imag(q)`.
pub fn euler_rodriguez(q: &Vector4<f64>) -> Matrix3<f64> {
    let v = imag(q);
    let h = hat(&v);
    Matrix3::identity() + 2.0 * scalar(q) * h + 2.0 * h * h
}

/// Rotate a 3-vector by conjugation, `vec(q * [0, w] * conj(q))`.
pub fn rotate(q: &Vector4<f64>, w: &Vector3<f64>) -> Vector3<f64> {
    imag(&mul(&mul(q, &from_parts(0.0, w)), &conj(q)))
}

/// Unit quaternion of a rotation matrix (Shepperd's branch selection).
/// Used to route the SO(3) logarithm through the quaternion chart, which is
/// well conditioned for every angle below `pi`.
pub fn from_rotation_matrix(r: &Matrix3<f64>) -> Result<Vector4<f64>> {
    let tr = r.trace();
    let q = if tr > 0.0 {
        let s = (tr + 1.0).sqrt() * 2.0;
        Vector4::new(
            0.25 * s,
            (r[(2, 1)] - r[(1, 2)]) / s,
            (r[(0, 2)] - r[(2, 0)]) / s,
            (r[(1, 0)] - r[(0, 1)]) / s,
        )
    } else if r[(0, 0)] > r[(1, 1)] && r[(0, 0)] > r[(2, 2)] {
        let s = (1.0 + r[(0, 0)] - r[(1, 1)] - r[(2, 2)]).sqrt() * 2.0;
        Vector4::new(
            (r[(2, 1)] - r[(1, 2)]) / s,
            0.25 * s,
            (r[(0, 1)] + r[(1, 0)]) / s,
            (r[(0, 2)] + r[(2, 0)]) / s,
        )
    } else if r[(1, 1)] > r[(2, 2)] {
        let s = (1.0 + r[(1, 1)] - r[(0, 0)] - r[(2, 2)]).sqrt() * 2.0;
        Vector4::new(
            (r[(0, 2)] - r[(2, 0)]) / s,
            (r[(0, 1)] + r[(1, 0)]) / s,
            0.25 * s,
            (r[(1, 2)] + r[(2, 1)]) / s,
        )
    } else {
        let s = (1.0 + r[(2, 2)] - r[(0, 0)] - r[(1, 1)]).sqrt() * 2.0;
        Vector4::new(
            (r[(1, 0)] - r[(0, 1)]) / s,
            (r[(0, 2)] + r[(2, 0)]) / s,
            (r[(1, 2)] + r[(2, 1)]) / s,
            0.25 * s,
        )
    };
    normalize(&q)
}

// --- right-trivialized tangent maps of exp ---------------------------------
//
// With d/dt exp(s(t)) = dexp_s(s') * exp(s), the map is phi(ad_s) where
// phi(z) = (e^z - 1)/z and ad_s = 2 hat(s). Writing theta = |s|:
//
//   dexp_s    = I + c1 hat(s) + c2 hat(s)^2,
//   dexpinv_s = I -    hat(s) + d2 hat(s)^2,
//
// with the coefficients below. The adjoint factor 2 is folded into them.

/// Below this angle the Taylor forms are used; the windows overlap where
/// both are accurate to ~1e-13 relative, so the switch is seamless.
const SERIES_ANGLE: f64 = 5e-2;

fn dexp_coeffs(theta: f64) -> (f64, f64) {
    if theta < SERIES_ANGLE {
        let t2 = theta * theta;
        (
            1.0 - t2 / 3.0 + t2 * t2 * (2.0 / 45.0) - t2 * t2 * t2 / 315.0,
            2.0 / 3.0 - 2.0 * t2 / 15.0 + t2 * t2 * (4.0 / 315.0) - t2 * t2 * t2 * (2.0 / 2835.0),
        )
    } else {
        let x = 2.0 * theta;
        // 1 - cos(2t) = 2 sin^2 t avoids cancellation for moderate angles.
        let s = theta.sin() / theta;
        (s * s, (x - x.sin()) / (2.0 * theta * theta * theta))
    }
}

fn dexpinv_coeff(theta: f64) -> Result<f64> {
    if theta >= DEXPINV_RADIUS - 1e-9 {
        return Err(Error::TrivializationDomain {
            op: "quat::dexpinv",
            norm: theta,
            radius: DEXPINV_RADIUS,
        });
    }
    Ok(if theta < SERIES_ANGLE {
        let t2 = theta * theta;
        1.0 / 3.0 + t2 / 45.0 + t2 * t2 * (2.0 / 945.0) + t2 * t2 * t2 / 4725.0
    } else {
        (1.0 - theta / theta.tan()) / (theta * theta)
    })
}

pub fn dexp(sigma: &Vector3<f64>, eta: &Vector3<f64>) -> Vector3<f64> {
    let (c1, c2) = dexp_coeffs(sigma.norm());
    let se = sigma.cross(eta);
    eta + c1 * se + c2 * sigma.cross(&se)
}

pub fn dexpinv(sigma: &Vector3<f64>, eta: &Vector3<f64>) -> Result<Vector3<f64>> {
    let d2 = dexpinv_coeff(sigma.norm())?;
    let se = sigma.cross(eta);
    Ok(eta - se + d2 * sigma.cross(&se))
}

/// Adjoint action `ad_u(v) = [u, v] = 2 u x v`.
pub fn ad(u: &Vector3<f64>, v: &Vector3<f64>) -> Vector3<f64> {
    2.0 * u.cross(v)
}

/// Coadjoint action, the dot-product dual of [`ad`]: `ad*_u(mu) = 2 mu x u`.
pub fn coad(u: &Vector3<f64>, mu: &Vector3<f64>) -> Vector3<f64> {
    2.0 * mu.cross(u)
}

// The duals of dexp/dexpinv under the dot product are the transposes; since
// hat(s)^T = -hat(s) and both maps are even/odd polynomials in hat(s), the
// transpose is the same map at -s.

pub fn dexp_dual(sigma: &Vector3<f64>, mu: &Vector3<f64>) -> Vector3<f64> {
    dexp(&(-sigma), mu)
}

pub fn dexpinv_dual(sigma: &Vector3<f64>, mu: &Vector3<f64>) -> Result<Vector3<f64>> {
    dexpinv(&(-sigma), mu)
}
