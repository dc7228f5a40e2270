//! Dense 3x3 matrix exponential and principal logarithm, plus the adjoint
//! machinery for gl(3) and sl(3).
//!
//! `expm` is Taylor with scaling and squaring (the series is cut at 16 terms
//! once the scaled norm is at most 1/2, which already overshoots f64
//! precision). `logm` is inverse scaling and squaring: Denman–Beavers square
//! roots are applied until the iterate is within 1/4 of the identity, then a
//! Taylor expansion of log(I + X) is summed and scaled back. At 3x3 size
//! there is no reason for Padé economics; plain series keep the error terms
//! transparent.

use nalgebra::Matrix3;

use crate::error::{Error, Result};
use crate::lie::series;

const EXPM_TAYLOR_TERMS: usize = 16;
const EXPM_SCALE_TARGET: f64 = 0.5;
const LOGM_TAYLOR_RADIUS: f64 = 0.25;

pub fn expm(a: &Matrix3<f64>) -> Matrix3<f64> {
    let norm = a.norm();
    let scalings = if norm <= EXPM_SCALE_TARGET {
        0
    } else {
        (norm / EXPM_SCALE_TARGET).log2().ceil() as i32
    };
    let b = a / 2f64.powi(scalings);

    let mut sum = Matrix3::identity();
    let mut term = Matrix3::identity();
    for k in 1..=EXPM_TAYLOR_TERMS {
        term = term * b / (k as f64);
        sum += term;
    }

    for _ in 0..scalings {
        sum = sum * sum;
    }
    sum
}

/// Principal square root by the Denman–Beavers iteration.
fn sqrtm(a: &Matrix3<f64>) -> Result<Matrix3<f64>> {
    let mut y = *a;
    let mut z = Matrix3::identity();
    for _ in 0..60 {
        let y_inv = y.try_inverse().ok_or(Error::Singular("sqrtm"))?;
        let z_inv = z.try_inverse().ok_or(Error::Singular("sqrtm"))?;
        let y_next = 0.5 * (y + z_inv);
        let z_next = 0.5 * (z + y_inv);
        let delta = (y_next - y).norm();
        y = y_next;
        z = z_next;
        if delta <= 1e-15 * y.norm().max(1.0) {
            return Ok(y);
        }
    }
    Err(Error::NoConvergence {
        op: "sqrtm (Denman-Beavers)",
        iterations: 60,
        residual: (y * y - a).norm(),
    })
}

/// Principal logarithm. Defined for matrices with no eigenvalue on the
/// closed negative real axis (in particular everything reachable as
/// `expm(xi) * g` near `g`).
pub fn logm(a: &Matrix3<f64>) -> Result<Matrix3<f64>> {
    let eigs = a.complex_eigenvalues();
    for lambda in eigs.iter() {
        if lambda.re <= 0.0 && lambda.im.abs() <= 1e-12 * lambda.re.abs().max(1.0) {
            return Err(Error::LogDomain(format!(
                "eigenvalue {:.6e} + {:.1e}i on the closed negative real axis",
                lambda.re, lambda.im
            )));
        }
    }

    let mut x = *a;
    let mut scalings = 0u32;
    while (x - Matrix3::identity()).norm() > LOGM_TAYLOR_RADIUS {
        if scalings >= 40 {
            return Err(Error::NoConvergence {
                op: "logm (inverse scaling)",
                iterations: 40,
                residual: (x - Matrix3::identity()).norm(),
            });
        }
        x = sqrtm(&x)?;
        scalings += 1;
    }

    // log(I + E) = E - E^2/2 + E^3/3 - ...
    let e = x - Matrix3::identity();
    let mut sum = Matrix3::zeros();
    let mut power = Matrix3::identity();
    for k in 1..=60 {
        power *= e;
        let term = power / (k as f64);
        sum += if k % 2 == 1 { term } else { -term };
        if term.norm() < 1e-17 {
            break;
        }
    }
    Ok(2f64.powi(scalings as i32) * sum)
}

pub fn ad(xi: &Matrix3<f64>, eta: &Matrix3<f64>) -> Matrix3<f64> {
    xi * eta - eta * xi
}

/// Coadjoint action under the Frobenius pairing `<A, B> = tr(A^T B)`:
/// `<coad(xi, mu), eta> = <mu, ad(xi, eta)>` gives `xi^T mu - mu xi^T`.
pub fn coad(xi: &Matrix3<f64>, mu: &Matrix3<f64>) -> Matrix3<f64> {
    xi.transpose() * mu - mu * xi.transpose()
}

pub fn dexp(sigma: &Matrix3<f64>, eta: &Matrix3<f64>) -> Result<Matrix3<f64>> {
    series::dexp_series(|m| ad(sigma, m), eta)
}

pub fn dexpinv(sigma: &Matrix3<f64>, eta: &Matrix3<f64>) -> Result<Matrix3<f64>> {
    series::dexpinv_series(|m| ad(sigma, m), eta)
}

// Duals under the Frobenius pairing: replace ad by coad in the series.

pub fn dexp_dual(sigma: &Matrix3<f64>, mu: &Matrix3<f64>) -> Result<Matrix3<f64>> {
    series::dexp_series(|m| coad(sigma, m), mu)
}

pub fn dexpinv_dual(sigma: &Matrix3<f64>, mu: &Matrix3<f64>) -> Result<Matrix3<f64>> {
    series::dexpinv_series(|m| coad(sigma, m), mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::Vector3;

    #[test]
    fn expm_of_nilpotent_is_exact_polynomial() {
        let n = Matrix3::new(0.0, 0.7, -1.3, 0.0, 0.0, 2.1, 0.0, 0.0, 0.0);
        let expected = Matrix3::identity() + n + 0.5 * n * n;
        assert_relative_eq!(expm(&n), expected, epsilon = 1e-15);
    }

    #[test]
    fn expm_of_diagonal() {
        let d = Matrix3::from_diagonal(&Vector3::new(0.3, -1.2, 2.5));
        let expected =
            Matrix3::from_diagonal(&Vector3::new(0.3f64.exp(), (-1.2f64).exp(), 2.5f64.exp()));
        assert_relative_eq!(expm(&d), expected, epsilon = 1e-14, max_relative = 1e-14);
    }

    #[test]
    fn det_of_expm_is_exp_of_trace() {
        let xi = Matrix3::new(0.2, 0.5, -0.1, 0.4, -0.3, 0.2, -0.6, 0.1, 0.35);
        assert_relative_eq!(
            expm(&xi).determinant(),
            xi.trace().exp(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn logm_inverts_expm() {
        for scale in [0.05, 0.5, 1.0, 2.0] {
            let xi = scale * Matrix3::new(0.2, 0.5, -0.1, 0.4, -0.3, 0.2, -0.6, 0.1, 0.3);
            let back = logm(&expm(&xi)).unwrap();
            assert_relative_eq!(back, xi, epsilon = 1e-11, max_relative = 1e-11);
        }
    }

    #[test]
    fn logm_needs_square_roots_far_from_identity() {
        // |exp(xi) - I| >> 1/4 forces the Denman-Beavers chain.
        let xi = Matrix3::from_diagonal(&Vector3::new(2.0, -1.5, 1.0));
        let a = expm(&xi);
        assert!((a - Matrix3::identity()).norm() > 1.0);
        assert_relative_eq!(logm(&a).unwrap(), xi, epsilon = 1e-12);
    }

    #[test]
    fn logm_rejects_negative_and_singular_spectra() {
        assert!(logm(&Matrix3::from_diagonal(&Vector3::new(-1.0, 2.0, 3.0))).is_err());
        assert!(logm(&Matrix3::from_diagonal(&Vector3::new(0.0, 1.0, 1.0))).is_err());
    }

    #[test]
    fn dexp_identity_and_inverse() {
        let eta = Matrix3::new(0.3, -0.2, 0.5, 0.1, 0.4, -0.6, 0.7, 0.0, -0.1);
        assert_eq!(dexp(&Matrix3::zeros(), &eta).unwrap(), eta);
        let sigma = Matrix3::new(0.2, 0.1, -0.3, 0.0, -0.25, 0.15, 0.3, -0.1, 0.05);
        let back = dexpinv(&sigma, &dexp(&sigma, &eta).unwrap()).unwrap();
        assert_relative_eq!(back, eta, epsilon = 1e-13);
    }

    #[test]
    fn duals_are_adjoint_under_frobenius_pairing() {
        let sigma = Matrix3::new(0.2, 0.1, -0.3, 0.0, -0.25, 0.15, 0.3, -0.1, 0.05);
        let eta = Matrix3::new(0.3, -0.2, 0.5, 0.1, 0.4, -0.6, 0.7, 0.0, -0.1);
        let mu = Matrix3::new(-0.4, 0.2, 0.1, 0.6, -0.1, 0.3, 0.2, 0.5, -0.7);
        let lhs = (dexp_dual(&sigma, &mu).unwrap().transpose() * eta).trace();
        let rhs = (mu.transpose() * dexp(&sigma, &eta).unwrap()).trace();
        assert_relative_eq!(lhs, rhs, epsilon = 1e-13);

        let lhs = (dexpinv_dual(&sigma, &mu).unwrap().transpose() * eta).trace();
        let rhs = (mu.transpose() * dexpinv(&sigma, &eta).unwrap()).trace();
        assert_relative_eq!(lhs, rhs, epsilon = 1e-13);
    }

    #[test]
    fn coad_pairing_identity() {
        let xi = Matrix3::new(0.2, 0.7, -0.3, 0.1, -0.2, 0.4, -0.5, 0.3, 0.0);
        let eta = Matrix3::new(-0.1, 0.2, 0.6, 0.3, 0.1, -0.4, 0.2, -0.2, 0.5);
        let mu = Matrix3::new(0.4, -0.6, 0.2, 0.0, 0.3, 0.1, -0.2, 0.5, -0.3);
        let lhs = (coad(&xi, &mu).transpose() * eta).trace();
        let rhs = (mu.transpose() * ad(&xi, &eta)).trace();
        assert_relative_eq!(lhs, rhs, epsilon = 1e-14);
        // Central elements act trivially.
        assert_eq!(coad(&Matrix3::identity(), &mu), Matrix3::zeros());
        assert_eq!(coad(&Matrix3::zeros(), &mu), Matrix3::zeros());
    }
}
