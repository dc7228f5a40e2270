//! Rigid-body attitude on the unit quaternions.
//!
//! The spatial angular momentum `m0` is a constant of the free rigid body;
//! with the attitude `q` as state, the energy is the kinetic energy of the
//! body written through the rotation `R(q)`:
//!
//! ```text
//! H(q) = m0 . R(q) I^-1 R(q)^T m0 / 2,
//! ```
//!
//! and the attitude evolves by `q' = xi(q) . q` with
//! `xi(q) = R(q) I^-1 R(q)^T m0 / 2`, half the spatial angular velocity
//! (the half is the usual quaternion double-cover factor). The skew
//! structure is the rank-two bivector spanned by the field and the
//! trivialized differential, which reproduces the field exactly because
//! the two are orthogonal.

use nalgebra::{Matrix3, Vector3, Vector4};

use crate::bivector::TrivializedBivector;
use crate::discrete_diff::FirstIntegral;
use crate::error::{Error, Result};
use crate::integrator::DgProblem;
use crate::lie::{quat, AlgebraElement, Covector, GroupElement, GroupKind};

#[derive(Debug, Clone)]
pub struct QuaternionAttitude {
    inertia: Vector3<f64>,
    m0: Vector3<f64>,
    kind: GroupKind,
    integral: FirstIntegral,
}

/// Spatial inverse inertia `S(q) = R(q) I^-1 R(q)^T`.
fn spatial_inverse_inertia(q: &Vector4<f64>, inertia: &Vector3<f64>) -> Matrix3<f64> {
    let r = quat::euler_rodriguez(q);
    let inv = Matrix3::from_diagonal(&Vector3::new(
        1.0 / inertia[0],
        1.0 / inertia[1],
        1.0 / inertia[2],
    ));
    r * inv * r.transpose()
}

fn energy(q: &Vector4<f64>, inertia: &Vector3<f64>, m0: &Vector3<f64>) -> f64 {
    0.5 * m0.dot(&(spatial_inverse_inertia(q, inertia) * m0))
}

/// Gradient of the energy as a function on all of R^4, using the same
/// rotation formula `R(q) = I + 2 q0 hat(v) + 2 hat(v)^2` the group layer
/// evaluates. Off-sphere values of that extension are never needed: only
/// the sphere-tangent part of the gradient survives below.
fn ambient_gradient(q: &Vector4<f64>, inertia: &Vector3<f64>, m0: &Vector3<f64>) -> Vector4<f64> {
    let v = quat::imag(q);
    let w = q[0];
    let inv = Matrix3::from_diagonal(&Vector3::new(
        1.0 / inertia[0],
        1.0 / inertia[1],
        1.0 / inertia[2],
    ));
    let r = quat::euler_rodriguez(q);
    let u = inv * (r.transpose() * m0);

    // dH/dq_k = m0 . (dR/dq_k) I^-1 R^T m0
    let hv = quat::hat(&v);
    let dw = 2.0 * hv; // dR/dq0
    let mut grad = Vector4::zeros();
    grad[0] = m0.dot(&(dw * u));
    for i in 0..3 {
        let ei = Vector3::from_fn(|r_, _| if r_ == i { 1.0 } else { 0.0 });
        let hei = quat::hat(&ei);
        let dri = 2.0 * w * hei + 2.0 * (hei * hv + hv * hei);
        grad[i + 1] = m0.dot(&(dri * u));
    }
    grad
}

impl QuaternionAttitude {
    pub fn new(inertia: Vector3<f64>, m0: Vector3<f64>) -> Result<Self> {
        if inertia.min() <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "inertia moments must be positive, got {:?}",
                inertia.as_slice()
            )));
        }
        let kind = GroupKind::UnitQuaternion;
        let (i1, m1) = (inertia, m0);
        let (i2, m2) = (inertia, m0);
        let integral = FirstIntegral::new(
            kind.clone(),
            move |x| Ok(energy(x.as_quaternion()?, &i1, &m1)),
            move |x| {
                let q = x.as_quaternion()?;
                let grad = ambient_gradient(q, &i2, &m2);
                // project to the 3-sphere tangent, then right-translate:
                // the algebra coordinates are vec(grad_proj * conj(q))
                let grad_proj = grad - q * q.dot(&grad);
                Covector::vec3(
                    GroupKind::UnitQuaternion,
                    quat::imag(&quat::mul(&grad_proj, &quat::conj(q))),
                )
            },
        );
        Ok(QuaternionAttitude {
            inertia,
            m0,
            kind,
            integral,
        })
    }

    /// Body inertia `diag(1, 5, 60)` with initial body angular velocity
    /// `(1, 0.5, -1)`: the reference configuration of the convergence
    /// experiment (so `m0 = I v0 = (1, 2.5, -60)` and the energy at the
    /// identity attitude is 31.125).
    pub fn reference() -> Self {
        let inertia = Vector3::new(1.0, 5.0, 60.0);
        let v0 = Vector3::new(1.0, 0.5, -1.0);
        QuaternionAttitude::new(inertia, inertia.component_mul(&v0))
            .expect("reference inertia is valid")
    }

    pub fn default_initial() -> GroupElement {
        GroupElement::identity(GroupKind::UnitQuaternion)
    }

    pub fn inertia(&self) -> &Vector3<f64> {
        &self.inertia
    }

    pub fn spatial_momentum(&self) -> &Vector3<f64> {
        &self.m0
    }

    pub fn energy(&self, x: &GroupElement) -> Result<f64> {
        self.integral.eval(x)
    }

    /// Body angular velocity at attitude `q`: `I^-1 R(q)^T m0`.
    pub fn body_velocity(&self, x: &GroupElement) -> Result<Vector3<f64>> {
        let q = x.as_quaternion()?;
        let r = quat::euler_rodriguez(q);
        let u = r.transpose() * self.m0;
        Ok(Vector3::new(
            u[0] / self.inertia[0],
            u[1] / self.inertia[1],
            u[2] / self.inertia[2],
        ))
    }

    fn field_vec(&self, q: &Vector4<f64>) -> Vector3<f64> {
        0.5 * (spatial_inverse_inertia(q, &self.inertia) * self.m0)
    }
}

impl DgProblem for QuaternionAttitude {
    fn kind(&self) -> &GroupKind {
        &self.kind
    }

    fn integral(&self) -> &FirstIntegral {
        &self.integral
    }

    fn bivector_at(&self, x: &GroupElement) -> Result<TrivializedBivector> {
        let f = self.field(x)?;
        let gamma = self.integral.trivialized_differential(x)?;
        TrivializedBivector::rank_two(f, gamma)
    }

    fn field(&self, x: &GroupElement) -> Result<AlgebraElement> {
        let q = x.as_quaternion()?;
        AlgebraElement::vec3(GroupKind::UnitQuaternion, self.field_vec(q))
    }
}
