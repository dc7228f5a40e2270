//! Free rigid body reduced to the unit momentum sphere.
//!
//! State: the direction `p` of the body angular momentum, `|p| = 1`.
//! Energy `H(p) = p . I^-1 p / 2` for a diagonal inertia `I`; the motion
//! `p' = p x I^-1 p` conserves both `H` and the norm. The discrete step
//! works in the retraction chart at `center(p, q)` with the bivector
//! anchored at the chord midpoint `(p + q)/2`, which reproduces, in closed
//! form, the corrected-midpoint discrete differential below.

use nalgebra::{DVector, Vector3};

use crate::discrete_diff::SphereIntegral;
use crate::error::{Error, Result};
use crate::integrator::SphereDgProblem;
use crate::manifold::UnitSphere;

#[derive(Debug, Clone)]
pub struct SphereRigidBody {
    inertia: Vector3<f64>,
    sphere: UnitSphere,
    integral: SphereIntegral,
}

impl SphereRigidBody {
    pub fn new(inertia: Vector3<f64>) -> Result<Self> {
        if inertia.min() <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "inertia moments must be positive, got {:?}",
                inertia.as_slice()
            )));
        }
        let inv = Vector3::new(1.0 / inertia[0], 1.0 / inertia[1], 1.0 / inertia[2]);
        let inv2 = inv;
        let integral = SphereIntegral::new(
            move |p| 0.5 * (p[0] * p[0] * inv[0] + p[1] * p[1] * inv[1] + p[2] * p[2] * inv[2]),
            move |p| {
                DVector::from_column_slice(&[p[0] * inv2[0], p[1] * inv2[1], p[2] * inv2[2]])
            },
        );
        Ok(SphereRigidBody {
            inertia,
            sphere: UnitSphere::new(3)?,
            integral,
        })
    }

    /// Reference inertia used by the long-run experiment.
    pub fn reference() -> Self {
        SphereRigidBody::new(Vector3::new(1.0, 2.0, 3.0)).expect("reference inertia is valid")
    }

    /// A unit starting point away from every principal axis, so the orbit
    /// is a genuine closed curve rather than an equilibrium.
    pub fn default_initial() -> DVector<f64> {
        let v = Vector3::new(1.0, 1.0, 1.0).normalize();
        DVector::from_column_slice(v.as_slice())
    }

    pub fn inertia(&self) -> &Vector3<f64> {
        &self.inertia
    }

    pub fn energy(&self, p: &DVector<f64>) -> f64 {
        self.integral.eval(p)
    }

    /// The corrected-midpoint discrete differential in closed form, as an
    /// ambient vector:
    ///
    /// ```text
    /// (1/|m|) ( I^-1 m  +  (|m|^2 - 1)/|q - p|^2 (H(q) - H(p)) (q - p) ),
    /// m = (p + q)/2.
    /// ```
    ///
    /// It differs from the chart construction only by a component along
    /// the chart normal, which neither the chain rule nor the cross-product
    /// contraction can see; the oracle test below checks that equivalence.
    pub fn closed_form_discrete_differential(
        &self,
        p: &DVector<f64>,
        q: &DVector<f64>,
    ) -> Result<DVector<f64>> {
        let m = (p + q) * 0.5;
        let mn = m.norm();
        if mn < 1e-12 {
            return Err(Error::Degenerate {
                op: "closed-form discrete differential",
                detail: "endpoints are antipodal".into(),
            });
        }
        let base = self.integral.ambient_gradient(&m);
        let diff = q - p;
        let d2 = diff.norm_squared();
        let correction = if d2 < 1e-28 {
            DVector::zeros(3)
        } else {
            let dh = self.energy(q) - self.energy(p);
            diff * ((mn * mn - 1.0) / d2 * dh)
        };
        Ok((base + correction) / mn)
    }
}

impl SphereDgProblem for SphereRigidBody {
    fn sphere(&self) -> &UnitSphere {
        &self.sphere
    }

    fn integral(&self) -> &SphereIntegral {
        &self.integral
    }
}
