//! The unit sphere with its projective retraction.
//!
//! Points live on `S^{d-1}` inside `R^d`; tangent vectors at `p` are ambient
//! vectors orthogonal to `p`. The retraction and its inverse
//!
//! ```text
//! retract_p(v)  = (p + v) / |p + v|,
//! retract_p^-1(q) = q / <p, q> - p   (defined for <p, q> > 0),
//! ```
//!
//! are the classical projective charts. The midpoint center
//! `c = (p + q)/|p + q|` makes the chart symmetric:
//! `retract_c^-1(p) + retract_c^-1(q) = 0`, which is what gives one-step
//! maps built in this chart their time symmetry.

use nalgebra::DVector;

use crate::error::{Error, Result};

/// Tolerance for point-membership checks.
const POINT_TOL: f64 = 1e-9;

/// The unit sphere `S^{d-1}` in ambient dimension `d`.
#[derive(Debug, Clone)]
pub struct UnitSphere {
    ambient_dim: usize,
}

impl UnitSphere {
    pub fn new(ambient_dim: usize) -> Result<Self> {
        if ambient_dim < 2 {
            return Err(Error::InvalidConfig(format!(
                "sphere needs ambient dimension >= 2, got {ambient_dim}"
            )));
        }
        Ok(UnitSphere { ambient_dim })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn check_point(&self, p: &DVector<f64>) -> Result<()> {
        if p.len() != self.ambient_dim {
            return Err(Error::Degenerate {
                op: "sphere point",
                detail: format!("dimension {} != {}", p.len(), self.ambient_dim),
            });
        }
        if (p.norm() - 1.0).abs() > POINT_TOL {
            return Err(Error::Degenerate {
                op: "sphere point",
                detail: format!("|p| = {:.12} is not 1", p.norm()),
            });
        }
        Ok(())
    }

    /// Radial projection of a nonzero ambient vector onto the sphere.
    pub fn project_point(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        let n = x.norm();
        if n < 1e-14 {
            return Err(Error::Degenerate {
                op: "sphere projection",
                detail: "cannot project the origin".into(),
            });
        }
        Ok(x / n)
    }

    /// Orthogonal projection of `w` onto the tangent space at `p`.
    pub fn project_tangent(&self, p: &DVector<f64>, w: &DVector<f64>) -> DVector<f64> {
        w - p * p.dot(w)
    }

    /// `retract_p(v) = (p + v)/|p + v|`.
    pub fn retract(&self, p: &DVector<f64>, v: &DVector<f64>) -> Result<DVector<f64>> {
        self.project_point(&(p + v))
    }

    /// Inverse chart `retract_p^-1(q) = q/<p,q> - p`; defined on the open
    /// hemisphere around `p`.
    pub fn retract_inverse(&self, p: &DVector<f64>, q: &DVector<f64>) -> Result<DVector<f64>> {
        let cos = p.dot(q);
        if cos <= 1e-12 {
            return Err(Error::OutsideCone { cos });
        }
        Ok(q / cos - p)
    }

    /// Symmetric chart center `c = (p + q)/|p + q|`; fails for (near-)
    /// antipodal pairs.
    pub fn center(&self, p: &DVector<f64>, q: &DVector<f64>) -> Result<DVector<f64>> {
        let s = p + q;
        if s.norm() < 1e-12 {
            return Err(Error::Degenerate {
                op: "sphere chart center",
                detail: "points are antipodal".into(),
            });
        }
        Ok(s.normalize())
    }

    /// Differential of `retract_p` at `u`: the symmetric map
    /// `w -> (w - <n, w> n)/|p + u|` with `n = retract_p(u)`.
    pub fn tangent_map(&self, p: &DVector<f64>, u: &DVector<f64>) -> Result<SphereTangentMap> {
        let shifted = p + u;
        let norm = shifted.norm();
        if norm < 1e-14 {
            return Err(Error::Degenerate {
                op: "sphere tangent map",
                detail: "p + u vanishes".into(),
            });
        }
        Ok(SphereTangentMap {
            scale: 1.0 / norm,
            normal: shifted / norm,
        })
    }
}

/// Differential of the projective retraction at one point; it is symmetric,
/// so it is its own adjoint under the ambient dot product.
#[derive(Debug, Clone)]
pub struct SphereTangentMap {
    scale: f64,
    normal: DVector<f64>,
}

impl SphereTangentMap {
    pub fn apply(&self, w: &DVector<f64>) -> DVector<f64> {
        (w - &self.normal * self.normal.dot(w)) * self.scale
    }

    /// Adjoint under the ambient dot product (the map is symmetric).
    pub fn apply_adjoint(&self, w: &DVector<f64>) -> DVector<f64> {
        self.apply(w)
    }

    /// The image point `retract_p(u)` this map is anchored at.
    pub fn image_point(&self) -> &DVector<f64> {
        &self.normal
    }
}
