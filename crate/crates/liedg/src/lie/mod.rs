//! Lie groups, their algebras, and the trivialization maps.
//!
//! Every supported group is tagged by a [`GroupKind`]; the tag fixes the
//! coordinate layout of algebra elements and covectors and routes each
//! operation to its kernel:
//!
//! * [`GroupKind::UnitQuaternion`] — the 3-sphere of unit quaternions, with
//!   the imaginary part as algebra (commutator `2 u x v`),
//! * [`GroupKind::SO3`] — rotation matrices with rotation-vector algebra,
//! * [`GroupKind::GLplus3`] / [`GroupKind::SL3`] — invertible 3x3 matrices
//!   of positive (resp. unit) determinant,
//! * [`GroupKind::Semidirect`] — the phase-space group GL+(3) x gl(3)*,
//! * [`GroupKind::EuclideanRd`] — flat R^d, where every map degenerates to
//!   the identity and the integrators reduce to their classical forms.
//!
//! Conventions, used consistently everywhere: tangent data are trivialized
//! by **right** translation, `d/dt exp(s(t)) = dexp_s(s') exp(s(t))` defines
//! `dexp`, and duality pairings are the Euclidean/Frobenius dot on
//! coordinates.

use std::fmt;

use nalgebra::{DVector, Matrix3, Vector3, Vector4};

use crate::error::{Error, Result};

pub mod coords;
pub mod gl3;
pub mod quat;
pub mod semidirect;
mod series;
pub mod so3;

pub use coords::Coords;

/// Tolerance for membership checks in constructors (unit norm, det = 1,
/// orthogonality, zero trace). Chosen loose enough to accept values that
/// have been through a few hundred floating-point operations, tight enough
/// to reject anything structurally wrong.
const MEMBERSHIP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupKind {
    UnitQuaternion,
    SO3,
    GLplus3,
    SL3,
    /// GL+(3) x gl(3)* with the coadjoint action.
    Semidirect,
    /// Flat R^d under addition.
    EuclideanRd(usize),
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::UnitQuaternion => write!(f, "UnitQuaternion"),
            GroupKind::SO3 => write!(f, "SO3"),
            GroupKind::GLplus3 => write!(f, "GLplus3"),
            GroupKind::SL3 => write!(f, "SL3"),
            GroupKind::Semidirect => write!(f, "Semidirect(GLplus3)"),
            GroupKind::EuclideanRd(d) => write!(f, "EuclideanR{d}"),
        }
    }
}

impl GroupKind {
    /// Dimension of the algebra as a manifold (SL3 counts the traceless
    /// constraint even though its coordinates are stored as a full matrix).
    pub fn algebra_dim(&self) -> usize {
        match self {
            GroupKind::UnitQuaternion | GroupKind::SO3 => 3,
            GroupKind::GLplus3 => 9,
            GroupKind::SL3 => 8,
            GroupKind::Semidirect => 18,
            GroupKind::EuclideanRd(d) => *d,
        }
    }

    fn check_coords(&self, c: &Coords) -> Result<()> {
        if !c.is_finite() {
            return Err(Error::Degenerate {
                op: "algebra coordinates",
                detail: "non-finite entry".into(),
            });
        }
        let ok = match (self, c) {
            (GroupKind::UnitQuaternion | GroupKind::SO3, Coords::Vec3(_)) => true,
            (GroupKind::GLplus3, Coords::Mat3(_)) => true,
            (GroupKind::SL3, Coords::Mat3(m)) => {
                if m.trace().abs() > MEMBERSHIP_TOL {
                    return Err(Error::Degenerate {
                        op: "sl(3) coordinates",
                        detail: format!("trace {:.3e} != 0", m.trace()),
                    });
                }
                true
            }
            (GroupKind::Semidirect, Coords::Pair(_, _)) => true,
            (GroupKind::EuclideanRd(d), Coords::VecN(v)) => v.len() == *d,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::kind_mismatch(self, "incompatible coordinate layout"))
        }
    }
}

/// Element of the Lie algebra of its kind, in fixed coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    kind: GroupKind,
    coords: Coords,
}

/// Element of the dual algebra, same coordinate layout as
/// [`AlgebraElement`]; the pairing is the coordinate dot product, so `flat`
/// and `sharp` are coordinate-identities that only switch the type.
#[derive(Debug, Clone, PartialEq)]
pub struct Covector {
    kind: GroupKind,
    coords: Coords,
}

macro_rules! coords_value_impl {
    ($ty:ident) => {
        impl $ty {
            pub fn new(kind: GroupKind, coords: Coords) -> Result<Self> {
                kind.check_coords(&coords)?;
                Ok(Self { kind, coords })
            }

            pub(crate) fn raw(kind: GroupKind, coords: Coords) -> Self {
                Self { kind, coords }
            }

            pub fn zero(kind: GroupKind) -> Self {
                let coords = match &kind {
                    GroupKind::UnitQuaternion | GroupKind::SO3 => Coords::Vec3(Vector3::zeros()),
                    GroupKind::GLplus3 | GroupKind::SL3 => Coords::Mat3(Matrix3::zeros()),
                    GroupKind::Semidirect => Coords::Pair(Matrix3::zeros(), Matrix3::zeros()),
                    GroupKind::EuclideanRd(d) => Coords::VecN(DVector::zeros(*d)),
                };
                Self { kind, coords }
            }

            pub fn kind(&self) -> &GroupKind {
                &self.kind
            }

            pub fn coords(&self) -> &Coords {
                &self.coords
            }

            pub fn norm(&self) -> f64 {
                self.coords.norm()
            }

            /// `self + s * other`.
            pub fn add_scaled(&self, s: f64, other: &Self) -> Result<Self> {
                if self.kind != other.kind {
                    return Err(Error::kind_mismatch(&self.kind, &other.kind));
                }
                Ok(Self {
                    kind: self.kind.clone(),
                    coords: self.coords.axpy(s, &other.coords)?,
                })
            }

            pub fn add(&self, other: &Self) -> Result<Self> {
                self.add_scaled(1.0, other)
            }

            pub fn sub(&self, other: &Self) -> Result<Self> {
                self.add_scaled(-1.0, other)
            }

            pub fn scale(&self, s: f64) -> Self {
                Self {
                    kind: self.kind.clone(),
                    coords: self.coords.scale(s),
                }
            }

            pub fn neg(&self) -> Self {
                self.scale(-1.0)
            }
        }
    };
}

coords_value_impl!(AlgebraElement);
coords_value_impl!(Covector);

impl AlgebraElement {
    pub fn vec3(kind: GroupKind, v: Vector3<f64>) -> Result<Self> {
        Self::new(kind, Coords::Vec3(v))
    }

    pub fn mat3(kind: GroupKind, m: Matrix3<f64>) -> Result<Self> {
        Self::new(kind, Coords::Mat3(m))
    }

    pub fn pair(xi: Matrix3<f64>, mu: Matrix3<f64>) -> Self {
        Self::raw(GroupKind::Semidirect, Coords::Pair(xi, mu))
    }

    pub fn flat_vec(v: DVector<f64>) -> Self {
        let d = v.len();
        Self::raw(GroupKind::EuclideanRd(d), Coords::VecN(v))
    }

    /// Lower the index: same coordinates, dual type.
    pub fn to_covector(&self) -> Covector {
        Covector::raw(self.kind.clone(), self.coords.clone())
    }
}

impl Covector {
    pub fn vec3(kind: GroupKind, v: Vector3<f64>) -> Result<Self> {
        Self::new(kind, Coords::Vec3(v))
    }

    pub fn mat_pair(gamma1: Matrix3<f64>, gamma2: Matrix3<f64>) -> Self {
        Self::raw(GroupKind::Semidirect, Coords::Pair(gamma1, gamma2))
    }

    /// Raise the index: same coordinates, primal type.
    pub fn to_algebra(&self) -> AlgebraElement {
        AlgebraElement::raw(self.kind.clone(), self.coords.clone())
    }

    /// Duality pairing `<mu, xi>`.
    pub fn pair_with(&self, xi: &AlgebraElement) -> Result<f64> {
        if self.kind != xi.kind {
            return Err(Error::kind_mismatch(&self.kind, &xi.kind));
        }
        self.coords.dot(&xi.coords)
    }
}

/// Group element in its natural matrix/quaternion representation.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupRepr {
    /// Unit quaternion, scalar first.
    Quat(Vector4<f64>),
    /// Rotation matrix.
    Rot(Matrix3<f64>),
    /// Invertible matrix (GL+ or SL).
    Mat(Matrix3<f64>),
    /// (configuration, momentum) pair of the semidirect group.
    PhasePair(Matrix3<f64>, Matrix3<f64>),
    /// Point of flat R^d.
    Flat(DVector<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    kind: GroupKind,
    repr: GroupRepr,
}

impl GroupElement {
    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn repr(&self) -> &GroupRepr {
        &self.repr
    }

    pub fn identity(kind: GroupKind) -> Self {
        let repr = match &kind {
            GroupKind::UnitQuaternion => GroupRepr::Quat(quat::identity()),
            GroupKind::SO3 => GroupRepr::Rot(Matrix3::identity()),
            GroupKind::GLplus3 | GroupKind::SL3 => GroupRepr::Mat(Matrix3::identity()),
            GroupKind::Semidirect => GroupRepr::PhasePair(Matrix3::identity(), Matrix3::zeros()),
            GroupKind::EuclideanRd(d) => GroupRepr::Flat(DVector::zeros(*d)),
        };
        GroupElement { kind, repr }
    }

    pub fn quaternion(q: Vector4<f64>) -> Result<Self> {
        if (q.norm() - 1.0).abs() > MEMBERSHIP_TOL {
            return Err(Error::Degenerate {
                op: "GroupElement::quaternion",
                detail: format!("|q| = {:.12} is not 1", q.norm()),
            });
        }
        Ok(GroupElement {
            kind: GroupKind::UnitQuaternion,
            repr: GroupRepr::Quat(quat::normalize(&q)?),
        })
    }

    pub fn rotation(r: Matrix3<f64>) -> Result<Self> {
        let defect = (r * r.transpose() - Matrix3::identity()).norm();
        if defect > MEMBERSHIP_TOL || (r.determinant() - 1.0).abs() > MEMBERSHIP_TOL {
            return Err(Error::Degenerate {
                op: "GroupElement::rotation",
                detail: format!("orthogonality defect {defect:.3e}"),
            });
        }
        Ok(GroupElement {
            kind: GroupKind::SO3,
            repr: GroupRepr::Rot(r),
        })
    }

    pub fn gl_plus(m: Matrix3<f64>) -> Result<Self> {
        if m.determinant() <= 0.0 || !m.determinant().is_finite() {
            return Err(Error::Degenerate {
                op: "GroupElement::gl_plus",
                detail: format!("det = {:.6e} must be positive", m.determinant()),
            });
        }
        Ok(GroupElement {
            kind: GroupKind::GLplus3,
            repr: GroupRepr::Mat(m),
        })
    }

    pub fn sl(m: Matrix3<f64>) -> Result<Self> {
        if (m.determinant() - 1.0).abs() > MEMBERSHIP_TOL {
            return Err(Error::Degenerate {
                op: "GroupElement::sl",
                detail: format!("det = {:.12} must be 1", m.determinant()),
            });
        }
        Ok(GroupElement {
            kind: GroupKind::SL3,
            repr: GroupRepr::Mat(m),
        })
    }

    pub fn phase_pair(f: Matrix3<f64>, p: Matrix3<f64>) -> Result<Self> {
        if f.determinant() <= 0.0 || !f.determinant().is_finite() {
            return Err(Error::Degenerate {
                op: "GroupElement::phase_pair",
                detail: format!("det F = {:.6e} must be positive", f.determinant()),
            });
        }
        Ok(GroupElement {
            kind: GroupKind::Semidirect,
            repr: GroupRepr::PhasePair(f, p),
        })
    }

    pub fn euclidean(v: DVector<f64>) -> Self {
        let d = v.len();
        GroupElement {
            kind: GroupKind::EuclideanRd(d),
            repr: GroupRepr::Flat(v),
        }
    }

    pub fn as_quaternion(&self) -> Result<&Vector4<f64>> {
        match &self.repr {
            GroupRepr::Quat(q) => Ok(q),
            _ => Err(Error::kind_mismatch("UnitQuaternion", &self.kind)),
        }
    }

    pub fn as_matrix(&self) -> Result<&Matrix3<f64>> {
        match &self.repr {
            GroupRepr::Rot(m) | GroupRepr::Mat(m) => Ok(m),
            _ => Err(Error::kind_mismatch("matrix kind", &self.kind)),
        }
    }

    pub fn as_phase_pair(&self) -> Result<(&Matrix3<f64>, &Matrix3<f64>)> {
        match &self.repr {
            GroupRepr::PhasePair(f, p) => Ok((f, p)),
            _ => Err(Error::kind_mismatch("Semidirect", &self.kind)),
        }
    }

    pub fn as_flat(&self) -> Result<&DVector<f64>> {
        match &self.repr {
            GroupRepr::Flat(v) => Ok(v),
            _ => Err(Error::kind_mismatch("EuclideanRd", &self.kind)),
        }
    }

    /// All representation entries as a flat vector (for error norms and CSV
    /// output).
    pub fn flatten(&self) -> Vec<f64> {
        match &self.repr {
            GroupRepr::Quat(q) => q.iter().copied().collect(),
            GroupRepr::Rot(m) | GroupRepr::Mat(m) => m.iter().copied().collect(),
            GroupRepr::PhasePair(f, p) => f.iter().chain(p.iter()).copied().collect(),
            GroupRepr::Flat(v) => v.iter().copied().collect(),
        }
    }

    /// Euclidean distance between representations. Quaternions are compared
    /// up to the double-cover sign.
    pub fn distance(&self, other: &GroupElement) -> Result<f64> {
        if self.kind != other.kind {
            return Err(Error::kind_mismatch(&self.kind, &other.kind));
        }
        if let (GroupRepr::Quat(a), GroupRepr::Quat(b)) = (&self.repr, &other.repr) {
            return Ok((a - b).norm().min((a + b).norm()));
        }
        let a = self.flatten();
        let b = other.flatten();
        Ok(a.iter()
            .zip(&b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt())
    }

    /// Re-check the defining constraints of the kind (unit norm, det > 0,
    /// orthogonality, ...) against `tol`.
    pub fn membership_defect(&self) -> f64 {
        match &self.repr {
            GroupRepr::Quat(q) => (q.norm() - 1.0).abs(),
            GroupRepr::Rot(r) => (r * r.transpose() - Matrix3::identity()).norm(),
            GroupRepr::Mat(m) => match self.kind {
                GroupKind::SL3 => (m.determinant() - 1.0).abs(),
                _ => {
                    if m.determinant() > 0.0 {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                }
            },
            GroupRepr::PhasePair(f, _) => {
                if f.determinant() > 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            GroupRepr::Flat(_) => 0.0,
        }
    }
}

fn check_same_kind(a: &GroupKind, b: &GroupKind) -> Result<()> {
    if a != b {
        return Err(Error::kind_mismatch(a, b));
    }
    Ok(())
}

/// Group product `a . b`. Quaternion results are renormalized so trajectories
/// cannot drift off the unit sphere.
pub fn compose(a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
    check_same_kind(&a.kind, &b.kind)?;
    let repr = match (&a.repr, &b.repr) {
        (GroupRepr::Quat(p), GroupRepr::Quat(q)) => {
            GroupRepr::Quat(quat::normalize(&quat::mul(p, q))?)
        }
        (GroupRepr::Rot(p), GroupRepr::Rot(q)) => GroupRepr::Rot(p * q),
        (GroupRepr::Mat(p), GroupRepr::Mat(q)) => GroupRepr::Mat(p * q),
        (GroupRepr::PhasePair(f1, p1), GroupRepr::PhasePair(f2, p2)) => {
            let (f, p) = semidirect::compose(&(*f1, *p1), &(*f2, *p2))?;
            GroupRepr::PhasePair(f, p)
        }
        (GroupRepr::Flat(x), GroupRepr::Flat(y)) => GroupRepr::Flat(x + y),
        _ => unreachable!("kind check guarantees matching representations"),
    };
    Ok(GroupElement {
        kind: a.kind.clone(),
        repr,
    })
}

pub fn inverse(a: &GroupElement) -> Result<GroupElement> {
    let repr = match &a.repr {
        GroupRepr::Quat(q) => GroupRepr::Quat(quat::conj(q)),
        GroupRepr::Rot(r) => GroupRepr::Rot(r.transpose()),
        GroupRepr::Mat(m) => {
            GroupRepr::Mat(m.try_inverse().ok_or(Error::Singular("inverse"))?)
        }
        GroupRepr::PhasePair(f, p) => {
            let (fi, pi) = semidirect::inverse(&(*f, *p))?;
            GroupRepr::PhasePair(fi, pi)
        }
        GroupRepr::Flat(v) => GroupRepr::Flat(-v),
    };
    Ok(GroupElement {
        kind: a.kind.clone(),
        repr,
    })
}

/// Group exponential.
pub fn exp(xi: &AlgebraElement) -> Result<GroupElement> {
    let repr = match (&xi.kind, &xi.coords) {
        (GroupKind::UnitQuaternion, Coords::Vec3(v)) => GroupRepr::Quat(quat::exp(v)),
        (GroupKind::SO3, Coords::Vec3(v)) => GroupRepr::Rot(so3::exp(v)),
        (GroupKind::GLplus3 | GroupKind::SL3, Coords::Mat3(m)) => GroupRepr::Mat(gl3::expm(m)),
        (GroupKind::Semidirect, Coords::Pair(x, m)) => {
            let (f, p) = semidirect::exp(&(*x, *m))?;
            GroupRepr::PhasePair(f, p)
        }
        (GroupKind::EuclideanRd(_), Coords::VecN(v)) => GroupRepr::Flat(v.clone()),
        _ => unreachable!("constructor validates layout"),
    };
    Ok(GroupElement {
        kind: xi.kind.clone(),
        repr,
    })
}

/// Principal logarithm.
pub fn log(g: &GroupElement) -> Result<AlgebraElement> {
    let coords = match &g.repr {
        GroupRepr::Quat(q) => Coords::Vec3(quat::log(q)?),
        GroupRepr::Rot(r) => Coords::Vec3(so3::log(r)?),
        GroupRepr::Mat(m) => Coords::Mat3(gl3::logm(m)?),
        GroupRepr::PhasePair(f, p) => {
            let (x, mu) = semidirect::log(&(*f, *p))?;
            Coords::Pair(x, mu)
        }
        GroupRepr::Flat(v) => Coords::VecN(v.clone()),
    };
    Ok(AlgebraElement {
        kind: g.kind.clone(),
        coords,
    })
}

/// Shorthand for `log(v . u^-1)`, the algebra increment from `u` to `v`.
pub fn log_of_quotient(v: &GroupElement, u: &GroupElement) -> Result<AlgebraElement> {
    log(&compose(v, &inverse(u)?)?)
}

/// Right-trivialized differential of `exp`:
/// `d/dt exp(s(t)) = dexp_s(s') . exp(s(t))`.
pub fn dexp(sigma: &AlgebraElement, eta: &AlgebraElement) -> Result<AlgebraElement> {
    check_same_kind(&sigma.kind, &eta.kind)?;
    let coords = match (&sigma.coords, &eta.coords) {
        (Coords::Vec3(s), Coords::Vec3(e)) => Coords::Vec3(match sigma.kind {
            GroupKind::UnitQuaternion => quat::dexp(s, e),
            _ => so3::dexp(s, e),
        }),
        (Coords::Mat3(s), Coords::Mat3(e)) => Coords::Mat3(gl3::dexp(s, e)?),
        (Coords::Pair(s1, s2), Coords::Pair(e1, e2)) => {
            let (a, b) = semidirect::dexp(&(*s1, *s2), &(*e1, *e2))?;
            Coords::Pair(a, b)
        }
        (Coords::VecN(_), Coords::VecN(e)) => Coords::VecN(e.clone()),
        _ => unreachable!(),
    };
    Ok(AlgebraElement {
        kind: sigma.kind.clone(),
        coords,
    })
}

/// Inverse of [`dexp`] in its second argument.
pub fn dexpinv(sigma: &AlgebraElement, eta: &AlgebraElement) -> Result<AlgebraElement> {
    check_same_kind(&sigma.kind, &eta.kind)?;
    let coords = match (&sigma.coords, &eta.coords) {
        (Coords::Vec3(s), Coords::Vec3(e)) => Coords::Vec3(match sigma.kind {
            GroupKind::UnitQuaternion => quat::dexpinv(s, e)?,
            _ => so3::dexpinv(s, e)?,
        }),
        (Coords::Mat3(s), Coords::Mat3(e)) => Coords::Mat3(gl3::dexpinv(s, e)?),
        (Coords::Pair(s1, s2), Coords::Pair(e1, e2)) => {
            let (a, b) = semidirect::dexpinv(&(*s1, *s2), &(*e1, *e2))?;
            Coords::Pair(a, b)
        }
        (Coords::VecN(_), Coords::VecN(e)) => Coords::VecN(e.clone()),
        _ => unreachable!(),
    };
    Ok(AlgebraElement {
        kind: sigma.kind.clone(),
        coords,
    })
}

/// Dual of [`dexp`] under the coordinate pairing:
/// `<dexp_dual(s, mu), eta> = <mu, dexp(s, eta)>`.
pub fn dexp_dual(sigma: &AlgebraElement, mu: &Covector) -> Result<Covector> {
    check_same_kind(&sigma.kind, &mu.kind)?;
    let coords = match (&sigma.coords, &mu.coords) {
        (Coords::Vec3(s), Coords::Vec3(m)) => Coords::Vec3(match sigma.kind {
            GroupKind::UnitQuaternion => quat::dexp_dual(s, m),
            _ => so3::dexp_dual(s, m),
        }),
        (Coords::Mat3(s), Coords::Mat3(m)) => Coords::Mat3(gl3::dexp_dual(s, m)?),
        (Coords::Pair(s1, s2), Coords::Pair(m1, m2)) => {
            let (a, b) = semidirect::dexp_dual(&(*s1, *s2), &(*m1, *m2))?;
            Coords::Pair(a, b)
        }
        (Coords::VecN(_), Coords::VecN(m)) => Coords::VecN(m.clone()),
        _ => unreachable!(),
    };
    Ok(Covector {
        kind: sigma.kind.clone(),
        coords,
    })
}

/// Dual of [`dexpinv`] under the coordinate pairing.
pub fn dexpinv_dual(sigma: &AlgebraElement, mu: &Covector) -> Result<Covector> {
    check_same_kind(&sigma.kind, &mu.kind)?;
    let coords = match (&sigma.coords, &mu.coords) {
        (Coords::Vec3(s), Coords::Vec3(m)) => Coords::Vec3(match sigma.kind {
            GroupKind::UnitQuaternion => quat::dexpinv_dual(s, m)?,
            _ => so3::dexpinv_dual(s, m)?,
        }),
        (Coords::Mat3(s), Coords::Mat3(m)) => Coords::Mat3(gl3::dexpinv_dual(s, m)?),
        (Coords::Pair(s1, s2), Coords::Pair(m1, m2)) => {
            let (a, b) = semidirect::dexpinv_dual(&(*s1, *s2), &(*m1, *m2))?;
            Coords::Pair(a, b)
        }
        (Coords::VecN(_), Coords::VecN(m)) => Coords::VecN(m.clone()),
        _ => unreachable!(),
    };
    Ok(Covector {
        kind: sigma.kind.clone(),
        coords,
    })
}

/// Coadjoint action `<coad(xi, mu), eta> = <mu, [xi, eta]>` for the matrix
/// kinds, where the bracket is the matrix commutator (blockwise for the
/// semidirect algebra).
pub fn coad(xi: &AlgebraElement, mu: &Covector) -> Result<Covector> {
    check_same_kind(&xi.kind, &mu.kind)?;
    let coords = match (&xi.coords, &mu.coords) {
        (Coords::Mat3(x), Coords::Mat3(m)) => Coords::Mat3(gl3::coad(x, m)),
        (Coords::Pair(x1, x2), Coords::Pair(m1, m2)) => {
            let (a, b) = semidirect::coad(&(*x1, *x2), &(*m1, *m2));
            Coords::Pair(a, b)
        }
        _ => {
            return Err(Error::UnsupportedKind {
                op: "coad",
                kind: xi.kind.to_string(),
            })
        }
    };
    Ok(Covector {
        kind: xi.kind.clone(),
        coords,
    })
}

/// Algebra bracket (adjoint action) for every kind.
pub fn bracket(a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
    check_same_kind(&a.kind, &b.kind)?;
    let coords = match (&a.coords, &b.coords) {
        (Coords::Vec3(x), Coords::Vec3(y)) => Coords::Vec3(match a.kind {
            GroupKind::UnitQuaternion => quat::ad(x, y),
            _ => so3::ad(x, y),
        }),
        (Coords::Mat3(x), Coords::Mat3(y)) => Coords::Mat3(gl3::ad(x, y)),
        (Coords::Pair(x1, x2), Coords::Pair(y1, y2)) => {
            let (r1, r2) = semidirect::ad(&(*x1, *x2), &(*y1, *y2));
            Coords::Pair(r1, r2)
        }
        (Coords::VecN(v), Coords::VecN(_)) => Coords::VecN(DVector::zeros(v.len())),
        _ => unreachable!(),
    };
    Ok(AlgebraElement {
        kind: a.kind.clone(),
        coords,
    })
}

/// Skew matrix of a 3-vector (`hat(v) w = v x w`).
pub fn hat(v: &Vector3<f64>) -> Matrix3<f64> {
    quat::hat(v)
}

/// Rotation matrix of a unit quaternion.
pub fn euler_rodriguez(g: &GroupElement) -> Result<Matrix3<f64>> {
    Ok(quat::euler_rodriguez(g.as_quaternion()?))
}
