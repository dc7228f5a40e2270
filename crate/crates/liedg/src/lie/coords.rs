use nalgebra::{DVector, Matrix3, Vector3};

use crate::error::{Error, Result};

/// Raw coordinates of an algebra element or covector in the fixed basis of
/// its kind.
///
/// The inner product is the Euclidean dot for vector layouts and the
/// Frobenius product for matrix layouts; `Pair` is the orthogonal direct sum
/// of two matrix blocks. All duality pairings in the crate reduce to
/// [`Coords::dot`], so raising/lowering indices is the identity on
/// coordinates.
#[derive(Debug, Clone, PartialEq)]
pub enum Coords {
    /// R^3 (so(3) and the imaginary quaternions).
    Vec3(Vector3<f64>),
    /// Full 3x3 matrix (gl(3), sl(3)).
    Mat3(Matrix3<f64>),
    /// Block pair (xi, mu) for the semidirect algebra gl(3) x gl(3)*.
    Pair(Matrix3<f64>, Matrix3<f64>),
    /// R^d for the flat (Euclidean) degenerate case.
    VecN(DVector<f64>),
}

impl Coords {
    pub fn dim(&self) -> usize {
        match self {
            Coords::Vec3(_) => 3,
            Coords::Mat3(_) => 9,
            Coords::Pair(_, _) => 18,
            Coords::VecN(v) => v.len(),
        }
    }

    pub fn zero_like(&self) -> Coords {
        match self {
            Coords::Vec3(_) => Coords::Vec3(Vector3::zeros()),
            Coords::Mat3(_) => Coords::Mat3(Matrix3::zeros()),
            Coords::Pair(_, _) => Coords::Pair(Matrix3::zeros(), Matrix3::zeros()),
            Coords::VecN(v) => Coords::VecN(DVector::zeros(v.len())),
        }
    }

    fn layout_name(&self) -> &'static str {
        match self {
            Coords::Vec3(_) => "Vec3",
            Coords::Mat3(_) => "Mat3",
            Coords::Pair(_, _) => "Pair",
            Coords::VecN(_) => "VecN",
        }
    }

    fn check_same_layout(&self, other: &Coords) -> Result<()> {
        let ok = match (self, other) {
            (Coords::Vec3(_), Coords::Vec3(_)) => true,
            (Coords::Mat3(_), Coords::Mat3(_)) => true,
            (Coords::Pair(_, _), Coords::Pair(_, _)) => true,
            (Coords::VecN(a), Coords::VecN(b)) => a.len() == b.len(),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::kind_mismatch(self.layout_name(), other.layout_name()))
        }
    }

    /// Componentwise `self + s * other`. The workhorse of every solver and
    /// quadrature loop.
    pub fn axpy(&self, s: f64, other: &Coords) -> Result<Coords> {
        self.check_same_layout(other)?;
        Ok(match (self, other) {
            (Coords::Vec3(a), Coords::Vec3(b)) => Coords::Vec3(a + s * b),
            (Coords::Mat3(a), Coords::Mat3(b)) => Coords::Mat3(a + s * b),
            (Coords::Pair(a1, a2), Coords::Pair(b1, b2)) => {
                Coords::Pair(a1 + s * b1, a2 + s * b2)
            }
            (Coords::VecN(a), Coords::VecN(b)) => Coords::VecN(a + s * b),
            _ => unreachable!(),
        })
    }

    pub fn add(&self, other: &Coords) -> Result<Coords> {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &Coords) -> Result<Coords> {
        self.axpy(-1.0, other)
    }

    pub fn scale(&self, s: f64) -> Coords {
        match self {
            Coords::Vec3(a) => Coords::Vec3(a * s),
            Coords::Mat3(a) => Coords::Mat3(a * s),
            Coords::Pair(a1, a2) => Coords::Pair(a1 * s, a2 * s),
            Coords::VecN(a) => Coords::VecN(a * s),
        }
    }

    pub fn neg(&self) -> Coords {
        self.scale(-1.0)
    }

    /// Euclidean/Frobenius inner product.
    pub fn dot(&self, other: &Coords) -> Result<f64> {
        self.check_same_layout(other)?;
        Ok(match (self, other) {
            (Coords::Vec3(a), Coords::Vec3(b)) => a.dot(b),
            (Coords::Mat3(a), Coords::Mat3(b)) => (a.transpose() * b).trace(),
            (Coords::Pair(a1, a2), Coords::Pair(b1, b2)) => {
                (a1.transpose() * b1).trace() + (a2.transpose() * b2).trace()
            }
            (Coords::VecN(a), Coords::VecN(b)) => a.dot(b),
            _ => unreachable!(),
        })
    }

    pub fn norm(&self) -> f64 {
        match self {
            Coords::Vec3(a) => a.norm(),
            Coords::Mat3(a) => a.norm(),
            Coords::Pair(a1, a2) => (a1.norm_squared() + a2.norm_squared()).sqrt(),
            Coords::VecN(a) => a.norm(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.flatten().iter().all(|x| x.is_finite())
    }

    pub fn flatten(&self) -> Vec<f64> {
        match self {
            Coords::Vec3(a) => a.iter().copied().collect(),
            Coords::Mat3(a) => a.iter().copied().collect(),
            Coords::Pair(a1, a2) => a1.iter().chain(a2.iter()).copied().collect(),
            Coords::VecN(a) => a.iter().copied().collect(),
        }
    }

    pub fn as_vec3(&self) -> Result<&Vector3<f64>> {
        match self {
            Coords::Vec3(v) => Ok(v),
            other => Err(Error::kind_mismatch("Vec3", other.layout_name())),
        }
    }

    pub fn as_mat3(&self) -> Result<&Matrix3<f64>> {
        match self {
            Coords::Mat3(m) => Ok(m),
            other => Err(Error::kind_mismatch("Mat3", other.layout_name())),
        }
    }

    pub fn as_pair(&self) -> Result<(&Matrix3<f64>, &Matrix3<f64>)> {
        match self {
            Coords::Pair(a, b) => Ok((a, b)),
            other => Err(Error::kind_mismatch("Pair", other.layout_name())),
        }
    }

    pub fn as_vecn(&self) -> Result<&DVector<f64>> {
        match self {
            Coords::VecN(v) => Ok(v),
            other => Err(Error::kind_mismatch("VecN", other.layout_name())),
        }
    }
}
