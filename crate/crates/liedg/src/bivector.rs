//! Trivialized Poisson bivectors, represented by their contraction map.
//!
//! A bivector at a point is used through one operation only: contracting a
//! covector into an algebra element, `mu -> W(mu, .)`. The two-form value
//! is recovered as `W(alpha, beta) = <beta, contract(alpha)>`. Skewness
//! (`W(mu, mu) = 0`) is what makes the one-step maps built on these objects
//! conserve energy, so every constructor here guarantees it structurally.

use std::sync::Arc;

use nalgebra::{DMatrix, Vector3};

use crate::error::{Error, Result};
use crate::lie::{AlgebraElement, Covector, GroupKind};

type ContractFn = dyn Fn(&Covector) -> Result<AlgebraElement> + Send + Sync;

/// A bivector on the trivialized phase space of one group kind.
#[derive(Clone)]
pub struct TrivializedBivector {
    kind: GroupKind,
    contract: Arc<ContractFn>,
}

impl std::fmt::Debug for TrivializedBivector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TrivializedBivector")
            .field("kind", &self.kind)
            .finish_non_exhaustive()
    }
}

impl TrivializedBivector {
    pub fn from_contraction(
        kind: GroupKind,
        contract: impl Fn(&Covector) -> Result<AlgebraElement> + Send + Sync + 'static,
    ) -> Self {
        TrivializedBivector {
            kind,
            contract: Arc::new(contract),
        }
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    /// `mu -> W(mu, .)` as an algebra element.
    pub fn contract(&self, mu: &Covector) -> Result<AlgebraElement> {
        if mu.kind() != &self.kind {
            return Err(Error::kind_mismatch(&self.kind, mu.kind()));
        }
        (self.contract)(mu)
    }

    /// Two-form value `W(alpha, beta) = <beta, contract(alpha)>`.
    pub fn apply(&self, alpha: &Covector, beta: &Covector) -> Result<f64> {
        beta.pair_with(&self.contract(alpha)?)
    }

    /// Rank-two bivector `(f, gamma) -> (f ^ gamma)/|gamma|^2` that couples
    /// a vector field direction with an energy gradient:
    ///
    /// ```text
    /// contract(mu) = ( <gamma, mu> f - <f~, mu> gamma# ) / |gamma|^2,
    /// ```
    ///
    /// which is skew by construction and reproduces `f` from `gamma`
    /// whenever `<gamma, f> = 0` (the hallmark of a conservative pair).
    pub fn rank_two(field: AlgebraElement, gradient: Covector) -> Result<Self> {
        if field.kind() != gradient.kind() {
            return Err(Error::kind_mismatch(field.kind(), gradient.kind()));
        }
        let g2 = gradient.norm().powi(2);
        if g2 < 1e-28 {
            return Err(Error::Degenerate {
                op: "rank-two bivector",
                detail: "gradient vanishes; the direction is undetermined".into(),
            });
        }
        let kind = field.kind().clone();
        let grad_sharp = gradient.to_algebra();
        let field_flat = field.to_covector();
        Ok(Self::from_contraction(kind, move |mu| {
            let a = gradient.pair_with(&mu.to_algebra())? / g2;
            let b = field_flat.pair_with(&mu.to_algebra())? / g2;
            field.scale(a).add_scaled(-b, &grad_sharp)
        }))
    }

    /// Canonical structure on the phase-space pair group: covector blocks
    /// `(a, b)` contract to the algebra pair `(b, -a)`.
    pub fn darboux() -> Self {
        Self::from_contraction(GroupKind::Semidirect, |mu| {
            let (a, b) = mu
                .coords()
                .as_pair()
                .expect("semidirect covectors carry pair coordinates");
            Ok(AlgebraElement::pair(*b, -*a))
        })
    }

    /// Constant-coefficient bivector on flat `R^d` given by a skew matrix.
    pub fn from_skew_matrix(s: DMatrix<f64>) -> Result<Self> {
        if s.nrows() != s.ncols() {
            return Err(Error::InvalidConfig("bivector matrix must be square".into()));
        }
        if (&s + s.transpose()).norm() > 1e-12 * (1.0 + s.norm()) {
            return Err(Error::InvalidConfig(
                "bivector matrix must be skew-symmetric".into(),
            ));
        }
        let d = s.nrows();
        Ok(Self::from_contraction(
            GroupKind::EuclideanRd(d),
            move |mu| {
                let v = mu
                    .coords()
                    .as_vecn()
                    .expect("flat covectors carry vector coordinates");
                Ok(AlgebraElement::flat_vec(&s * v))
            },
        ))
    }
}

/// Bivector on the tangent spaces of the momentum sphere in `R^3`:
/// `contract(mu) = m x mu` for an anchor vector `m` (the midpoint of the
/// step endpoints, not normalized).
#[derive(Debug, Clone)]
pub struct SphereBivector {
    anchor: Vector3<f64>,
}

impl SphereBivector {
    pub fn new(anchor: Vector3<f64>) -> Self {
        SphereBivector { anchor }
    }

    pub fn anchor(&self) -> &Vector3<f64> {
        &self.anchor
    }

    pub fn contract(&self, mu: &Vector3<f64>) -> Vector3<f64> {
        self.anchor.cross(mu)
    }

    pub fn apply(&self, alpha: &Vector3<f64>, beta: &Vector3<f64>) -> f64 {
        beta.dot(&self.contract(alpha))
    }
}
