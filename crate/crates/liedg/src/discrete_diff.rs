//! Discrete differentials of first integrals.
//!
//! A discrete differential is a two-point covector `dbar(u, v)` satisfying
//! the exact chain rule
//!
//! ```text
//! H(v) - H(u) = < dbar(u, v), log(v . u^-1) >
//! ```
//!
//! and the consistency condition `dbar(x, x) = R_x* dH_x`. Two
//! constructions are provided on groups, plus their counterparts in a
//! retraction chart of the sphere:
//!
//! * **averaged** (`ddiff_avf`): average the trivialized differential along
//!   the connecting one-parameter curve `l(s) = exp(s eta) . u`. Because
//!   `dexp_{s eta}(eta) = eta`, the plain average already satisfies the
//!   chain rule up to quadrature error, and relabeling `l(1-s)` shows it is
//!   symmetric in `u, v`.
//! * **midpoint-corrected** (`ddiff_gonzalez`): evaluate the trivialized
//!   differential at `c = exp(eta/2) . u` and add the rank-one correction
//!   along `eta` that enforces the chain rule exactly.

use std::sync::Arc;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::lie::{self, AlgebraElement, Covector, GroupElement, GroupKind};
use crate::manifold::UnitSphere;
use crate::quadrature;

/// Coincident-endpoint threshold: below this increment norm the corrected
/// forms return the exact differential (their removable-singularity limit).
const COINCIDENT_TOL: f64 = 1e-28; // on |eta|^2

type EvalFn = dyn Fn(&GroupElement) -> Result<f64> + Send + Sync;
type DiffFn = dyn Fn(&GroupElement) -> Result<Covector> + Send + Sync;

/// A conserved quantity together with its right-trivialized differential
/// `x -> R_x* dH_x`.
#[derive(Clone)]
pub struct FirstIntegral {
    kind: GroupKind,
    eval: Arc<EvalFn>,
    diff: Arc<DiffFn>,
}

impl std::fmt::Debug for FirstIntegral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FirstIntegral")
            .field("kind", &self.kind)
            .finish_non_exhaustive()
    }
}

impl FirstIntegral {
    pub fn new(
        kind: GroupKind,
        eval: impl Fn(&GroupElement) -> Result<f64> + Send + Sync + 'static,
        trivialized_differential: impl Fn(&GroupElement) -> Result<Covector> + Send + Sync + 'static,
    ) -> Self {
        FirstIntegral {
            kind,
            eval: Arc::new(eval),
            diff: Arc::new(trivialized_differential),
        }
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn eval(&self, x: &GroupElement) -> Result<f64> {
        if x.kind() != &self.kind {
            return Err(Error::kind_mismatch(&self.kind, x.kind()));
        }
        (self.eval)(x)
    }

    /// `R_x* dH_x`, the exact differential pulled back to the algebra dual.
    pub fn trivialized_differential(&self, x: &GroupElement) -> Result<Covector> {
        if x.kind() != &self.kind {
            return Err(Error::kind_mismatch(&self.kind, x.kind()));
        }
        (self.diff)(x)
    }
}

/// Which discrete differential a step uses.
#[derive(Debug, Clone, PartialEq)]
pub enum Scheme {
    /// Midpoint value plus the chain-rule-enforcing correction.
    Gonzalez,
    /// Midpoint value without the correction: still symmetric, no longer
    /// exactly conservative (the comparison scheme).
    GonzalezAlpha0,
    /// Average along the connecting curve, Gauss quadrature with `nodes`
    /// points.
    Avf { nodes: usize },
}

impl Default for Scheme {
    fn default() -> Self {
        Scheme::Gonzalez
    }
}

impl Scheme {
    pub fn evaluate(
        &self,
        h: &FirstIntegral,
        u: &GroupElement,
        v: &GroupElement,
    ) -> Result<Covector> {
        match self {
            Scheme::Gonzalez => ddiff_gonzalez(h, u, v),
            Scheme::GonzalezAlpha0 => ddiff_gonzalez_alpha0(h, u, v),
            Scheme::Avf { nodes } => ddiff_avf(h, u, v, *nodes),
        }
    }

    /// Same dispatch for an integral on the sphere, in the chart at `c`.
    pub fn evaluate_sphere(
        &self,
        h: &SphereIntegral,
        sphere: &UnitSphere,
        p: &DVector<f64>,
        q: &DVector<f64>,
        c: &DVector<f64>,
    ) -> Result<DVector<f64>> {
        match self {
            Scheme::Gonzalez => sphere_ddiff_gonzalez(h, sphere, p, q, c),
            Scheme::GonzalezAlpha0 => sphere_ddiff_gonzalez_alpha0(h, sphere, p, q, c),
            Scheme::Avf { nodes } => sphere_ddiff_avf(h, sphere, p, q, c, *nodes),
        }
    }
}

/// The rank-one chain-rule correction shared by every midpoint scheme:
/// given a base covector `gamma` and the increment `eta`, returns
/// `gamma + alpha * eta` with `alpha = (dH - <gamma, eta>)/|eta|^2`, so
/// that `<result, eta> = dH` exactly. Coincident endpoints return `gamma`.
pub fn chain_rule_correction(
    delta_h: f64,
    gamma: &Covector,
    eta: &AlgebraElement,
) -> Result<Covector> {
    let n2 = eta.norm().powi(2);
    if n2 < COINCIDENT_TOL {
        return Ok(gamma.clone());
    }
    let alpha = (delta_h - gamma.pair_with(eta)?) / n2;
    gamma.add_scaled(alpha, &eta.to_covector())
}

/// Midpoint-corrected discrete differential:
/// `gamma = R*dH at exp(eta/2).u`, then the chain-rule correction.
pub fn ddiff_gonzalez(h: &FirstIntegral, u: &GroupElement, v: &GroupElement) -> Result<Covector> {
    let eta = lie::log_of_quotient(v, u)?;
    let c = lie::compose(&lie::exp(&eta.scale(0.5))?, u)?;
    let gamma = h.trivialized_differential(&c)?;
    chain_rule_correction(h.eval(v)? - h.eval(u)?, &gamma, &eta)
}

/// The uncorrected midpoint value: symmetric but only approximately
/// conservative (used by the comparison scheme).
pub fn ddiff_gonzalez_alpha0(
    h: &FirstIntegral,
    u: &GroupElement,
    v: &GroupElement,
) -> Result<Covector> {
    let eta = lie::log_of_quotient(v, u)?;
    let c = lie::compose(&lie::exp(&eta.scale(0.5))?, u)?;
    h.trivialized_differential(&c)
}

/// Averaged discrete differential: Gauss quadrature of `R*dH` along
/// `l(s) = exp(s eta) . u`. Exactly symmetric (the node set is symmetric
/// under `s -> 1-s`) and satisfies the chain rule to quadrature accuracy
/// because `dexp_{s eta}(eta) = eta`.
pub fn ddiff_avf(
    h: &FirstIntegral,
    u: &GroupElement,
    v: &GroupElement,
    nodes: usize,
) -> Result<Covector> {
    let rule = quadrature::gauss_legendre(nodes)?;
    let eta = lie::log_of_quotient(v, u)?;
    let mut acc = Covector::zero(u.kind().clone());
    for (&s, &w) in rule.nodes.iter().zip(&rule.weights) {
        let x = lie::compose(&lie::exp(&eta.scale(s))?, u)?;
        acc = acc.add_scaled(w, &h.trivialized_differential(&x)?)?;
    }
    Ok(acc)
}

// --- sphere counterparts ----------------------------------------------------

type SphereEvalFn = dyn Fn(&DVector<f64>) -> f64 + Send + Sync;
type SphereGradFn = dyn Fn(&DVector<f64>) -> DVector<f64> + Send + Sync;

/// First integral on the sphere, given by its value and ambient gradient.
#[derive(Clone)]
pub struct SphereIntegral {
    eval: Arc<SphereEvalFn>,
    grad: Arc<SphereGradFn>,
}

impl std::fmt::Debug for SphereIntegral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SphereIntegral").finish_non_exhaustive()
    }
}

impl SphereIntegral {
    pub fn new(
        eval: impl Fn(&DVector<f64>) -> f64 + Send + Sync + 'static,
        ambient_gradient: impl Fn(&DVector<f64>) -> DVector<f64> + Send + Sync + 'static,
    ) -> Self {
        SphereIntegral {
            eval: Arc::new(eval),
            grad: Arc::new(ambient_gradient),
        }
    }

    pub fn eval(&self, p: &DVector<f64>) -> f64 {
        (self.eval)(p)
    }

    pub fn ambient_gradient(&self, p: &DVector<f64>) -> DVector<f64> {
        (self.grad)(p)
    }

    /// Gradient of `H . retract_c` at the chart point `u`, i.e. the ambient
    /// gradient pulled back through the (self-adjoint) tangent map.
    pub fn chart_gradient(
        &self,
        sphere: &UnitSphere,
        c: &DVector<f64>,
        u: &DVector<f64>,
    ) -> Result<DVector<f64>> {
        let map = sphere.tangent_map(c, u)?;
        Ok(map.apply_adjoint(&self.ambient_gradient(map.image_point())))
    }
}

/// Midpoint-corrected discrete differential in the chart at `c`: the value
/// lives in the tangent space of `c` and satisfies the chart chain rule
/// `H(q) - H(p) = <result, retract_c^-1(q) - retract_c^-1(p)>` exactly.
pub fn sphere_ddiff_gonzalez(
    h: &SphereIntegral,
    sphere: &UnitSphere,
    p: &DVector<f64>,
    q: &DVector<f64>,
    c: &DVector<f64>,
) -> Result<DVector<f64>> {
    let a = sphere.retract_inverse(c, p)?;
    let b = sphere.retract_inverse(c, q)?;
    let eta = &b - &a;
    let mid = (&a + &b) * 0.5;
    let gamma = h.chart_gradient(sphere, c, &mid)?;
    let n2 = eta.norm_squared();
    if n2 < COINCIDENT_TOL {
        return Ok(gamma);
    }
    let alpha = (h.eval(q) - h.eval(p) - gamma.dot(&eta)) / n2;
    Ok(gamma + eta * alpha)
}

/// Uncorrected chart-midpoint value (symmetric comparison scheme).
pub fn sphere_ddiff_gonzalez_alpha0(
    h: &SphereIntegral,
    sphere: &UnitSphere,
    p: &DVector<f64>,
    q: &DVector<f64>,
    c: &DVector<f64>,
) -> Result<DVector<f64>> {
    let a = sphere.retract_inverse(c, p)?;
    let b = sphere.retract_inverse(c, q)?;
    h.chart_gradient(sphere, c, &((&a + &b) * 0.5))
}

/// Averaged discrete differential in the chart at `c`: Gauss quadrature of
/// the pulled-back gradient along the chart chord from `p` to `q`.
pub fn sphere_ddiff_avf(
    h: &SphereIntegral,
    sphere: &UnitSphere,
    p: &DVector<f64>,
    q: &DVector<f64>,
    c: &DVector<f64>,
    nodes: usize,
) -> Result<DVector<f64>> {
    let rule = quadrature::gauss_legendre(nodes)?;
    let a = sphere.retract_inverse(c, p)?;
    let b = sphere.retract_inverse(c, q)?;
    let mut acc = DVector::zeros(sphere.ambient_dim());
    for (&s, &w) in rule.nodes.iter().zip(&rule.weights) {
        let u = &a * (1.0 - s) + &b * s;
        acc += h.chart_gradient(sphere, c, &u)? * w;
    }
    Ok(acc)
}
