//! One-step integrators built around discrete differentials.
//!
//! The group-side step solves
//!
//! ```text
//! x1 = exp(h F(x0, x1)) . x0,    F(u, v) = omega(u,v) -| dbar(u, v)
//! ```
//!
//! by fixed-point iteration on the algebra increment. Because the
//! increment is the contraction of the discrete differential with a skew
//! bivector, the chain rule turns the energy change per step into
//! `h . omega(dbar, dbar) = 0`: the integral is conserved to solver
//! accuracy, independent of the step size.
//!
//! The sphere-side step does the same thing in a retraction chart centered
//! between the endpoints, and an explicit two-stage comparison method
//! ([`heun_step`]) is included for the non-conservative baseline.

use nalgebra::{DVector, Vector3};

use crate::bivector::{SphereBivector, TrivializedBivector};
use crate::discrete_diff::{FirstIntegral, Scheme, SphereIntegral};
use crate::error::{Error, Result};
use crate::lie::{self, AlgebraElement, Covector, GroupElement, GroupKind};
use crate::manifold::UnitSphere;

pub mod collocation;
pub mod solver;

pub use collocation::{collocation_step, CollocationTableau};
pub use solver::{fixed_point_solve, fixed_point_solve_damped, SolveReport};

/// Step parameters shared by every implicit method.
#[derive(Debug, Clone)]
pub struct StepConfig {
    /// Step size (may be negative; the adjoint tests rely on that).
    pub h: f64,
    /// Which discrete differential the step uses.
    pub scheme: Scheme,
    /// Fixed-point tolerance on the increment update.
    pub solver_tol: f64,
    /// Fixed-point iteration budget.
    pub max_iter: usize,
}

impl StepConfig {
    pub fn new(h: f64) -> Self {
        StepConfig {
            h,
            scheme: Scheme::default(),
            solver_tol: 1e-14,
            max_iter: 2000,
        }
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    /// Same configuration with the step reversed (for adjoint checks).
    pub fn reversed(&self) -> Self {
        let mut c = self.clone();
        c.h = -c.h;
        c
    }
}

/// A Hamiltonian-type problem posed on one of the supported groups: a
/// conserved integral plus the skew structure that turns its differential
/// into motion.
pub trait DgProblem: Send + Sync {
    fn kind(&self) -> &GroupKind;

    fn integral(&self) -> &FirstIntegral;

    /// Trivialized skew bivector anchored at `x`; the collocation stages
    /// and the default field evaluation use it pointwise.
    fn bivector_at(&self, x: &GroupElement) -> Result<TrivializedBivector>;

    /// Bivector the one-step scheme uses for the endpoint pair `(u, v)`.
    /// The default anchors it at the geodesic midpoint, which keeps the
    /// step symmetric; problems with a constant structure override this
    /// only implicitly (the anchor does not matter for them).
    fn pair_bivector(&self, u: &GroupElement, v: &GroupElement) -> Result<TrivializedBivector> {
        let eta = lie::log_of_quotient(v, u)?;
        let c = lie::compose(&lie::exp(&eta.scale(0.5))?, u)?;
        self.bivector_at(&c)
    }

    /// Discrete differential for the endpoint pair. The default delegates
    /// to the generic constructions on the problem's integral; problems
    /// whose structure calls for a hand-assembled covector override this.
    fn discrete_differential(
        &self,
        scheme: &Scheme,
        u: &GroupElement,
        v: &GroupElement,
    ) -> Result<Covector> {
        scheme.evaluate(self.integral(), u, v)
    }

    /// Right-trivialized vector field. The default contracts the exact
    /// differential with the pointwise bivector.
    fn field(&self, x: &GroupElement) -> Result<AlgebraElement> {
        let omega = self.bivector_at(x)?;
        omega.contract(&self.integral().trivialized_differential(x)?)
    }
}

/// Result of one implicit step.
#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub state: GroupElement,
    pub report: SolveReport,
}

/// One step of the discrete-gradient method on a group.
pub fn dg_step(
    problem: &dyn DgProblem,
    cfg: &StepConfig,
    x0: &GroupElement,
) -> Result<StepOutcome> {
    if x0.kind() != problem.kind() {
        return Err(Error::kind_mismatch(problem.kind(), x0.kind()));
    }
    let h = cfg.h;
    let initial = problem.field(x0)?.scale(h);
    let map = |z: &AlgebraElement| -> Result<AlgebraElement> {
        let x1 = lie::compose(&lie::exp(z)?, x0)?;
        let dbar = problem.discrete_differential(&cfg.scheme, x0, &x1)?;
        let omega = problem.pair_bivector(x0, &x1)?;
        Ok(omega.contract(&dbar)?.scale(h))
    };
    let (z, report) = fixed_point_solve_damped(
        "discrete-gradient step",
        initial,
        map,
        |a, b| a.sub(b).map(|d| d.norm()).unwrap_or(f64::INFINITY),
        |a, b, t| {
            a.scale(1.0 - t)
                .add(&b.scale(t))
                .expect("iterates share the problem kind")
        },
        cfg.solver_tol,
        cfg.max_iter,
    )?;
    Ok(StepOutcome {
        state: lie::compose(&lie::exp(&z)?, x0)?,
        report,
    })
}

/// One step of the explicit two-stage (trapezoidal) method: the standard
/// non-conservative, second-order baseline. `k1 = f(x)`,
/// `k2 = f(exp(h k1) x)`, `x' = exp(h (k1 + k2)/2) x`.
pub fn heun_step(problem: &dyn DgProblem, h: f64, x0: &GroupElement) -> Result<GroupElement> {
    let k1 = problem.field(x0)?;
    let trial = lie::compose(&lie::exp(&k1.scale(h))?, x0)?;
    let k2 = problem.field(&trial)?;
    let incr = k1.add(&k2)?.scale(0.5 * h);
    lie::compose(&lie::exp(&incr)?, x0)
}

// --- sphere side -------------------------------------------------------

/// A conservative problem on the unit 2-sphere in R^3, with the skew
/// structure given by a cross product against a pair-dependent anchor.
pub trait SphereDgProblem: Send + Sync {
    fn sphere(&self) -> &UnitSphere;

    fn integral(&self) -> &SphereIntegral;

    /// Anchor of the two-point bivector; the default is the (unnormalized)
    /// chord midpoint, which is what makes the step both symmetric and
    /// norm-compatible with the chart at `center(p, q)`.
    fn pair_anchor(&self, p: &DVector<f64>, q: &DVector<f64>) -> Vector3<f64> {
        Vector3::new(
            0.5 * (p[0] + q[0]),
            0.5 * (p[1] + q[1]),
            0.5 * (p[2] + q[2]),
        )
    }

    /// Tangent vector field at `p`.
    fn field(&self, p: &DVector<f64>) -> DVector<f64> {
        let anchor = self.pair_anchor(p, p);
        let omega = SphereBivector::new(anchor);
        let grad = self.integral().ambient_gradient(p);
        let g = Vector3::new(grad[0], grad[1], grad[2]);
        let v = omega.contract(&g);
        DVector::from_column_slice(v.as_slice())
    }
}

/// One step of the discrete-gradient method on the sphere: solves
///
/// ```text
/// q = retract_c( retract_c^-1(p) + h * anchor x dbar(p, q) ),   c = center(p, q)
/// ```
///
/// by fixed-point iteration on `q`. The update stays in the chart's
/// tangent space, so the new point is unit-norm by construction, and the
/// chart chain rule kills the energy change exactly.
pub fn sphere_dg_step(
    problem: &dyn SphereDgProblem,
    cfg: &StepConfig,
    p: &DVector<f64>,
) -> Result<(DVector<f64>, SolveReport)> {
    let sphere = problem.sphere();
    if sphere.ambient_dim() != 3 {
        return Err(Error::UnsupportedKind {
            op: "sphere discrete-gradient step",
            kind: format!("S^{} in R^{}", sphere.ambient_dim() - 1, sphere.ambient_dim()),
        });
    }
    sphere.check_point(p)?;
    let h = cfg.h;
    let f0 = problem.field(p);
    let initial = sphere.retract(p, &(&f0 * h))?;
    let map = |q: &DVector<f64>| -> Result<DVector<f64>> {
        let c = sphere.center(p, q)?;
        let dbar = cfg
            .scheme
            .evaluate_sphere(problem.integral(), sphere, p, q, &c)?;
        let omega = SphereBivector::new(problem.pair_anchor(p, q));
        let incr = omega.contract(&Vector3::new(dbar[0], dbar[1], dbar[2]));
        let w = sphere.retract_inverse(&c, p)?
            + DVector::from_column_slice(incr.as_slice()) * h;
        sphere.retract(&c, &w)
    };
    let (q, report) = fixed_point_solve(
        "sphere discrete-gradient step",
        initial,
        map,
        |a, b| (a - b).norm(),
        cfg.solver_tol,
        cfg.max_iter,
    )?;
    Ok((q, report))
}
