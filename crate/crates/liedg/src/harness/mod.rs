//! Experiment driver: named problems and methods, trajectory runs with
//! invariant monitoring, convergence studies with slope fitting, and
//! method comparisons. All outputs are plain data structures; the CSV
//! emission in [`csv`] is deterministic so identical specs give
//! byte-identical files.

pub mod csv;
pub mod parse;

use nalgebra::{DVector, Matrix3, Vector3, Vector4};

use crate::discrete_diff::Scheme;
use crate::error::{Error, Result};
use crate::integrator::{
    collocation_step, dg_step, heun_step, sphere_dg_step, CollocationTableau, StepConfig,
};
use crate::lie::GroupElement;
use crate::problems::{PseudoRigidBody, QuaternionAttitude, SphereRigidBody};

/// Gauss nodes used for the averaged stage differentials of the
/// collocation method.
pub const STAGE_QUADRATURE_NODES: usize = 10;
/// Gauss nodes used by the averaged discrete differential.
pub const AVF_NODES: usize = 6;
/// Norm drift beyond which a trajectory is aborted as numerically broken.
/// This is a blow-up guard, far looser than the conservation tolerances
/// the methods actually achieve.
const ABORT_NORM_TOL: f64 = 1e-6;

/// Problems the harness can drive, under their command-line names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemId {
    /// Free rigid body reduced to the momentum sphere.
    SphereRb,
    /// Rigid-body attitude as a unit quaternion.
    QuatRb,
    /// Pseudo-rigid elastic body: deformation gradient plus momentum.
    PseudoRigid,
}

impl ProblemId {
    pub const ALL: [ProblemId; 3] = [
        ProblemId::SphereRb,
        ProblemId::QuatRb,
        ProblemId::PseudoRigid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemId::SphereRb => "sphere-rb",
            ProblemId::QuatRb => "quat-rb",
            ProblemId::PseudoRigid => "pseudo-rigid",
        }
    }
}

impl std::fmt::Display for ProblemId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ProblemId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ProblemId::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown problem `{s}` (expected one of sphere-rb, quat-rb, pseudo-rigid)"
                ))
            })
    }
}

/// Integration methods, under their command-line names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MethodId {
    /// Discrete-gradient step with the midpoint-corrected differential.
    DgGonzalez,
    /// Discrete-gradient step with the averaged differential.
    DgAvf,
    /// Two-stage Gauss collocation (order 4, conservative).
    Colloc4,
    /// Symmetric midpoint comparator: the corrected differential with the
    /// correction coefficient forced to zero (second order, loses exact
    /// conservation).
    SymAlpha0,
    /// Explicit two-stage comparator (order 2, non-conservative).
    Heun,
}

impl MethodId {
    pub const ALL: [MethodId; 5] = [
        MethodId::DgGonzalez,
        MethodId::DgAvf,
        MethodId::Colloc4,
        MethodId::SymAlpha0,
        MethodId::Heun,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MethodId::DgGonzalez => "dg-gonzalez",
            MethodId::DgAvf => "dg-avf",
            MethodId::Colloc4 => "colloc4",
            MethodId::SymAlpha0 => "sym-alpha0",
            MethodId::Heun => "heun",
        }
    }

    /// Which methods run on which problems. The sphere problem has no
    /// group structure for the collocation/explicit steps; the averaged
    /// differential does not apply to the phase-space pair; the
    /// collocation method is wired to the attitude problem only.
    pub fn supports(self, problem: ProblemId) -> bool {
        use MethodId::*;
        use ProblemId::*;
        match problem {
            SphereRb => matches!(self, DgGonzalez | DgAvf),
            QuatRb => matches!(self, DgGonzalez | DgAvf | Colloc4 | Heun),
            PseudoRigid => matches!(self, DgGonzalez | SymAlpha0 | Heun),
        }
    }

    /// Discrete-differential scheme for the methods that take one.
    fn scheme(self) -> Option<Scheme> {
        match self {
            MethodId::DgGonzalez => Some(Scheme::Gonzalez),
            MethodId::DgAvf => Some(Scheme::Avf { nodes: AVF_NODES }),
            MethodId::SymAlpha0 => Some(Scheme::GonzalezAlpha0),
            MethodId::Colloc4 | MethodId::Heun => None,
        }
    }

    /// Asymptotic convergence order (for documentation and reference-step
    /// selection).
    pub fn order(self) -> usize {
        match self {
            MethodId::Colloc4 => 4,
            _ => 2,
        }
    }
}

impl std::fmt::Display for MethodId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for MethodId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        MethodId::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown method `{s}` (expected one of dg-gonzalez, dg-avf, colloc4, sym-alpha0, heun)"
                ))
            })
    }
}

/// A single experiment: problem, method, step size, horizon, solver
/// settings, and optional parameter overrides. The override fields are
/// interpreted per problem; leaving them `None` selects the reference
/// configuration of each problem.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub problem: ProblemId,
    pub method: MethodId,
    pub h: f64,
    pub t_end: f64,
    pub solver_tol: f64,
    pub max_iter: usize,
    /// Diagonal of the inertia-like coefficient: body inertia for the
    /// rigid-body problems, reference inertia for the elastic body.
    pub inertia: Option<Vector3<f64>>,
    /// Elastic moduli `(lambda, mu)`; elastic body only.
    pub lame: Option<(f64, f64)>,
    /// Initial state override: 3 components (sphere momentum), 4
    /// components (attitude quaternion), or 3/9 components (elastic
    /// momentum matrix, diagonal or row-major).
    pub initial_p: Option<Vec<f64>>,
    /// Initial deformation gradient; elastic body only.
    pub initial_f: Option<Matrix3<f64>>,
}

impl ExperimentSpec {
    pub fn new(problem: ProblemId, method: MethodId, h: f64, t_end: f64) -> Self {
        ExperimentSpec {
            problem,
            method,
            h,
            t_end,
            solver_tol: 1e-14,
            max_iter: 2000,
            inertia: None,
            lame: None,
            initial_p: None,
            initial_f: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.h.is_finite() || self.h <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "step size must be a positive real, got {}",
                self.h
            )));
        }
        if !self.t_end.is_finite() || self.t_end < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "t_end must be a nonnegative real, got {}",
                self.t_end
            )));
        }
        if !self.solver_tol.is_finite() || self.solver_tol <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "solver tolerance must be a positive real, got {}",
                self.solver_tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig(
                "solver iteration budget must be at least 1".into(),
            ));
        }
        if !self.method.supports(self.problem) {
            return Err(Error::InvalidConfig(format!(
                "method {} does not apply to problem {}",
                self.method, self.problem
            )));
        }
        if self.problem != ProblemId::PseudoRigid
            && (self.lame.is_some() || self.initial_f.is_some())
        {
            return Err(Error::InvalidConfig(format!(
                "--lame/--f0 only apply to pseudo-rigid, not {}",
                self.problem
            )));
        }
        Ok(())
    }

    fn step_config(&self) -> StepConfig {
        let mut cfg = StepConfig::new(self.h);
        if let Some(scheme) = self.method.scheme() {
            cfg = cfg.with_scheme(scheme);
        }
        cfg.solver_tol = self.solver_tol;
        cfg.max_iter = self.max_iter;
        cfg
    }
}

/// State of a running trajectory: an ambient point for the sphere, a
/// group element otherwise.
#[derive(Debug, Clone)]
pub enum State {
    Point(DVector<f64>),
    Group(GroupElement),
}

/// A problem instantiated from an [`ExperimentSpec`].
pub enum ProblemInstance {
    Sphere(SphereRigidBody),
    Quat(QuaternionAttitude),
    PseudoRigid(PseudoRigidBody),
}

impl ProblemInstance {
    /// Build the problem and its initial state, applying any parameter
    /// overrides carried by the experiment description.
    pub fn build(spec: &ExperimentSpec) -> Result<(Self, State)> {
        match spec.problem {
            ProblemId::SphereRb => {
                let body = match spec.inertia {
                    Some(d) => SphereRigidBody::new(d)?,
                    None => SphereRigidBody::reference(),
                };
                let p = match &spec.initial_p {
                    Some(v) => {
                        if v.len() != 3 {
                            return Err(Error::InvalidConfig(format!(
                                "sphere initial state needs 3 components, got {}",
                                v.len()
                            )));
                        }
                        let p = DVector::from_column_slice(v);
                        let n = p.norm();
                        if !(n.is_finite() && n > 1e-12) {
                            return Err(Error::InvalidConfig(
                                "sphere initial state must be a nonzero vector".into(),
                            ));
                        }
                        // tolerate non-unit input: direction is the datum
                        p / n
                    }
                    None => SphereRigidBody::default_initial(),
                };
                Ok((ProblemInstance::Sphere(body), State::Point(p)))
            }
            ProblemId::QuatRb => {
                let body = match spec.inertia {
                    Some(d) => {
                        // keep the reference body velocity; the spatial
                        // momentum scales with the inertia override
                        let v0 = Vector3::new(1.0, 0.5, -1.0);
                        QuaternionAttitude::new(d, d.component_mul(&v0))?
                    }
                    None => QuaternionAttitude::reference(),
                };
                let q = match &spec.initial_p {
                    Some(v) => {
                        if v.len() != 4 {
                            return Err(Error::InvalidConfig(format!(
                                "attitude initial state needs 4 quaternion components, got {}",
                                v.len()
                            )));
                        }
                        let q = Vector4::new(v[0], v[1], v[2], v[3]);
                        let n = q.norm();
                        if !(n.is_finite() && n > 1e-12) {
                            return Err(Error::InvalidConfig(
                                "attitude initial state must be a nonzero quaternion".into(),
                            ));
                        }
                        GroupElement::quaternion(q / n)?
                    }
                    None => QuaternionAttitude::default_initial(),
                };
                Ok((ProblemInstance::Quat(body), State::Group(q)))
            }
            ProblemId::PseudoRigid => {
                let (lambda, mu) = spec.lame.unwrap_or((1.0 / 3.0, 1.0));
                let e = spec.inertia.unwrap_or_else(|| Vector3::new(1.0, 2.0, 3.0));
                let body = PseudoRigidBody::new(lambda, mu, e)?;
                let default = PseudoRigidBody::default_initial();
                let (df, dp) = default
                    .as_phase_pair()
                    .expect("default elastic state is a phase pair");
                let f0 = spec.initial_f.unwrap_or(*df);
                let p0 = match &spec.initial_p {
                    Some(v) => matrix_from_components(v, "elastic initial momentum")?,
                    None => *dp,
                };
                let x0 = GroupElement::phase_pair(f0, p0)?;
                body.check_initial(&x0)?;
                Ok((ProblemInstance::PseudoRigid(body), State::Group(x0)))
            }
        }
    }

    pub fn energy(&self, state: &State) -> Result<f64> {
        match (self, state) {
            (ProblemInstance::Sphere(b), State::Point(p)) => Ok(b.energy(p)),
            (ProblemInstance::Quat(b), State::Group(g)) => b.energy(g),
            (ProblemInstance::PseudoRigid(b), State::Group(g)) => b.energy(g),
            _ => Err(Error::InvalidConfig(
                "state does not match the problem".into(),
            )),
        }
    }

    /// The per-problem scalar invariant recorded alongside each step:
    /// `|p|` (sphere), `|q|` (attitude), `det F` (elastic body).
    pub fn invariant(&self, state: &State) -> Result<f64> {
        match (self, state) {
            (ProblemInstance::Sphere(_), State::Point(p)) => Ok(p.norm()),
            (ProblemInstance::Quat(_), State::Group(g)) => Ok(g.as_quaternion()?.norm()),
            (ProblemInstance::PseudoRigid(_), State::Group(g)) => {
                Ok(g.as_phase_pair()?.0.determinant())
            }
            _ => Err(Error::InvalidConfig(
                "state does not match the problem".into(),
            )),
        }
    }

    /// Flattened state in the order documented by the CSV header.
    pub fn flat_state(&self, state: &State) -> Vec<f64> {
        match state {
            State::Point(p) => p.iter().copied().collect(),
            State::Group(g) => match g.as_phase_pair() {
                Ok((f, p)) => {
                    // row-major to match the F11..F33, P11..P33 header
                    let mut out = Vec::with_capacity(18);
                    for r in 0..3 {
                        for c in 0..3 {
                            out.push(f[(r, c)]);
                        }
                    }
                    for r in 0..3 {
                        for c in 0..3 {
                            out.push(p[(r, c)]);
                        }
                    }
                    out
                }
                Err(_) => g.flatten(),
            },
        }
    }

    fn advance(&self, method: MethodId, cfg: &StepConfig, state: &State) -> Result<State> {
        match (self, state) {
            (ProblemInstance::Sphere(b), State::Point(p)) => {
                let (q, _) = sphere_dg_step(b, cfg, p)?;
                Ok(State::Point(q))
            }
            (ProblemInstance::Quat(b), State::Group(g)) => Ok(State::Group(match method {
                MethodId::DgGonzalez | MethodId::DgAvf => dg_step(b, cfg, g)?.state,
                MethodId::Colloc4 => {
                    let tableau = CollocationTableau::gauss(2)?;
                    collocation_step(b, &tableau, STAGE_QUADRATURE_NODES, cfg, g)?.state
                }
                MethodId::Heun => heun_step(b, cfg.h, g)?,
                MethodId::SymAlpha0 => {
                    return Err(Error::InvalidConfig(
                        "sym-alpha0 does not apply to quat-rb".into(),
                    ))
                }
            })),
            (ProblemInstance::PseudoRigid(b), State::Group(g)) => {
                Ok(State::Group(match method {
                    MethodId::DgGonzalez | MethodId::SymAlpha0 => dg_step(b, cfg, g)?.state,
                    MethodId::Heun => heun_step(b, cfg.h, g)?,
                    _ => {
                        return Err(Error::InvalidConfig(format!(
                            "method {method} does not apply to pseudo-rigid"
                        )))
                    }
                }))
            }
            _ => Err(Error::InvalidConfig(
                "state does not match the problem".into(),
            )),
        }
    }

    fn check_invariant(&self, value: f64, energy: f64) -> Result<()> {
        if !energy.is_finite() {
            return Err(Error::Degenerate {
                op: "trajectory",
                detail: format!("energy became non-finite ({energy})"),
            });
        }
        match self {
            ProblemInstance::Sphere(_) | ProblemInstance::Quat(_) => {
                if !value.is_finite() || (value - 1.0).abs() > ABORT_NORM_TOL {
                    return Err(Error::Degenerate {
                        op: "group constraint",
                        detail: format!("state norm drifted to {value:.12}"),
                    });
                }
            }
            ProblemInstance::PseudoRigid(_) => {
                if !value.is_finite() || value <= 0.0 {
                    return Err(Error::Degenerate {
                        op: "group constraint",
                        detail: format!("det F = {value:.6e} is not positive"),
                    });
                }
            }
        }
        Ok(())
    }
}

fn matrix_from_components(v: &[f64], what: &str) -> Result<Matrix3<f64>> {
    match v.len() {
        3 => Ok(Matrix3::from_diagonal(&Vector3::new(v[0], v[1], v[2]))),
        9 => Ok(Matrix3::from_row_slice(v)),
        n => Err(Error::InvalidConfig(format!(
            "{what} needs 3 (diagonal) or 9 (row-major) components, got {n}"
        ))),
    }
}

/// One emitted trajectory row.
#[derive(Debug, Clone)]
pub struct StepRecord {
    /// Time `i * h` of the record.
    pub t: f64,
    /// Flattened state; layout documented by the CSV header.
    pub state: Vec<f64>,
    /// Conserved quantity at this state.
    pub energy: f64,
    /// `energy - energy(initial state)`.
    pub energy_err: f64,
    /// Per-problem invariant: `|p|`, `|q|`, or `det F`.
    pub invariant: f64,
}

/// A full trajectory run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub problem: ProblemId,
    pub method: MethodId,
    pub records: Vec<StepRecord>,
}

impl Trajectory {
    pub fn max_abs_energy_err(&self) -> f64 {
        self.records
            .iter()
            .map(|r| r.energy_err.abs())
            .fold(0.0, f64::max)
    }
}

/// Run `round(t_end / h)` steps from the problem's initial state and
/// record time, state, energy, energy error, and the group invariant at
/// every step (plus the initial record). A step that fails — solver
/// breakdown or a violated group constraint — aborts the run with the
/// 1-based step index in the error.
pub fn run_trajectory(spec: &ExperimentSpec) -> Result<Trajectory> {
    spec.validate()?;
    let (instance, mut state) = ProblemInstance::build(spec)?;
    let cfg = spec.step_config();
    let n = if spec.t_end == 0.0 {
        0
    } else {
        (spec.t_end / spec.h).round() as usize
    };

    let energy0 = instance.energy(&state)?;
    let mut records = Vec::with_capacity(n + 1);
    records.push(StepRecord {
        t: 0.0,
        state: instance.flat_state(&state),
        energy: energy0,
        energy_err: 0.0,
        invariant: instance.invariant(&state)?,
    });

    for i in 1..=n {
        let step_err = |source: Error| Error::StepFailed {
            step: i,
            source: Box::new(source),
        };
        state = instance.advance(spec.method, &cfg, &state).map_err(step_err)?;
        let energy = instance.energy(&state).map_err(step_err)?;
        let invariant = instance.invariant(&state).map_err(step_err)?;
        instance.check_invariant(invariant, energy).map_err(step_err)?;
        records.push(StepRecord {
            t: i as f64 * spec.h,
            state: instance.flat_state(&state),
            energy,
            energy_err: energy - energy0,
            invariant,
        });
    }

    Ok(Trajectory {
        problem: spec.problem,
        method: spec.method,
        records,
    })
}

/// A convergence study: the base experiment repeated over a decreasing
/// list of step sizes, compared against a reference run at `t_end`.
#[derive(Debug, Clone)]
pub struct ConvergenceSpec {
    /// Problem, method, horizon, tolerances, and parameter overrides.
    /// The base `h` is ignored; the rows come from `h_list`.
    pub base: ExperimentSpec,
    /// Strictly decreasing step sizes, at least four of them.
    pub h_list: Vec<f64>,
    /// Reference method; defaults to the order-4 collocation where the
    /// problem supports it and to the studied method otherwise.
    pub reference_method: Option<MethodId>,
    /// Reference step; defaults to `min(h_list) / 8`.
    pub reference_h: Option<f64>,
}

impl ConvergenceSpec {
    pub fn new(base: ExperimentSpec, h_list: Vec<f64>) -> Self {
        ConvergenceSpec {
            base,
            h_list,
            reference_method: None,
            reference_h: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.h_list.len() < 4 {
            return Err(Error::InvalidConfig(format!(
                "a convergence study needs at least 4 step sizes, got {}",
                self.h_list.len()
            )));
        }
        for pair in self.h_list.windows(2) {
            if !(pair[1] < pair[0]) {
                return Err(Error::InvalidConfig(
                    "step sizes must be strictly decreasing".into(),
                ));
            }
        }
        if self
            .h_list
            .iter()
            .any(|h| !h.is_finite() || *h <= 0.0)
        {
            return Err(Error::InvalidConfig(
                "step sizes must be positive reals".into(),
            ));
        }
        let mut probe = self.base.clone();
        probe.h = self.h_list[0];
        probe.validate()?;
        if let Some(m) = self.reference_method {
            if !m.supports(self.base.problem) {
                return Err(Error::InvalidConfig(format!(
                    "reference method {m} does not apply to problem {}",
                    self.base.problem
                )));
            }
        }
        if let Some(h) = self.reference_h {
            if !h.is_finite() || h <= 0.0 {
                return Err(Error::InvalidConfig(
                    "reference step must be a positive real".into(),
                ));
            }
        }
        Ok(())
    }

    fn resolved_reference(&self) -> (MethodId, f64) {
        let method = self.reference_method.unwrap_or({
            if MethodId::Colloc4.supports(self.base.problem) {
                MethodId::Colloc4
            } else {
                self.base.method
            }
        });
        let h = self
            .reference_h
            .unwrap_or_else(|| self.h_list.last().copied().unwrap_or(1.0) / 8.0);
        (method, h)
    }
}

#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub h: f64,
    /// Euclidean norm of the flattened state difference at `t_end`.
    pub global_error: f64,
}

#[derive(Debug, Clone)]
pub struct ConvergenceStudy {
    pub problem: ProblemId,
    pub method: MethodId,
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares slope of `ln(error)` against `ln(h)` over the rows
    /// with a positive error; `NaN` when fewer than two such rows exist.
    pub slope: f64,
}

/// Run the study: a reference trajectory, one run per step size, the
/// terminal-state error of each, and the fitted log-log slope.
pub fn convergence_study(spec: &ConvergenceSpec) -> Result<ConvergenceStudy> {
    spec.validate()?;
    let (ref_method, ref_h) = spec.resolved_reference();
    let mut ref_spec = spec.base.clone();
    ref_spec.method = ref_method;
    ref_spec.h = ref_h;
    let reference = run_trajectory(&ref_spec)?;
    let ref_final = &reference
        .records
        .last()
        .expect("a trajectory always has the initial record")
        .state;

    let mut rows = Vec::with_capacity(spec.h_list.len());
    for &h in &spec.h_list {
        let mut run_spec = spec.base.clone();
        run_spec.h = h;
        let traj = run_trajectory(&run_spec)?;
        let state = &traj
            .records
            .last()
            .expect("a trajectory always has the initial record")
            .state;
        let global_error = l2_difference(state, ref_final);
        rows.push(ConvergenceRow { h, global_error });
    }

    let slope = log_log_slope(&rows);
    Ok(ConvergenceStudy {
        problem: spec.base.problem,
        method: spec.base.method,
        rows,
        slope,
    })
}

fn l2_difference(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn log_log_slope(rows: &[ConvergenceRow]) -> f64 {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.global_error.is_finite() && r.global_error > 0.0)
        .map(|r| (r.h.ln(), r.global_error.ln()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    sxy / sxx
}

/// Several methods on the same problem, step size, and horizon.
#[derive(Debug, Clone)]
pub struct CompareSpec {
    /// Shared problem, step, horizon, tolerances, and overrides; the
    /// base method is ignored.
    pub base: ExperimentSpec,
    pub methods: Vec<MethodId>,
}

/// Side-by-side energy-error columns on a common time grid.
#[derive(Debug, Clone)]
pub struct CompareTable {
    pub problem: ProblemId,
    pub methods: Vec<MethodId>,
    pub t: Vec<f64>,
    /// `energy_err[m][i]` is method `m`'s energy error at `t[i]`.
    pub energy_err: Vec<Vec<f64>>,
    /// For the elastic body with both the conservative and the
    /// zero-correction midpoint method present: `det F` of the latter
    /// minus `det F` of the former, per row.
    pub det_diff: Option<Vec<f64>>,
}

/// Run each method and collect their energy errors on the shared grid.
pub fn compare_methods(spec: &CompareSpec) -> Result<CompareTable> {
    if spec.methods.is_empty() {
        return Err(Error::InvalidConfig(
            "compare needs at least one method".into(),
        ));
    }
    let mut trajectories = Vec::with_capacity(spec.methods.len());
    for &m in &spec.methods {
        let mut run_spec = spec.base.clone();
        run_spec.method = m;
        trajectories.push(run_trajectory(&run_spec)?);
    }

    let t: Vec<f64> = trajectories[0].records.iter().map(|r| r.t).collect();
    for traj in &trajectories[1..] {
        let same = traj.records.len() == t.len()
            && traj.records.iter().zip(&t).all(|(r, &ti)| r.t == ti);
        if !same {
            return Err(Error::InvalidConfig(
                "method runs produced mismatched time grids".into(),
            ));
        }
    }

    let energy_err: Vec<Vec<f64>> = trajectories
        .iter()
        .map(|traj| traj.records.iter().map(|r| r.energy_err).collect())
        .collect();

    let det_diff = if spec.base.problem == ProblemId::PseudoRigid {
        let ep = spec.methods.iter().position(|&m| m == MethodId::DgGonzalez);
        let sym = spec.methods.iter().position(|&m| m == MethodId::SymAlpha0);
        match (ep, sym) {
            (Some(ep), Some(sym)) => Some(
                trajectories[sym]
                    .records
                    .iter()
                    .zip(&trajectories[ep].records)
                    .map(|(s, e)| s.invariant - e.invariant)
                    .collect(),
            ),
            _ => None,
        }
    } else {
        None
    };

    Ok(CompareTable {
        problem: spec.base.problem,
        methods: spec.methods.clone(),
        t,
        energy_err,
        det_diff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_spec(problem: ProblemId, method: MethodId, h: f64, t_end: f64) -> ExperimentSpec {
        ExperimentSpec::new(problem, method, h, t_end)
    }

    #[test]
    fn zero_horizon_gives_a_single_initial_record() {
        let spec = quick_spec(ProblemId::SphereRb, MethodId::DgGonzalez, 0.05, 0.0);
        let traj = run_trajectory(&spec).unwrap();
        assert_eq!(traj.records.len(), 1);
        assert_eq!(traj.records[0].t, 0.0);
        assert_eq!(traj.records[0].energy_err, 0.0);
    }

    #[test]
    fn record_grid_is_the_expected_length() {
        let spec = quick_spec(ProblemId::QuatRb, MethodId::Heun, 1.0 / 16.0, 1.0);
        let traj = run_trajectory(&spec).unwrap();
        assert_eq!(traj.records.len(), 17);
        assert_eq!(traj.records[16].t, 1.0);
        assert_eq!(traj.records[3].t, 3.0 / 16.0);
    }

    #[test]
    fn sphere_trajectory_conserves_energy_and_norm() {
        let spec = quick_spec(ProblemId::SphereRb, MethodId::DgGonzalez, 0.05, 10.0);
        let traj = run_trajectory(&spec).unwrap();
        assert_eq!(traj.records.len(), 201);
        assert!(traj.max_abs_energy_err() < 1e-12);
        for r in &traj.records {
            assert!((r.invariant - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn unsupported_combinations_are_rejected() {
        for (p, m) in [
            (ProblemId::SphereRb, MethodId::Colloc4),
            (ProblemId::SphereRb, MethodId::Heun),
            (ProblemId::SphereRb, MethodId::SymAlpha0),
            (ProblemId::QuatRb, MethodId::SymAlpha0),
            (ProblemId::PseudoRigid, MethodId::DgAvf),
            (ProblemId::PseudoRigid, MethodId::Colloc4),
        ] {
            let err = run_trajectory(&quick_spec(p, m, 0.05, 1.0)).unwrap_err();
            assert!(
                matches!(err, Error::InvalidConfig(_)),
                "{p}/{m} gave {err:?}"
            );
        }
    }

    #[test]
    fn solver_breakdown_reports_the_step_index() {
        // a hopeless step size on the stiff attitude problem
        let mut spec = quick_spec(ProblemId::QuatRb, MethodId::DgGonzalez, 32.0, 64.0);
        spec.max_iter = 30;
        let err = run_trajectory(&spec).unwrap_err();
        match err {
            Error::StepFailed { step, source } => {
                assert_eq!(step, 1);
                assert!(matches!(*source, Error::NoConvergence { .. }));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn elastic_heun_run_drifts_visibly_while_the_conservative_run_stays_flat() {
        let heun = run_trajectory(&quick_spec(
            ProblemId::PseudoRigid,
            MethodId::Heun,
            1.0 / 32.0,
            500.0,
        ))
        .unwrap();
        assert!(heun.max_abs_energy_err() > 1e-3);

        let dg = run_trajectory(&quick_spec(
            ProblemId::PseudoRigid,
            MethodId::DgGonzalez,
            1.0 / 16.0,
            10.0,
        ))
        .unwrap();
        assert!(dg.max_abs_energy_err() < 1e-12);
    }

    #[test]
    fn parameter_overrides_reach_the_problem() {
        let mut spec = quick_spec(ProblemId::SphereRb, MethodId::DgGonzalez, 0.05, 0.0);
        spec.inertia = Some(Vector3::new(2.0, 3.0, 4.0));
        spec.initial_p = Some(vec![0.0, 0.6, 0.8]);
        let traj = run_trajectory(&spec).unwrap();
        let r = &traj.records[0];
        // H = 0.5 (0.36/3 + 0.64/4) = 0.14
        assert!((r.energy - 0.14).abs() < 1e-15);
        assert_eq!(r.state, vec![0.0, 0.6, 0.8]);

        let mut spec = quick_spec(ProblemId::PseudoRigid, MethodId::DgGonzalez, 0.05, 0.0);
        spec.lame = Some((0.5, 2.0));
        spec.initial_f = Some(Matrix3::from_diagonal(&Vector3::new(1.1, 1.0, 0.95)));
        spec.initial_p = Some(vec![0.1, 0.2, 0.3]);
        let traj = run_trajectory(&spec).unwrap();
        assert!(traj.records[0].energy > 0.0);
        assert!((traj.records[0].invariant - 1.1 * 0.95).abs() < 1e-12);
    }

    #[test]
    fn misplaced_overrides_are_rejected() {
        let mut spec = quick_spec(ProblemId::QuatRb, MethodId::DgGonzalez, 0.05, 1.0);
        spec.lame = Some((1.0, 1.0));
        assert!(matches!(
            run_trajectory(&spec).unwrap_err(),
            Error::InvalidConfig(_)
        ));

        let mut spec = quick_spec(ProblemId::SphereRb, MethodId::DgGonzalez, 0.05, 1.0);
        spec.initial_p = Some(vec![1.0, 0.0]);
        assert!(matches!(
            run_trajectory(&spec).unwrap_err(),
            Error::InvalidConfig(_)
        ));
    }

    #[test]
    fn convergence_study_with_itself_as_reference_has_a_zero_row() {
        let base = quick_spec(ProblemId::QuatRb, MethodId::DgGonzalez, 0.0, 0.5);
        let mut spec = ConvergenceSpec::new(
            base,
            vec![1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0],
        );
        spec.reference_method = Some(MethodId::DgGonzalez);
        spec.reference_h = Some(1.0 / 64.0);
        let study = convergence_study(&spec).unwrap();
        assert_eq!(study.rows.len(), 4);
        assert_eq!(study.rows[3].global_error, 0.0);
        assert!(study.rows[0].global_error > 0.0);
    }

    #[test]
    fn attitude_slopes_match_the_method_orders() {
        // The reference body carries a fast precession (~25 rad/s), so the
        // asymptotic regime only starts once a step resolves it; the
        // windows below sit past that knee.
        let base = quick_spec(ProblemId::QuatRb, MethodId::DgGonzalez, 0.0, 1.0);
        let h_list: Vec<f64> = (6..=9).map(|k| 0.5_f64.powi(k)).collect();
        let study = convergence_study(&ConvergenceSpec::new(base, h_list)).unwrap();
        assert!(
            (study.slope - 2.0).abs() < 0.2,
            "midpoint-corrected slope {}",
            study.slope
        );

        let base = quick_spec(ProblemId::QuatRb, MethodId::Colloc4, 0.0, 1.0);
        let h_list: Vec<f64> = (5..=8).map(|k| 0.5_f64.powi(k)).collect();
        let study = convergence_study(&ConvergenceSpec::new(base, h_list)).unwrap();
        assert!(
            (study.slope - 4.0).abs() < 0.2,
            "collocation slope {}",
            study.slope
        );
    }

    #[test]
    fn sphere_study_self_references_cleanly() {
        let base = quick_spec(ProblemId::SphereRb, MethodId::DgGonzalez, 0.0, 1.0);
        let spec = ConvergenceSpec::new(base, vec![0.2, 0.1, 0.05, 0.025]);
        let (m, h) = spec.resolved_reference();
        assert_eq!(m, MethodId::DgGonzalez);
        assert!((h - 0.025 / 8.0).abs() < 1e-15);
        let study = convergence_study(&spec).unwrap();
        assert!(
            (study.slope - 2.0).abs() < 0.2,
            "sphere slope {}",
            study.slope
        );
    }

    #[test]
    fn short_h_lists_are_rejected() {
        let base = quick_spec(ProblemId::QuatRb, MethodId::DgGonzalez, 0.0, 0.5);
        let spec = ConvergenceSpec::new(base.clone(), vec![0.1, 0.05, 0.025]);
        assert!(matches!(
            convergence_study(&spec).unwrap_err(),
            Error::InvalidConfig(_)
        ));
        let spec = ConvergenceSpec::new(base, vec![0.1, 0.1, 0.05, 0.025]);
        assert!(matches!(
            convergence_study(&spec).unwrap_err(),
            Error::InvalidConfig(_)
        ));
    }

    #[test]
    fn comparing_a_method_with_itself_gives_identical_columns() {
        let base = quick_spec(ProblemId::QuatRb, MethodId::DgGonzalez, 1.0 / 32.0, 2.0);
        let table = compare_methods(&CompareSpec {
            base,
            methods: vec![MethodId::DgGonzalez, MethodId::DgGonzalez],
        })
        .unwrap();
        assert_eq!(table.energy_err[0], table.energy_err[1]);
        assert!(table.det_diff.is_none());
        assert_eq!(table.t.len(), 65);
    }

    #[test]
    fn elastic_comparison_separates_the_conservative_method() {
        let base = quick_spec(ProblemId::PseudoRigid, MethodId::DgGonzalez, 1.0 / 16.0, 25.0);
        let table = compare_methods(&CompareSpec {
            base,
            methods: vec![MethodId::DgGonzalez, MethodId::SymAlpha0],
        })
        .unwrap();
        let max_ep = table.energy_err[0]
            .iter()
            .fold(0.0_f64, |a, &b| a.max(b.abs()));
        let max_sym = table.energy_err[1]
            .iter()
            .fold(0.0_f64, |a, &b| a.max(b.abs()));
        assert!(max_ep < 1e-11, "conservative drift {max_ep:.3e}");
        assert!(
            max_sym > 1e-8 && max_sym < 1e-2,
            "comparator drift {max_sym:.3e}"
        );

        let det = table.det_diff.as_ref().expect("elastic pair present");
        assert_eq!(det[0], 0.0);
        assert!(det.iter().all(|d| d.is_finite()));
    }
}
