//! Conservative collocation: the higher-order family.
//!
//! The step transports a polynomial `sigma(t)` in the algebra,
//! `sigma(t h) = h sum_j A_j(t) K_j` with `A_j(t) = int_0^t l_j`, through
//! the exponential: stage points are `X_j = exp(sigma(c_j h)) x0` and the
//! update is `x1 = exp(sigma(h)) x0`. Instead of the field at the stage
//! points (which would be the classical collocation method), each stage
//! uses a *stage differential*
//!
//! ```text
//! dbar_j = dexpinv*_{sigma_j} ( (1/b_j) sum_q w_q l_j(s_q) dexp*_{sigma(s_q h)} mu(s_q) )
//! ```
//!
//! — a weighted average of the trivialized differential along the whole
//! curve, pulled back to the stage. Contracting with the skew bivector and
//! mapping through `dexpinv` gives the slopes `K_j`. Summing the chain
//! rule over the quadrature nodes telescopes the total energy change into
//! `h sum_j b_j omega_j(dbar_j, dbar_j) = 0`, so the integral is conserved
//! to solver-plus-quadrature accuracy while the endpoint keeps the order
//! `2s` superconvergence of Gauss collocation.

use crate::error::{Error, Result};
use crate::integrator::solver::fixed_point_solve_damped;
use crate::integrator::{DgProblem, StepConfig, StepOutcome};
use crate::lie::{self, AlgebraElement, Covector, GroupElement};
use crate::quadrature;

/// Collocation data at Gauss nodes: interpolation nodes `c`, integrated
/// Lagrange coefficients `a[j][k] = int_0^{c_j} l_k`, endpoint weights
/// `b[j] = int_0^1 l_j`, and the Lagrange basis itself in monomial form.
#[derive(Debug, Clone)]
pub struct CollocationTableau {
    c: Vec<f64>,
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    /// `poly[j][m]` is the coefficient of `t^m` in `l_j(t)`.
    poly: Vec<Vec<f64>>,
}

impl CollocationTableau {
    /// Tableau at the `stages`-point Gauss nodes (order `2 stages`).
    pub fn gauss(stages: usize) -> Result<Self> {
        if !(1..=5).contains(&stages) {
            return Err(Error::InvalidConfig(format!(
                "stage count {stages} outside the supported range 1..=5"
            )));
        }
        let rule = quadrature::gauss_legendre(stages)?;
        let c = rule.nodes.clone();

        // monomial coefficients of each Lagrange basis polynomial
        let mut poly = Vec::with_capacity(stages);
        for j in 0..stages {
            let mut coeffs = vec![1.0_f64];
            for (k, &ck) in c.iter().enumerate() {
                if k == j {
                    continue;
                }
                let denom = c[j] - ck;
                // multiply coeffs by (t - ck) / denom
                let mut next = vec![0.0; coeffs.len() + 1];
                for (m, &cm) in coeffs.iter().enumerate() {
                    next[m + 1] += cm / denom;
                    next[m] -= cm * ck / denom;
                }
                coeffs = next;
            }
            poly.push(coeffs);
        }

        let integrate = |coeffs: &[f64], t: f64| -> f64 {
            let mut acc = 0.0;
            let mut power = t;
            for (m, &cm) in coeffs.iter().enumerate() {
                acc += cm * power / (m as f64 + 1.0);
                power *= t;
            }
            acc
        };

        let a: Vec<Vec<f64>> = c
            .iter()
            .map(|&cj| poly.iter().map(|p| integrate(p, cj)).collect())
            .collect();
        let b: Vec<f64> = poly.iter().map(|p| integrate(p, 1.0)).collect();

        let bsum: f64 = b.iter().sum();
        debug_assert!((bsum - 1.0).abs() < 1e-13, "weights must sum to one");
        if b.iter().any(|&w| w.abs() < 1e-12) {
            return Err(Error::InvalidConfig(
                "degenerate endpoint weight in collocation tableau".into(),
            ));
        }
        Ok(CollocationTableau { c, a, b, poly })
    }

    pub fn stages(&self) -> usize {
        self.c.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.c
    }

    pub fn weights(&self) -> &[f64] {
        &self.b
    }

    pub fn coeff(&self, j: usize, k: usize) -> f64 {
        self.a[j][k]
    }

    /// `l_j(t)`.
    pub fn lagrange(&self, j: usize, t: f64) -> f64 {
        let mut acc = 0.0;
        let mut power = 1.0;
        for &cm in &self.poly[j] {
            acc += cm * power;
            power *= t;
        }
        acc
    }

    /// `A_j(t) = int_0^t l_j`.
    pub fn integrated_lagrange(&self, j: usize, t: f64) -> f64 {
        let mut acc = 0.0;
        let mut power = t;
        for (m, &cm) in self.poly[j].iter().enumerate() {
            acc += cm * power / (m as f64 + 1.0);
            power *= t;
        }
        acc
    }
}

/// One conservative collocation step. `stage_quadrature_nodes` controls the
/// Gauss rule used for the averaged stage differentials; ten nodes put the
/// quadrature error far below solver tolerance for step sizes of interest.
/// The `scheme` field of `cfg` is not consulted — the stage differential
/// above is the method.
pub fn collocation_step(
    problem: &dyn DgProblem,
    tableau: &CollocationTableau,
    stage_quadrature_nodes: usize,
    cfg: &StepConfig,
    x0: &GroupElement,
) -> Result<StepOutcome> {
    if x0.kind() != problem.kind() {
        return Err(Error::kind_mismatch(problem.kind(), x0.kind()));
    }
    let s = tableau.stages();
    let h = cfg.h;
    let quad = quadrature::gauss_legendre(stage_quadrature_nodes)?;
    let kind = problem.kind().clone();

    let sigma_at = |k: &[AlgebraElement], t: f64| -> AlgebraElement {
        let mut acc = AlgebraElement::zero(kind.clone());
        for (j, kj) in k.iter().enumerate() {
            acc = acc
                .add_scaled(h * tableau.integrated_lagrange(j, t), kj)
                .expect("slopes share the problem kind");
        }
        acc
    };

    let f0 = problem.field(x0)?;
    let initial: Vec<AlgebraElement> = vec![f0; s];

    let map = |k: &Vec<AlgebraElement>| -> Result<Vec<AlgebraElement>> {
        let sigmas: Vec<AlgebraElement> =
            tableau.nodes().iter().map(|&cj| sigma_at(k, cj)).collect();

        // one shared sweep over the quadrature nodes
        let mut averaged: Vec<Covector> = vec![Covector::zero(kind.clone()); s];
        for (&sq, &wq) in quad.nodes.iter().zip(&quad.weights) {
            let sigma_q = sigma_at(k, sq);
            let xq = lie::compose(&lie::exp(&sigma_q)?, x0)?;
            let mu = problem.integral().trivialized_differential(&xq)?;
            let pushed = lie::dexp_dual(&sigma_q, &mu)?;
            for (j, avg) in averaged.iter_mut().enumerate() {
                *avg = avg.add_scaled(wq * tableau.lagrange(j, sq), &pushed)?;
            }
        }

        let mut out = Vec::with_capacity(s);
        for j in 0..s {
            let dbar_j =
                lie::dexpinv_dual(&sigmas[j], &averaged[j].scale(1.0 / tableau.weights()[j]))?;
            let xj = lie::compose(&lie::exp(&sigmas[j])?, x0)?;
            let omega = problem.bivector_at(&xj)?;
            let fj = omega.contract(&dbar_j)?;
            out.push(lie::dexpinv(&sigmas[j], &fj)?);
        }
        Ok(out)
    };

    let distance = |a: &Vec<AlgebraElement>, b: &Vec<AlgebraElement>| -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.sub(y).map(|d| d.norm()).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    };

    let blend = |a: &Vec<AlgebraElement>, b: &Vec<AlgebraElement>, t: f64| -> Vec<AlgebraElement> {
        a.iter()
            .zip(b)
            .map(|(x, y)| {
                x.scale(1.0 - t)
                    .add(&y.scale(t))
                    .expect("slopes share the problem kind")
            })
            .collect()
    };

    let (k, report) = fixed_point_solve_damped(
        "collocation step",
        initial,
        map,
        distance,
        blend,
        cfg.solver_tol,
        cfg.max_iter,
    )?;

    let state = lie::compose(&lie::exp(&sigma_at(&k, 1.0))?, x0)?;
    Ok(StepOutcome { state, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bivector::TrivializedBivector;
    use crate::discrete_diff::FirstIntegral;
    use crate::lie::GroupKind;
    use approx::assert_relative_eq;
    use nalgebra::{DMatrix, DVector};

    #[test]
    fn two_stage_tableau_matches_the_known_gauss_coefficients() {
        let t = CollocationTableau::gauss(2).unwrap();
        let r3 = 3.0_f64.sqrt();
        assert_relative_eq!(t.nodes()[0], 0.5 - r3 / 6.0, epsilon = 1e-14);
        assert_relative_eq!(t.nodes()[1], 0.5 + r3 / 6.0, epsilon = 1e-14);
        assert_relative_eq!(t.coeff(0, 0), 0.25, epsilon = 1e-14);
        assert_relative_eq!(t.coeff(0, 1), 0.25 - r3 / 6.0, epsilon = 1e-14);
        assert_relative_eq!(t.coeff(1, 0), 0.25 + r3 / 6.0, epsilon = 1e-14);
        assert_relative_eq!(t.coeff(1, 1), 0.25, epsilon = 1e-14);
        assert_relative_eq!(t.weights()[0], 0.5, epsilon = 1e-14);
        assert_relative_eq!(t.weights()[1], 0.5, epsilon = 1e-14);
    }

    #[test]
    fn single_stage_tableau_is_the_midpoint_rule() {
        let t = CollocationTableau::gauss(1).unwrap();
        assert_relative_eq!(t.nodes()[0], 0.5, epsilon = 1e-15);
        assert_relative_eq!(t.coeff(0, 0), 0.5, epsilon = 1e-15);
        assert_relative_eq!(t.weights()[0], 1.0, epsilon = 1e-15);
        // l_1 is the constant 1, its integral the identity
        assert_relative_eq!(t.lagrange(0, 0.37), 1.0, epsilon = 1e-15);
        assert_relative_eq!(t.integrated_lagrange(0, 0.37), 0.37, epsilon = 1e-15);
    }

    #[test]
    fn lagrange_basis_has_the_interpolation_property() {
        let t = CollocationTableau::gauss(3).unwrap();
        for j in 0..3 {
            for k in 0..3 {
                let expected = if j == k { 1.0 } else { 0.0 };
                assert_relative_eq!(t.lagrange(j, t.nodes()[k]), expected, epsilon = 1e-12);
            }
        }
        // partition of unity
        assert_relative_eq!(
            (0..3).map(|j| t.lagrange(j, 0.21)).sum::<f64>(),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn stage_counts_outside_the_table_are_rejected(){
        assert!(CollocationTableau::gauss(0).is_err());
        assert!(CollocationTableau::gauss(6).is_err());
    }

    // Flat-space oscillator again: on a linear problem the conservative
    // collocation method coincides with the classical Gauss method,
    // because the averaged differential of a quadratic integral sampled
    // at Gauss points reproduces the pointwise value there.
    struct Oscillator {
        kind: GroupKind,
        h: FirstIntegral,
    }

    impl Oscillator {
        fn new() -> Self {
            let kind = GroupKind::EuclideanRd(2);
            let h = FirstIntegral::new(
                kind.clone(),
                |x| Ok(0.5 * x.as_flat()?.norm_squared()),
                |x| Ok(AlgebraElement::flat_vec(x.as_flat()?.clone()).to_covector()),
            );
            Oscillator { kind, h }
        }
    }

    impl DgProblem for Oscillator {
        fn kind(&self) -> &GroupKind {
            &self.kind
        }
        fn integral(&self) -> &FirstIntegral {
            &self.h
        }
        fn bivector_at(&self, _x: &GroupElement) -> Result<TrivializedBivector> {
            TrivializedBivector::from_skew_matrix(DMatrix::from_row_slice(
                2,
                2,
                &[0.0, 1.0, -1.0, 0.0],
            ))
        }
    }

    fn pade22_rotation(h: f64, x: &DVector<f64>) -> DVector<f64> {
        // the (2,2)-Pade stability function of the two-stage Gauss method:
        // (I - hJ/2 + (hJ)^2/12)^-1 (I + hJ/2 + (hJ)^2/12)
        let j = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let j2 = &j * &j;
        let lhs = DMatrix::identity(2, 2) - &j * (0.5 * h) + &j2 * (h * h / 12.0);
        let rhs = DMatrix::identity(2, 2) + &j * (0.5 * h) + &j2 * (h * h / 12.0);
        lhs.lu().solve(&(rhs * x)).unwrap()
    }

    #[test]
    fn two_stage_step_on_a_linear_problem_is_the_classical_gauss_method() {
        let prob = Oscillator::new();
        let tableau = CollocationTableau::gauss(2).unwrap();
        let x0 = GroupElement::euclidean(DVector::from_column_slice(&[0.8, -0.3]));
        let cfg = StepConfig::new(0.25);
        let out = collocation_step(&prob, &tableau, 10, &cfg, &x0).unwrap();
        let expected = pade22_rotation(0.25, x0.as_flat().unwrap());
        assert!((out.state.as_flat().unwrap() - &expected).norm() < 1e-13);
    }

    #[test]
    fn single_stage_step_is_the_implicit_midpoint_rule() {
        let prob = Oscillator::new();
        let tableau = CollocationTableau::gauss(1).unwrap();
        let x0 = GroupElement::euclidean(DVector::from_column_slice(&[1.0, 0.25]));
        let cfg = StepConfig::new(0.2);
        let out = collocation_step(&prob, &tableau, 10, &cfg, &x0).unwrap();
        let a = DMatrix::from_row_slice(2, 2, &[1.0, -0.1, 0.1, 1.0]);
        let b = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, -0.1, 1.0]);
        let expected = a.lu().solve(&(b * x0.as_flat().unwrap())).unwrap();
        assert!((out.state.as_flat().unwrap() - &expected).norm() < 1e-13);
    }

    #[test]
    fn collocation_conserves_the_integral_per_step() {
        let prob = Oscillator::new();
        let tableau = CollocationTableau::gauss(2).unwrap();
        let mut x = GroupElement::euclidean(DVector::from_column_slice(&[0.6, 0.9]));
        let cfg = StepConfig::new(0.125);
        let h0 = prob.integral().eval(&x).unwrap();
        for _ in 0..200 {
            x = collocation_step(&prob, &tableau, 10, &cfg, &x).unwrap().state;
            let drift = (prob.integral().eval(&x).unwrap() - h0).abs();
            assert!(drift < 1e-13, "energy drift {drift:.3e}");
        }
    }

    #[test]
    fn collocation_step_reverses_cleanly() {
        let prob = Oscillator::new();
        let tableau = CollocationTableau::gauss(2).unwrap();
        let x0 = GroupElement::euclidean(DVector::from_column_slice(&[0.4, 0.7]));
        let cfg = StepConfig::new(1.0 / 16.0);
        let fwd = collocation_step(&prob, &tableau, 10, &cfg, &x0).unwrap().state;
        let back = collocation_step(&prob, &tableau, 10, &cfg.reversed(), &fwd)
            .unwrap()
            .state;
        assert!((back.as_flat().unwrap() - x0.as_flat().unwrap()).norm() < 1e-12);
    }
}
