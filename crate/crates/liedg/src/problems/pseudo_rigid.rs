//! Pseudo-rigid elastic body: affine deformations with a St. Venant-type
//! stored energy.
//!
//! The state is the pair `(F, P)` of deformation gradient and conjugate
//! momentum, carried by the phase-space group (GL+(3) acting on its dual).
//! The energy splits into kinetic and strain parts,
//!
//! ```text
//! H(F, P) = tr(P^T P E^-1)/2 + W(C),    C = F^T F,
//! W(C) = lambda tr(C - I)^2 / 2 + mu tr((C - I)^2),
//! ```
//!
//! with `E` the reference inertia and `(lambda, mu)` the elastic moduli
//! (`mu > 0`, `3 lambda + 2 mu > 0` make `W` positive definite). The
//! motion is canonical: `F' = dH/dP`, `P' = -dH/dF`.
//!
//! Two covectors matter and they are *not* the same object:
//!
//! * the honest trivialized differential of `H` (used by the conserved
//!   integral and every generic identity test), and
//! * the assembled pair `gamma = (gamma_1, gamma_2)` with
//!   `gamma_2 = (dH/dP) F^-1`, `gamma_1 = dH/dF - coad(gamma_2, P)`.
//!
//! The second is the covector whose constant Darboux contraction
//! `(gamma_2, -gamma_1)` equals the right-trivialized velocity of the
//! canonical flow; the step therefore pairs the assembled covector with
//! the Darboux bivector, while consistency of the pairing with the honest
//! differential shows up as exact energy orthogonality.

use nalgebra::{Matrix3, Vector3};

use crate::bivector::TrivializedBivector;
use crate::discrete_diff::{chain_rule_correction, FirstIntegral, Scheme};
use crate::error::{Error, Result};
use crate::integrator::DgProblem;
use crate::lie::{self, gl3, AlgebraElement, Covector, GroupElement, GroupKind};

#[derive(Debug, Clone)]
pub struct PseudoRigidBody {
    lambda: f64,
    mu: f64,
    reference_inertia: Vector3<f64>,
    incompressible: bool,
    kind: GroupKind,
    integral: FirstIntegral,
}

fn strain_energy(f: &Matrix3<f64>, lambda: f64, mu: f64) -> f64 {
    let c = f.transpose() * f - Matrix3::identity();
    0.5 * lambda * c.trace().powi(2) + mu * (c * c).trace()
}

fn kinetic_energy(p: &Matrix3<f64>, e: &Vector3<f64>) -> f64 {
    let e_inv = Matrix3::from_diagonal(&Vector3::new(1.0 / e[0], 1.0 / e[1], 1.0 / e[2]));
    0.5 * (p.transpose() * p * e_inv).trace()
}

/// `(dH/dF, dH/dP)` in the Frobenius pairing: `(2 F gradW(C), P E^-1)`.
fn variational_derivatives(
    f: &Matrix3<f64>,
    p: &Matrix3<f64>,
    lambda: f64,
    mu: f64,
    e: &Vector3<f64>,
) -> (Matrix3<f64>, Matrix3<f64>) {
    let c = f.transpose() * f - Matrix3::identity();
    let grad_w = Matrix3::identity() * (lambda * c.trace()) + c * (2.0 * mu);
    let e_inv = Matrix3::from_diagonal(&Vector3::new(1.0 / e[0], 1.0 / e[1], 1.0 / e[2]));
    (f * grad_w * 2.0, p * e_inv)
}

impl PseudoRigidBody {
    pub fn new(lambda: f64, mu: f64, reference_inertia: Vector3<f64>) -> Result<Self> {
        if mu <= 0.0 || 3.0 * lambda + 2.0 * mu <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "elastic moduli must satisfy mu > 0 and 3 lambda + 2 mu > 0, \
                 got lambda = {lambda}, mu = {mu}"
            )));
        }
        if reference_inertia.min() <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "reference inertia must be positive, got {:?}",
                reference_inertia.as_slice()
            )));
        }
        let kind = GroupKind::Semidirect;
        let (l1, m1, e1) = (lambda, mu, reference_inertia);
        let (l2, m2, e2) = (lambda, mu, reference_inertia);
        let integral = FirstIntegral::new(
            kind.clone(),
            move |x| {
                let (f, p) = x.as_phase_pair()?;
                Ok(kinetic_energy(p, &e1) + strain_energy(f, l1, m1))
            },
            move |x| {
                let (f, p) = x.as_phase_pair()?;
                let (gf, gp) = variational_derivatives(f, p, l2, m2, &e2);
                Ok(Covector::mat_pair(
                    gf * f.transpose() + gl3::coad(&gp, p),
                    gp,
                ))
            },
        );
        Ok(PseudoRigidBody {
            lambda,
            mu,
            reference_inertia,
            incompressible: false,
            kind,
            integral,
        })
    }

    /// Flag the body as incompressible: initial deformations must have unit
    /// determinant. No projection is applied to the motion; the determinant
    /// is simply monitored as a run invariant.
    pub fn incompressible(mut self) -> Self {
        self.incompressible = true;
        self
    }

    pub fn is_incompressible(&self) -> bool {
        self.incompressible
    }

    /// Reference moduli `lambda = 1/3, mu = 1` and inertia `diag(1, 2, 3)`.
    pub fn reference() -> Self {
        PseudoRigidBody::new(1.0 / 3.0, 1.0, Vector3::new(1.0, 2.0, 3.0))
            .expect("reference moduli are valid")
    }

    /// Undeformed configuration with the reference momentum
    /// `P0 = diag(0.2575, 0.8407, 0.2543)`.
    pub fn default_initial() -> GroupElement {
        GroupElement::phase_pair(
            Matrix3::identity(),
            Matrix3::from_diagonal(&Vector3::new(0.2575, 0.8407, 0.2543)),
        )
        .expect("identity deformation is valid")
    }

    /// Validate a starting state against the body's constraints.
    pub fn check_initial(&self, x: &GroupElement) -> Result<()> {
        let (f, _) = x.as_phase_pair()?;
        let det = f.determinant();
        if det <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "deformation gradient must have positive determinant, got {det}"
            )));
        }
        if self.incompressible && (det - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidConfig(format!(
                "incompressible body requires det(F) = 1, got {det}"
            )));
        }
        Ok(())
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn reference_inertia(&self) -> &Vector3<f64> {
        &self.reference_inertia
    }

    pub fn energy(&self, x: &GroupElement) -> Result<f64> {
        self.integral.eval(x)
    }

    pub fn kinetic(&self, x: &GroupElement) -> Result<f64> {
        let (_, p) = x.as_phase_pair()?;
        Ok(kinetic_energy(p, &self.reference_inertia))
    }

    pub fn strain(&self, x: &GroupElement) -> Result<f64> {
        let (f, _) = x.as_phase_pair()?;
        Ok(strain_energy(f, self.lambda, self.mu))
    }

    /// The assembled covector pair at `x`.
    pub fn gamma_pair(&self, x: &GroupElement) -> Result<Covector> {
        let (f, p) = x.as_phase_pair()?;
        let (gf, gp) = variational_derivatives(f, p, self.lambda, self.mu, &self.reference_inertia);
        let f_inv = f
            .try_inverse()
            .ok_or(Error::Singular("deformation gradient inverse"))?;
        let gamma2 = gp * f_inv;
        let gamma1 = gf - gl3::coad(&gamma2, p);
        Ok(Covector::mat_pair(gamma1, gamma2))
    }
}

impl DgProblem for PseudoRigidBody {
    fn kind(&self) -> &GroupKind {
        &self.kind
    }

    fn integral(&self) -> &FirstIntegral {
        &self.integral
    }

    fn bivector_at(&self, _x: &GroupElement) -> Result<TrivializedBivector> {
        Ok(TrivializedBivector::darboux())
    }

    /// The step pairs the Darboux structure with the assembled covector at
    /// the geodesic midpoint, corrected along the increment so the chain
    /// rule — and with it exact conservation — holds.
    fn discrete_differential(
        &self,
        scheme: &Scheme,
        u: &GroupElement,
        v: &GroupElement,
    ) -> Result<Covector> {
        let eta = lie::log_of_quotient(v, u)?;
        let mid = lie::compose(&lie::exp(&eta.scale(0.5))?, u)?;
        let gamma = self.gamma_pair(&mid)?;
        match scheme {
            Scheme::Gonzalez => chain_rule_correction(
                self.integral.eval(v)? - self.integral.eval(u)?,
                &gamma,
                &eta,
            ),
            Scheme::GonzalezAlpha0 => Ok(gamma),
            Scheme::Avf { .. } => Err(Error::InvalidConfig(
                "the averaged differential is not defined for the phase-space pair problem; \
                 use the corrected-midpoint scheme"
                    .into(),
            )),
        }
    }

    /// Right-trivialized velocity of the canonical flow: the Darboux
    /// contraction of the assembled pair.
    fn field(&self, x: &GroupElement) -> Result<AlgebraElement> {
        self.bivector_at(x)?.contract(&self.gamma_pair(x)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::{dg_step, heun_step, StepConfig};
    use crate::testing;
    use approx::assert_relative_eq;

    #[test]
    fn moduli_constraints_are_enforced() {
        assert!(PseudoRigidBody::new(0.0, 1.0, Vector3::new(1.0, 2.0, 3.0)).is_ok());
        assert!(PseudoRigidBody::new(1.0, 0.0, Vector3::new(1.0, 2.0, 3.0)).is_err());
        assert!(PseudoRigidBody::new(-1.0, 1.0, Vector3::new(1.0, 2.0, 3.0)).is_err());
        assert!(PseudoRigidBody::new(1.0, 1.0, Vector3::new(1.0, -2.0, 3.0)).is_err());
    }

    #[test]
    fn energy_pieces_are_nonnegative_and_vanish_at_rest() {
        let body = PseudoRigidBody::reference();
        let rest = GroupElement::phase_pair(Matrix3::identity(), Matrix3::zeros()).unwrap();
        assert_relative_eq!(body.energy(&rest).unwrap(), 0.0, epsilon = 1e-15);

        let mut rng = testing::rng(71);
        for _ in 0..50 {
            let x = testing::random_group_element(&mut rng, &GroupKind::Semidirect);
            assert!(body.kinetic(&x).unwrap() >= 0.0);
            assert!(body.strain(&x).unwrap() >= -1e-14);
        }
    }

    #[test]
    fn honest_differential_passes_finite_differences() {
        let body = PseudoRigidBody::reference();
        let mut rng = testing::rng(72);
        for _ in 0..10 {
            let x = testing::random_group_element(&mut rng, &GroupKind::Semidirect);
            let zeta = testing::random_algebra_element(&mut rng, &GroupKind::Semidirect, 1.0);
            let coarse = testing::fd_trivialized_defect(body.integral(), &x, &zeta, 1e-3);
            let fine = testing::fd_trivialized_defect(body.integral(), &x, &zeta, 5e-4);
            assert!(coarse < 1e-2, "defect {coarse:.3e}");
            if coarse > 1e-8 {
                let ratio = coarse / fine;
                assert!((ratio - 4.0).abs() < 0.5, "ratio {ratio:.3}");
            }
        }
    }

    /// The flow is canonical: pushing the state along the field moves
    /// `F` by `dH/dP` and `P` by `-dH/dF`.
    #[test]
    fn field_realizes_the_canonical_equations() {
        let body = PseudoRigidBody::reference();
        let mut rng = testing::rng(73);
        for _ in 0..10 {
            let x = testing::random_group_element(&mut rng, &GroupKind::Semidirect);
            let (f, p) = x.as_phase_pair().unwrap();
            let (gf, gp) =
                variational_derivatives(f, p, body.lambda, body.mu, &body.reference_inertia);

            let probe = |eps: f64| {
                let xi = body.field(&x).unwrap().scale(eps);
                let fwd = lie::compose(&lie::exp(&xi).unwrap(), &x).unwrap();
                let bwd = lie::compose(&lie::exp(&xi.neg()).unwrap(), &x).unwrap();
                let (ff, pf) = fwd.as_phase_pair().unwrap();
                let (fb, pb) = bwd.as_phase_pair().unwrap();
                let fdot = (ff - fb) / (2.0 * eps);
                let pdot = (pf - pb) / (2.0 * eps);
                ((fdot - gp).norm() + (pdot + gf).norm()) / (1.0 + gf.norm() + gp.norm())
            };
            let coarse = probe(1e-3);
            let fine = probe(5e-4);
            assert!(coarse < 1e-3, "defect {coarse:.3e}");
            if coarse > 1e-9 {
                assert!((coarse / fine - 4.0).abs() < 0.6, "ratio {:.3}", coarse / fine);
            }
        }
    }

    /// Exact energy orthogonality of the honest differential against the
    /// assembled field, state by state.
    #[test]
    fn energy_is_constant_along_the_field() {
        let body = PseudoRigidBody::reference();
        let mut rng = testing::rng(74);
        for _ in 0..100 {
            let x = testing::random_group_element(&mut rng, &GroupKind::Semidirect);
            let f = body.field(&x).unwrap();
            let mu = body.integral().trivialized_differential(&x).unwrap();
            let pairing = mu.pair_with(&f).unwrap();
            assert!(
                pairing.abs() <= 1e-12 * (1.0 + mu.norm() * f.norm()),
                "energy flux {pairing:.3e}"
            );
        }
    }

    #[test]
    fn corrected_step_conserves_energy_but_uncorrected_does_not() {
        let body = PseudoRigidBody::reference();
        let x0 = PseudoRigidBody::default_initial();
        let h0 = body.energy(&x0).unwrap();

        let mut x = x0.clone();
        let cfg = StepConfig::new(1.0 / 16.0);
        for _ in 0..400 {
            x = dg_step(&body, &cfg, &x).unwrap().state;
            assert!((body.energy(&x).unwrap() - h0).abs() < 1e-12);
            let (f, _) = x.as_phase_pair().unwrap();
            assert!(f.determinant() > 0.0);
        }

        let mut y = x0.clone();
        let cfg0 = StepConfig::new(1.0 / 16.0).with_scheme(Scheme::GonzalezAlpha0);
        let mut max_err: f64 = 0.0;
        for _ in 0..400 {
            y = dg_step(&body, &cfg0, &y).unwrap().state;
            max_err = max_err.max((body.energy(&y).unwrap() - h0).abs());
        }
        assert!(
            max_err > 1e-8 && max_err < 1e-2,
            "uncorrected drift {max_err:.3e} out of the expected band"
        );
    }

    #[test]
    fn both_midpoint_steps_reverse_cleanly() {
        let body = PseudoRigidBody::reference();
        let x0 = PseudoRigidBody::default_initial();
        for scheme in [Scheme::Gonzalez, Scheme::GonzalezAlpha0] {
            let cfg = StepConfig::new(1.0 / 16.0).with_scheme(scheme.clone());
            let fwd = dg_step(&body, &cfg, &x0).unwrap().state;
            let back = dg_step(&body, &cfg.reversed(), &fwd).unwrap().state;
            assert!(
                back.distance(&x0).unwrap() < 1e-12,
                "adjoint defect with {scheme:?}"
            );
        }
    }

    #[test]
    fn averaged_scheme_is_rejected() {
        let body = PseudoRigidBody::reference();
        let x0 = PseudoRigidBody::default_initial();
        let cfg = StepConfig::new(1.0 / 16.0).with_scheme(Scheme::Avf { nodes: 6 });
        assert!(dg_step(&body, &cfg, &x0).is_err());
    }

    #[test]
    fn explicit_method_drifts_faster() {
        let body = PseudoRigidBody::reference();
        let mut x = PseudoRigidBody::default_initial();
        let h0 = body.energy(&x).unwrap();
        for _ in 0..2000 {
            x = heun_step(&body, 1.0 / 32.0, &x).unwrap();
        }
        let drift = (body.energy(&x).unwrap() - h0).abs();
        assert!(drift > 1e-7, "expected drift, saw {drift:.3e}");
    }

    #[test]
    fn incompressible_flag_checks_the_initial_determinant() {
        let body = PseudoRigidBody::reference().incompressible();
        assert!(body.check_initial(&PseudoRigidBody::default_initial()).is_ok());
        let squeezed = GroupElement::phase_pair(
            Matrix3::from_diagonal(&Vector3::new(0.5, 1.0, 1.0)),
            Matrix3::zeros(),
        )
        .unwrap();
        assert!(body.check_initial(&squeezed).is_err());
        assert!(PseudoRigidBody::reference().check_initial(&squeezed).is_ok());
    }

    #[test]
    fn zero_momentum_gives_a_pure_momentum_kick_field() {
        let body = PseudoRigidBody::reference();
        let f = Matrix3::new(1.1, 0.2, 0.0, 0.0, 0.9, 0.1, 0.05, 0.0, 1.0);
        let x = GroupElement::phase_pair(f, Matrix3::zeros()).unwrap();
        let xi = body.field(&x).unwrap();
        let (zeta, m) = match xi.coords() {
            crate::lie::Coords::Pair(a, b) => (*a, *b),
            _ => unreachable!(),
        };
        assert!(zeta.norm() < 1e-15, "deformation velocity should vanish");
        let (gf, _) = variational_derivatives(&f, &Matrix3::zeros(), body.lambda, body.mu, &body.reference_inertia);
        assert_relative_eq!(m, -gf, epsilon = 1e-14);
    }
}
