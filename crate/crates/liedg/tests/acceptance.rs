//! The crate's acceptance gate: nine numbered end-to-end checks, each
//! printing one `acceptance N: PASS/FAIL` line (visible with
//! `--nocapture` or on failure) and asserting its stated tolerance.
//! Numbers, tolerances, and step sizes are fixed here on purpose — these
//! are the claims the crate makes about itself, frozen as a regression
//! surface.

use liedg::discrete_diff::Scheme;
use liedg::harness::{
    convergence_study, run_trajectory, ConvergenceSpec, ExperimentSpec, MethodId, ProblemId,
    STAGE_QUADRATURE_NODES,
};
use liedg::integrator::{collocation_step, dg_step, sphere_dg_step, CollocationTableau, StepConfig};
use liedg::lie::{self, GroupKind};
use liedg::problems::{PseudoRigidBody, QuaternionAttitude, SphereRigidBody};
use liedg::testing;
use nalgebra::DVector;
use rand::Rng;

fn verdict(id: u32, pass: bool, detail: &str) {
    println!(
        "acceptance {id}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "acceptance {id} failed — {detail}");
}

fn elastic_spec(method: MethodId, h: f64) -> ExperimentSpec {
    // reference body: lambda = 1/3, mu = 1, E = diag(1,2,3), F0 = I,
    // P0 = diag(0.2575, 0.8407, 0.2543) — the harness defaults
    ExperimentSpec::new(ProblemId::PseudoRigid, method, h, 500.0)
}

#[test]
fn acceptance_1_elastic_energy_preservation() {
    let traj = run_trajectory(&elastic_spec(MethodId::DgGonzalez, 1.0 / 16.0)).unwrap();
    let max = traj.max_abs_energy_err();
    verdict(
        1,
        traj.records.len() == 8001 && max <= 1e-10,
        &format!("max |H_err| = {max:.3e} over 8000 steps at h = 1/16 (tolerance 1e-10)"),
    );
}

#[test]
fn acceptance_2_zero_correction_comparator_drift_band() {
    let traj = run_trajectory(&elastic_spec(MethodId::SymAlpha0, 1.0 / 16.0)).unwrap();
    let max = traj.max_abs_energy_err();
    verdict(
        2,
        (1e-4..=1e-2).contains(&max),
        &format!("max |H_err| = {max:.3e} over 8000 steps at h = 1/16 (band [1e-4, 1e-2])"),
    );
}

#[test]
fn acceptance_3_explicit_method_trails_by_an_order() {
    let heun = run_trajectory(&elastic_spec(MethodId::Heun, 1.0 / 32.0)).unwrap();
    let sym = run_trajectory(&elastic_spec(MethodId::SymAlpha0, 1.0 / 16.0)).unwrap();
    let heun_max = heun.max_abs_energy_err();
    let sym_max = sym.max_abs_energy_err();
    verdict(
        3,
        heun_max >= 10.0 * sym_max,
        &format!(
            "explicit drift {heun_max:.3e} vs symmetric drift {sym_max:.3e} by t = 500 \
             (required ratio >= 10, actual {:.1})",
            heun_max / sym_max
        ),
    );
}

#[test]
fn acceptance_4_attitude_convergence_slopes() {
    let start = std::time::Instant::now();
    let h_list: Vec<f64> = (3..=7).map(|k| 0.5_f64.powi(k)).collect();
    let mut slopes = Vec::new();
    for method in [MethodId::DgGonzalez, MethodId::DgAvf, MethodId::Colloc4] {
        let base = ExperimentSpec::new(ProblemId::QuatRb, method, 0.0, 1.0);
        let mut spec = ConvergenceSpec::new(base, h_list.clone());
        spec.reference_method = Some(MethodId::Colloc4);
        spec.reference_h = Some(0.5_f64.powi(10));
        let study = convergence_study(&spec).unwrap();
        slopes.push((method, study.slope, study.rows.clone()));
    }
    let elapsed = start.elapsed();

    let (m0, s0, r0) = &slopes[0];
    let (m1, s1, _) = &slopes[1];
    let (m2, s2, r2) = &slopes[2];
    let pass = (s0 - 2.0).abs() <= 0.2
        && (s1 - 2.0).abs() <= 0.2
        && (s2 - 4.0).abs() <= 0.2
        && elapsed.as_secs() < 60;
    verdict(
        4,
        pass,
        &format!(
            "fitted slopes over h = 2^-3..2^-7 at t_end = 1: {m0} {s0:.3} (want 2.0±0.2), \
             {m1} {s1:.3} (want 2.0±0.2), {m2} {s2:.3} (want 4.0±0.2); runtime {:.1}s. \
             The coarsest steps cannot resolve this body's ~25 rad/s momentum precession, \
             so their terminal errors saturate near the oscillation amplitude instead of \
             following the order line (order-2 errors: {:.2e} at 2^-3 vs {:.2e} at 2^-4; \
             order-4 error {:.2e} at 2^-3); on resolved windows the same studies fit \
             1.95 over 2^-6..2^-9 and 3.98 over 2^-5..2^-8 (see the library tests).",
            elapsed.as_secs_f64(),
            r0[0].global_error,
            r0[1].global_error,
            r2[0].global_error,
        ),
    );
}

#[test]
fn acceptance_5_sphere_long_run_conservation() {
    let spec = ExperimentSpec::new(ProblemId::SphereRb, MethodId::DgGonzalez, 0.05, 500.0);
    let traj = run_trajectory(&spec).unwrap();
    let max_h = traj.max_abs_energy_err();
    let max_norm = traj
        .records
        .iter()
        .map(|r| (r.invariant - 1.0).abs())
        .fold(0.0, f64::max);
    verdict(
        5,
        traj.records.len() == 10_001 && max_h <= 1e-12 && max_norm <= 1e-12,
        &format!(
            "10^4 steps at h = 0.05: max |H_err| = {max_h:.3e}, max ||p| - 1| = {max_norm:.3e} \
             (tolerance 1e-12 each)"
        ),
    );
}

/// One forward step at `+h` followed by one at `-h` must return the
/// start state to round-off for every symmetric method/problem pair.
#[test]
fn acceptance_6_symmetry_reversal_suite() {
    const STATES: usize = 100;
    const TOL: f64 = 1e-12;
    let mut worst: Vec<(String, f64)> = Vec::new();

    // sphere rigid body, both discrete differentials, h = 1/16
    let sphere = SphereRigidBody::reference();
    for scheme in [Scheme::Gonzalez, Scheme::Avf { nodes: 6 }] {
        let cfg = StepConfig::new(1.0 / 16.0).with_scheme(scheme.clone());
        let mut r = testing::rng(601);
        let mut max_defect = 0.0_f64;
        for _ in 0..STATES {
            let p = {
                let v = DVector::from_fn(3, |_, _| r.random_range(-1.0..1.0_f64));
                let n = v.norm();
                v / n
            };
            let (q, _) = sphere_dg_step(&sphere, &cfg, &p).unwrap();
            let (back, _) = sphere_dg_step(&sphere, &cfg.reversed(), &q).unwrap();
            max_defect = max_defect.max((&back - &p).norm());
        }
        worst.push((format!("sphere-rb/{scheme:?}"), max_defect));
    }

    // quaternion attitude, both discrete differentials, h = 2^-7 (random
    // attitudes reach far higher energies than the reference state, so
    // the admissible step is smaller; the bound h <= 1/16 still holds)
    let quat = QuaternionAttitude::reference();
    for scheme in [Scheme::Gonzalez, Scheme::Avf { nodes: 6 }] {
        let cfg = StepConfig::new(0.5_f64.powi(7)).with_scheme(scheme.clone());
        let mut r = testing::rng(602);
        let mut max_defect = 0.0_f64;
        for _ in 0..STATES {
            let x = testing::random_group_element(&mut r, &GroupKind::UnitQuaternion);
            let y = dg_step(&quat, &cfg, &x).unwrap().state;
            let back = dg_step(&quat, &cfg.reversed(), &y).unwrap().state;
            max_defect = max_defect.max(back.distance(&x).unwrap());
        }
        worst.push((format!("quat-rb/{scheme:?}"), max_defect));
    }

    // quaternion attitude, collocation: the step is symmetric only up to
    // a defect that decays like h^6, so the 1e-12 bound needs h = 2^-10
    {
        let tableau = CollocationTableau::gauss(2).unwrap();
        let cfg = StepConfig::new(0.5_f64.powi(10));
        let mut r = testing::rng(603);
        let mut max_defect = 0.0_f64;
        for _ in 0..STATES {
            let x = testing::random_group_element(&mut r, &GroupKind::UnitQuaternion);
            let y = collocation_step(&quat, &tableau, STAGE_QUADRATURE_NODES, &cfg, &x)
                .unwrap()
                .state;
            let back =
                collocation_step(&quat, &tableau, STAGE_QUADRATURE_NODES, &cfg.reversed(), &y)
                    .unwrap()
                    .state;
            max_defect = max_defect.max(back.distance(&x).unwrap());
        }
        worst.push(("quat-rb/colloc4".into(), max_defect));
    }

    // pseudo-rigid body, conservative and zero-correction methods, h = 1/16
    let elastic = PseudoRigidBody::reference();
    for scheme in [Scheme::Gonzalez, Scheme::GonzalezAlpha0] {
        let cfg = StepConfig::new(1.0 / 16.0).with_scheme(scheme.clone());
        let mut r = testing::rng(604);
        let mut max_defect = 0.0_f64;
        for _ in 0..STATES {
            let x = testing::random_group_element(&mut r, &GroupKind::Semidirect);
            let y = dg_step(&elastic, &cfg, &x).unwrap().state;
            let back = dg_step(&elastic, &cfg.reversed(), &y).unwrap().state;
            max_defect = max_defect.max(back.distance(&x).unwrap());
        }
        worst.push((format!("pseudo-rigid/{scheme:?}"), max_defect));
    }

    let overall = worst.iter().map(|w| w.1).fold(0.0, f64::max);
    let detail = worst
        .iter()
        .map(|(name, d)| format!("{name} {d:.2e}"))
        .collect::<Vec<_>>()
        .join(", ");
    verdict(
        6,
        overall <= TOL,
        &format!("step(h) then step(-h) on {STATES} random states per pair: {detail} (tolerance 1e-12)"),
    );
}

#[test]
fn acceptance_7_discrete_differential_identities() {
    const PAIRS: usize = 1000;
    let kinds = [
        GroupKind::UnitQuaternion,
        GroupKind::SO3,
        GroupKind::GLplus3,
        GroupKind::SL3,
        GroupKind::Semidirect,
        GroupKind::EuclideanRd(4),
    ];
    let mut worst_gonzalez = 0.0_f64;
    let mut worst_avf = 0.0_f64;
    let mut worst_consistency = 0.0_f64;
    for kind in &kinds {
        let mut r = testing::rng(701);
        let h = testing::synthetic_integral(kind, &mut r);
        for _ in 0..PAIRS {
            let (u, v) = testing::random_near_pair(&mut r, kind, 0.5);
            let eta = lie::log_of_quotient(&v, &u).unwrap();
            let dh = h.eval(&v).unwrap() - h.eval(&u).unwrap();

            let g = Scheme::Gonzalez.evaluate(&h, &u, &v).unwrap();
            worst_gonzalez = worst_gonzalez.max((g.pair_with(&eta).unwrap() - dh).abs());

            let a = Scheme::Avf { nodes: 6 }.evaluate(&h, &u, &v).unwrap();
            let avf_resid = (a.pair_with(&eta).unwrap() - dh).abs() / (1.0 + dh.abs());
            worst_avf = worst_avf.max(avf_resid);

            // consistency at coincident endpoints
            let d = Scheme::Gonzalez.evaluate(&h, &u, &u).unwrap();
            let exact = h.trivialized_differential(&u).unwrap();
            let defect = d.sub(&exact).unwrap().norm() / (1.0 + exact.norm());
            worst_consistency = worst_consistency.max(defect);
        }
    }
    verdict(
        7,
        worst_gonzalez <= 1e-13 && worst_avf <= 1e-12 && worst_consistency <= 1e-13,
        &format!(
            "{PAIRS} random pairs on {} kinds: worst corrected-midpoint residual {worst_gonzalez:.2e} \
             (tol 1e-13), worst averaged residual {worst_avf:.2e} (quadrature tol 1e-12), \
             worst coincident-point defect {worst_consistency:.2e} (tol 1e-13)",
            kinds.len()
        ),
    );
}

#[test]
fn acceptance_8_algebra_oracles() {
    const SAMPLES: usize = 200;
    let kinds = [
        GroupKind::UnitQuaternion,
        GroupKind::SO3,
        GroupKind::GLplus3,
        GroupKind::SL3,
        GroupKind::Semidirect,
        GroupKind::EuclideanRd(5),
    ];
    let mut worst_roundtrip = 0.0_f64;
    let mut worst_inverse = 0.0_f64;
    let mut worst_pairing = 0.0_f64;
    let mut ratio_range = (f64::INFINITY, 0.0_f64);
    for kind in &kinds {
        let mut r = testing::rng(801);
        for _ in 0..SAMPLES {
            let xi = testing::random_algebra_element(&mut r, kind, 0.8);
            let back = lie::log(&lie::exp(&xi).unwrap()).unwrap();
            worst_roundtrip =
                worst_roundtrip.max(back.add(&xi.scale(-1.0)).unwrap().norm());

            let sigma = testing::random_algebra_element(&mut r, kind, 0.6);
            let zeta = testing::random_algebra_element(&mut r, kind, 1.0);
            let through = lie::dexp(&sigma, &lie::dexpinv(&sigma, &zeta).unwrap()).unwrap();
            worst_inverse = worst_inverse.max(through.add(&zeta.scale(-1.0)).unwrap().norm());

            let mu = testing::random_covector(&mut r, kind, 1.0);
            let lhs = lie::dexp_dual(&sigma, &mu).unwrap().pair_with(&zeta).unwrap();
            let rhs = mu.pair_with(&lie::dexp(&sigma, &zeta).unwrap()).unwrap();
            worst_pairing = worst_pairing.max((lhs - rhs).abs());
            let lhs = lie::dexpinv_dual(&sigma, &mu)
                .unwrap()
                .pair_with(&zeta)
                .unwrap();
            let rhs = mu.pair_with(&lie::dexpinv(&sigma, &zeta).unwrap()).unwrap();
            worst_pairing = worst_pairing.max((lhs - rhs).abs());
        }

        // central differences of the synthetic integrals: the defect of the
        // claimed differential decays as eps^2, so doubling eps multiplies
        // it by ~4
        let h = testing::synthetic_integral(kind, &mut r);
        let mut ratios = Vec::new();
        for _ in 0..40 {
            let x = testing::random_group_element(&mut r, kind);
            let zeta = testing::random_algebra_element(&mut r, kind, 1.0);
            let eps = 1e-4;
            let coarse = testing::fd_trivialized_defect(&h, &x, &zeta, 2.0 * eps);
            let fine = testing::fd_trivialized_defect(&h, &x, &zeta, eps);
            if fine > 1e-11 {
                ratios.push(coarse / fine);
            }
        }
        ratios.sort_by(f64::total_cmp);
        assert!(ratios.len() >= 10, "too few clean samples on {kind:?}");
        let median = ratios[ratios.len() / 2];
        ratio_range = (ratio_range.0.min(median), ratio_range.1.max(median));
    }
    let pass = worst_roundtrip <= 1e-10
        && worst_inverse <= 1e-12
        && worst_pairing <= 1e-12
        && ratio_range.0 >= 3.5
        && ratio_range.1 <= 4.5;
    verdict(
        8,
        pass,
        &format!(
            "exp/log roundtrip {worst_roundtrip:.2e} (tol 1e-10), dexp∘dexpinv {worst_inverse:.2e} \
             (tol 1e-12), dual pairings {worst_pairing:.2e} (tol 1e-12), \
             finite-difference ratio medians in [{:.2}, {:.2}] (want 4 ± 0.5)",
            ratio_range.0, ratio_range.1
        ),
    );
}

#[test]
fn acceptance_9_group_constraints_along_runs() {
    // determinant positivity over the conservative elastic run
    let traj = run_trajectory(&elastic_spec(MethodId::DgGonzalez, 1.0 / 16.0)).unwrap();
    let min_det = traj.records.iter().map(|r| r.invariant).fold(f64::INFINITY, f64::min);

    // quaternion norms across every trajectory of the convergence setup
    let mut max_norm_err = 0.0_f64;
    for method in [MethodId::DgGonzalez, MethodId::DgAvf, MethodId::Colloc4] {
        for k in 3..=7 {
            let spec =
                ExperimentSpec::new(ProblemId::QuatRb, method, 0.5_f64.powi(k), 1.0);
            let traj = run_trajectory(&spec).unwrap();
            for rec in &traj.records {
                max_norm_err = max_norm_err.max((rec.invariant - 1.0).abs());
            }
        }
    }
    verdict(
        9,
        min_det > 0.0 && max_norm_err <= 1e-12,
        &format!(
            "min det(F) = {min_det:.6} over 8000 elastic steps (must stay > 0); \
             max ||q| - 1| = {max_norm_err:.2e} across 15 attitude runs (tol 1e-12)"
        ),
    );
}
