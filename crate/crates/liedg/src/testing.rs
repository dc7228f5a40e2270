//! Deterministic random samplers for tests and benchmarks.
//!
//! Everything is driven by an explicitly seeded ChaCha stream so failures
//! reproduce bit-for-bit across runs and platforms.

use nalgebra::{DVector, Matrix3, Vector3};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::discrete_diff::FirstIntegral;
use crate::lie::{self, gl3, AlgebraElement, Coords, Covector, GroupElement, GroupKind};

/// Seeded generator; same seed, same stream, everywhere.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_vec3<R: Rng>(rng: &mut R) -> Vector3<f64> {
    Vector3::new(
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
    )
}

fn random_mat3<R: Rng>(rng: &mut R) -> Matrix3<f64> {
    Matrix3::from_fn(|_, _| rng.random_range(-1.0..1.0))
}

/// Algebra element of the given kind with norm scaled to lie in
/// `[0.1, 1.0] * scale` (exactly zero scale gives the zero element).
pub fn random_algebra_element<R: Rng>(
    rng: &mut R,
    kind: &GroupKind,
    scale: f64,
) -> AlgebraElement {
    if scale == 0.0 {
        return AlgebraElement::zero(kind.clone());
    }
    let coords = match kind {
        GroupKind::UnitQuaternion | GroupKind::SO3 => Coords::Vec3(random_vec3(rng)),
        GroupKind::GLplus3 => Coords::Mat3(random_mat3(rng)),
        GroupKind::SL3 => {
            let m = random_mat3(rng);
            Coords::Mat3(m - Matrix3::identity() * (m.trace() / 3.0))
        }
        GroupKind::Semidirect => Coords::Pair(random_mat3(rng), random_mat3(rng)),
        GroupKind::EuclideanRd(d) => {
            Coords::VecN(DVector::from_fn(*d, |_, _| rng.random_range(-1.0..1.0)))
        }
    };
    let raw = AlgebraElement::new(kind.clone(), coords).expect("sampler layout is valid");
    let target = scale * rng.random_range(0.1..1.0);
    let n = raw.norm();
    if n < 1e-12 {
        // astronomically unlikely, but keep the contract
        return AlgebraElement::zero(kind.clone());
    }
    raw.scale(target / n)
}

/// Covector of the given kind, same distribution as the algebra sampler.
pub fn random_covector<R: Rng>(rng: &mut R, kind: &GroupKind, scale: f64) -> crate::lie::Covector {
    random_algebra_element(rng, kind, scale).to_covector()
}

/// Generic group element reachable as a product of two exponentials, which
/// keeps it inside the right component without being an exponential itself.
pub fn random_group_element<R: Rng>(rng: &mut R, kind: &GroupKind) -> GroupElement {
    let a = random_algebra_element(rng, kind, 0.7);
    match kind {
        GroupKind::UnitQuaternion | GroupKind::SO3 | GroupKind::EuclideanRd(_) => {
            lie::exp(&a).expect("exp is total on sampled data")
        }
        _ => {
            let b = random_algebra_element(rng, kind, 0.7);
            lie::compose(&lie::exp(&a).unwrap(), &lie::exp(&b).unwrap())
                .expect("product of exponentials")
        }
    }
}

/// Pair `(u, v)` with `v = exp(delta) . u` and `|delta|` in
/// `[0.05, max_dist]`; this is the canonical sampling for chain-rule and
/// symmetry checks.
pub fn random_near_pair<R: Rng>(
    rng: &mut R,
    kind: &GroupKind,
    max_dist: f64,
) -> (GroupElement, GroupElement) {
    let u = random_group_element(rng, kind);
    let delta = random_algebra_element(rng, kind, max_dist.max(0.05));
    let v = lie::compose(&lie::exp(&delta).unwrap(), &u).expect("perturbed element");
    (u, v)
}

/// Inverse hat map of a skew matrix.
fn skew_vee(s: &Matrix3<f64>) -> Vector3<f64> {
    Vector3::new(s[(2, 1)], s[(0, 2)], s[(1, 0)])
}

/// A smooth, inhomogeneous test integral on the given group, with its
/// right-trivialized differential worked out in closed form. The
/// coefficients are drawn from `rng`, so distinct calls give distinct
/// integrals; each returned pair `(eval, differential)` is internally
/// consistent, which the finite-difference defect below can confirm.
///
/// * rotation kinds: `H(x) = tr(A R(x))`, with `R` the represented rotation;
/// * matrix kinds: `H(X) = tr(A X) + tr(X^T B X)/2` with symmetric `B`
///   (the differential is trace-projected for the unit-determinant group);
/// * phase-space pairs: `H(F, P) = tr(A F) + tr(P^T P B)/2`;
/// * flat space: `H(x) = a.x + x.Bx/2 + |x|^4/8`.
pub fn synthetic_integral<R: Rng>(kind: &GroupKind, rng: &mut R) -> FirstIntegral {
    match kind {
        GroupKind::UnitQuaternion | GroupKind::SO3 => {
            // d/dt tr(A exp(t zhat) R) = tr(A zhat R) = vee(A^T R^T - R A) . z,
            // and the quaternion exponential covers rotations at half speed,
            // so its differential carries an extra factor of two.
            let a = random_mat3(rng);
            let factor = if matches!(kind, GroupKind::UnitQuaternion) {
                2.0
            } else {
                1.0
            };
            let k1 = kind.clone();
            let k2 = kind.clone();
            let rot = move |x: &GroupElement| -> crate::Result<Matrix3<f64>> {
                match x.kind() {
                    GroupKind::UnitQuaternion => lie::euler_rodriguez(x),
                    _ => Ok(*x.as_matrix()?),
                }
            };
            let rot2 = rot;
            FirstIntegral::new(
                k1.clone(),
                move |x| Ok((a * rot(x)?).trace()),
                move |x| {
                    let r = rot2(x)?;
                    let s = a.transpose() * r.transpose() - r * a;
                    Covector::vec3(k2.clone(), skew_vee(&s) * factor)
                },
            )
        }
        GroupKind::GLplus3 | GroupKind::SL3 => {
            let a = random_mat3(rng);
            let braw = random_mat3(rng);
            let b = (braw + braw.transpose()) * 0.5;
            let sl = matches!(kind, GroupKind::SL3);
            let k1 = kind.clone();
            let k2 = kind.clone();
            FirstIntegral::new(
                k1,
                move |x| {
                    let m = x.as_matrix()?;
                    Ok((a * m).trace() + 0.5 * (m.transpose() * b * m).trace())
                },
                move |x| {
                    let m = x.as_matrix()?;
                    // Euclidean gradient G = A^T + B X; right translation
                    // sends it to G X^T.
                    let g = (a.transpose() + b * m) * m.transpose();
                    let g = if sl {
                        g - Matrix3::identity() * (g.trace() / 3.0)
                    } else {
                        g
                    };
                    AlgebraElement::mat3(k2.clone(), g).map(|e| e.to_covector())
                },
            )
        }
        GroupKind::Semidirect => {
            let a = random_mat3(rng);
            let braw = random_mat3(rng);
            let b = (braw + braw.transpose()) * 0.5;
            FirstIntegral::new(
                kind.clone(),
                move |x| {
                    let (f, p) = x.as_phase_pair()?;
                    Ok((a * f).trace() + 0.5 * (p.transpose() * p * b).trace())
                },
                move |x| {
                    let (f, p) = x.as_phase_pair()?;
                    let gf = a.transpose();
                    let gp = p * b;
                    Ok(Covector::mat_pair(
                        gf * f.transpose() + gl3::coad(&gp, p),
                        gp,
                    ))
                },
            )
        }
        GroupKind::EuclideanRd(d) => {
            let avec = DVector::from_fn(*d, |_, _| rng.random_range(-1.0..1.0));
            let braw =
                nalgebra::DMatrix::from_fn(*d, *d, |_, _| rng.random_range(-1.0..1.0));
            let b = (&braw + braw.transpose()) * 0.5;
            let a2 = avec.clone();
            let b2 = b.clone();
            FirstIntegral::new(
                kind.clone(),
                move |x| {
                    let v = x.as_flat()?;
                    Ok(avec.dot(v) + 0.5 * v.dot(&(&b * v)) + 0.125 * v.norm_squared().powi(2))
                },
                move |x| {
                    let v = x.as_flat()?;
                    let g = &a2 + &b2 * v + v * (0.5 * v.norm_squared());
                    Ok(AlgebraElement::flat_vec(g).to_covector())
                },
            )
        }
    }
}

/// `| <R*dH(x), zeta> - central difference of H along exp(. zeta) x |`:
/// the basis-free check that a claimed trivialized differential matches
/// the integral it belongs to. Decays as `eps^2` for smooth integrals.
pub fn fd_trivialized_defect(
    h: &FirstIntegral,
    x: &GroupElement,
    zeta: &AlgebraElement,
    eps: f64,
) -> f64 {
    let plus = lie::compose(&lie::exp(&zeta.scale(eps)).unwrap(), x).unwrap();
    let minus = lie::compose(&lie::exp(&zeta.scale(-eps)).unwrap(), x).unwrap();
    let fd = (h.eval(&plus).unwrap() - h.eval(&minus).unwrap()) / (2.0 * eps);
    let exact = h
        .trivialized_differential(x)
        .unwrap()
        .pair_with(zeta)
        .unwrap();
    (fd - exact).abs()
}
