//! Energy-preserving one-step integrators on Lie groups and
//! retraction-equipped manifolds.
//!
//! The crate is organized in layers:
//!
//! * [`lie`] — group kinds (unit quaternions, SO(3), GL+(3), SL(3), a
//!   phase-space semidirect product, flat R^d) with exp/log, the
//!   right-trivialized differential of exp, its inverse, and their duals;
//! * [`quadrature`] — Gauss–Legendre rules on `[0, 1]`;
//! * [`manifold`] — the unit-sphere retraction with symmetric centering;
//! * [`bivector`] — trivialized Poisson bivectors as contraction operators;
//! * [`discrete_diff`] — discrete differentials of first integrals
//!   (midpoint-corrected and averaged forms) on groups and on the sphere;
//! * [`integrator`] — the conservative one-step map, its non-conservative
//!   symmetric variant, an explicit comparison method, and a collocation
//!   scheme built from the same trivialization machinery;
//! * [`problems`] — three ready-made mechanical systems: free rigid body on
//!   the momentum sphere, rigid-body attitude on unit quaternions, and a
//!   pseudo-rigid elastic body on the phase-space group;
//! * [`harness`] — experiment drivers (trajectory runs, convergence studies,
//!   method comparisons) and their CSV output format.
//!
//! Conventions are uniform across the crate: right trivialization, the
//! coordinate dot product as duality pairing, and step maps of the form
//! `x1 = exp(h * f(x0, x1)) . x0`.

pub mod bivector;
pub mod discrete_diff;
pub mod error;
pub mod harness;
pub mod integrator;
pub mod lie;
pub mod manifold;
pub mod problems;
pub mod quadrature;
pub mod testing;

pub use error::{Error, Result};
pub use lie::{AlgebraElement, Coords, Covector, GroupElement, GroupKind};
