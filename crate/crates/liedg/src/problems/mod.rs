//! The three worked examples: a rigid body reduced to the momentum sphere,
//! rigid-body attitude on the unit quaternions, and a pseudo-rigid elastic
//! body on the phase-space group. Each module defines the energy, its
//! trivialized differential, the skew structure, and the vector field, and
//! freezes the reference parameter values used by the experiments.

pub mod attitude;
pub mod pseudo_rigid;
pub mod sphere_rb;

pub use attitude::QuaternionAttitude;
pub use pseudo_rigid::PseudoRigidBody;
pub use sphere_rb::SphereRigidBody;
