//! Exact circuits, circuit walks and circuit diameters of rational H-polytopes.

pub mod circuit;
pub mod error;
pub mod families;
pub mod fstab;
pub mod linalg;
pub mod polytope;
pub mod verify;
pub mod walk;

pub use circuit::{
    canonicalize, enumerate_circuits, is_circuit, Circuit, CircuitSet, CircuitVerdict,
};
pub use error::{Error, Result};
pub use linalg::{Rational, RationalMatrix, RationalVector};
pub use polytope::{Constraint, HPolytope, TightSet};
pub use walk::{circuit_distance, circuit_step, validate_walk, Walk, WalkStep};
