//! Exact scalar arithmetic over Q and GF(p) and the dense linear algebra
//! kernel used everywhere else.

mod affine;
mod field;
mod matrix;
mod subspace;

pub use affine::{solve_affine, AffineSolution, AffineSystem, LinearConstraint};
pub use field::{is_prime, FieldSpec, Scalar, MAX_PRIME};
pub use matrix::{is_zero_vec, unit_vector, vec_add, vec_scale, Matrix, Vector};
pub use subspace::Subspace;
