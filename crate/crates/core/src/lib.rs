//! Matrix models of punctual Quot schemes of the plane.
//!
//! A point of the punctual Quot scheme of length-`d` quotients of `O^r` is
//! represented by a tuple `(B1, B2, v1, ..., vr)` of commuting nilpotent
//! operators on `V = F^d` and marked vectors generating `V`, up to the action
//! of `GL(V)`. The crate provides exact linear algebra over Q and GF(p),
//! stability and orbit machinery, compatible Jordan frames and the companion
//! operator connecting any datum to the locus where `v1` is cyclic, the
//! dictionary with truncated modules, and finite-field point counts.

pub mod adhm;
pub mod census;
pub mod deform;
pub mod error;
pub mod gen;
pub mod jordan;
pub mod json;
pub mod linalg;
pub mod modbridge;

pub use error::{Error, Result};
