//! Exact relative functor homology for truncated Γ-modules, and the
//! low-degree André-Quillen comparison for finite-dimensional algebras.

pub mod algebra;
pub mod cache;
pub mod commands;
pub mod error;
pub mod field;
pub mod gamma;
pub mod linalg;
pub mod problem;
pub mod report;
pub mod resolution;
pub mod verify;

pub use error::{Error, Result};
pub use field::{Field, FieldSpec, PrimeField, Rational, Rationals};
