//! Exact symbolic computation in free-field vertex superalgebras and chiral
//! equivariant cohomology.

pub mod algebra;
pub mod axioms;
pub mod cache;
pub mod cli;
pub mod cohomology;
pub mod engine;
pub mod equivariant;
pub mod error;
pub mod expr;
pub mod fixtures;
pub mod lie;
pub mod linalg;
pub mod report;
pub mod scalar;
pub mod theorems;
pub mod weil;

pub use algebra::{FreeFieldAlgebra, GenId, GeneratorSpec, Grade, Mode, Monomial, State};
pub use error::{Error, Result};
pub use scalar::Scalar;
