//! Finite, bounded computations with self-similarity systems: modules over
//! small categories, their complexes, solvability conditions and depth-indexed
//! approximations of final coalgebras.

pub mod budget;
pub mod builtin;
pub mod complexes;
pub mod error;
pub mod examples;
pub mod finalcoalg;
pub mod format;
pub mod fincat;
pub mod module;
pub mod props;
pub mod solvability;
pub mod union_find;

pub use budget::Budget;
pub use error::{Error, Result};
