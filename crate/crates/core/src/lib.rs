//! Exact computation of the first Milnor fiber cohomology of line
//! arrangements, split into its monodromy eigenspaces.

pub mod arrangement;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod linalg;
pub mod milnor;
pub mod realize;
pub mod report;
pub mod resonance;

pub use error::{Error, Result};
pub use field::{CycloNumber, Rational};
