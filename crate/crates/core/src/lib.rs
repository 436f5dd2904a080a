//! Constrained optimization over idempotent semifields, with a project
//! scheduler that minimises the maximum flow time.

pub mod cli;
pub mod document;
pub mod error;
pub mod inequalities;
pub mod linalg;
pub mod optimizer;
pub mod oracle;
pub mod scheduling;
pub mod semifield;

pub use error::{Error, Result};
