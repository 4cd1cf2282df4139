pub mod blocks;
pub mod cli;
pub mod constructions;
pub mod error;
pub mod involution;
pub mod json;
pub mod lattice;
pub mod linalg;
pub mod moduli;
pub mod obstructions;
pub mod real_types;

pub use error::{Error, Result};
