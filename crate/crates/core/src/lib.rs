//! Degrees of k-step nilpotence, equation densities and related machinery
//! over finite groups, Mal'cev coordinate groups and free groups.

pub mod acceptance;
pub mod cli;
pub mod error;
pub mod gallagher;
pub mod genericity;
pub mod group;
pub mod linalg;
pub mod malcev;
pub mod nildegree;
pub mod pgroups;
pub mod sampling;

pub use error::{Error, Result};
