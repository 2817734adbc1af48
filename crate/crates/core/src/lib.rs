//! Lattice point sets in the unit cube and their quasi-uniformity and
//! discrepancy diagnostics.

pub mod error;
pub mod format;
pub mod generators;
pub mod lattice;
mod linalg;
pub mod metrics;
pub mod norm;
pub mod numtheory;
pub mod pointset;
pub mod search;
mod spatial;
pub mod verify;

pub use error::{Error, Result};
pub use lattice::{LatticeSpec, LatticeTag};
pub use norm::{ExactLength, Length, Norm};
pub use pointset::{Coords, PointSet, Provenance};
