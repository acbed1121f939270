//! Exact integral lattice computations for K3 and Enriques covering lattices,
//! finite isometry groups, and Nielsen realization criteria.

pub mod cover;
pub mod cyclo;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod group;
pub mod json;
pub mod lattice;
pub mod matrix;
pub mod period;
pub mod poly;
pub mod realization;

pub use enumerate::{short_vectors, short_vectors_with, CancelToken, EnumOptions, ShortVectorSet};
pub use error::{Error, Result};
pub use lattice::{Lattice, LatticeInvariants, Signature, StandardName, Sublattice};
pub use matrix::{QMatrix, ZMatrix};
