pub mod abelian;
pub mod catalog;
pub mod cohomology;
pub mod error;
pub mod group;
pub mod json;
pub mod lattice;
pub mod reduction;
pub mod snf;
pub mod splitting;
pub mod wells;

pub use error::{Error, Result};
pub use group::{FiniteGroup, GroupAutomorphism, GroupHomomorphism, Subgroup};
