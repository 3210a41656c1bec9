//! Finite permutation groups, common-divisor graphs on p-regular conjugacy
//! classes, and a verifier for the structure results attached to them.

pub mod arith;
pub mod atlas;
pub mod classifier;
pub mod constructions;
pub mod corpus;
pub mod error;
pub mod field;
pub mod graph;
pub mod group;
pub mod iso;
pub mod perm;
pub mod structure;
pub mod verify;

pub use error::{Error, Result};
pub use group::{center, centralizer, conjugacy_classes, make_group, ConjClass, Group};
pub use perm::{element_order, Permutation};
