//! Computational toolkit for finite loops, with a focus on C-loops
//! (loops satisfying `x(y(yz)) = ((xy)y)z`).
//!
//! - [`table`]: validated Cayley tables and primitive operations
//! - [`identity`] and [`catalog`]: identity evaluation and the Bol-Moufang
//!   classification
//! - [`structure`]: nuclei, subloops, quotients, associators, isomorphism,
//!   Lagrange-type reports and decompositions
//! - [`construct`]: Steiner triple systems, factor-set extensions, products,
//!   standard groups and the octonion loop
//! - [`search`]: exhaustive enumeration of loops satisfying identities
//! - [`fixtures`]: the published example tables

pub mod catalog;
pub mod construct;
pub mod fixtures;
pub mod identity;
pub mod perm;
pub mod search;
pub mod set;
pub mod structure;
pub mod table;

pub use catalog::{check_property, classify_bol_moufang, Classification, Property, Variety};
pub use identity::{Assignment, Identity, Term, Verdict};
pub use perm::Permutation;
pub use set::ElementSet;
pub use table::{Element, LoopTable, Side, TableError};
