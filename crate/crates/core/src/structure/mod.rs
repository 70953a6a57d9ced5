//! Structural invariants of finite loops.

mod assoc;
mod decompose;
mod iso;
mod lagrange;
mod nucleus;
mod subloop;

pub use assoc::{
    associator, associator_subloop, check_assoc_family, squaring_kernel, AssocFamily,
    SquaringKernel,
};
pub use decompose::{decompose_torsion, internal_direct_product, Decomposition, DirectProduct};
pub use iso::{invariant_vector, isomorphic, IsoResult};
pub use lagrange::{enumerate_subloops, lagrange_report, LagrangeReport, SubloopList};
pub use nucleus::{center, nucleus, NucleusKind};
pub use subloop::{
    cosets, generate_subloop, is_normal, is_subloop, quotient, subloop_table, CosetPartition,
};

use thiserror::Error;

use crate::table::NotPowerAssociative;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("the given set is not a subloop")]
    NotASubloop,
    #[error("the given subloop is not normal")]
    NotNormal,
    #[error("cosets do not multiply consistently")]
    IllDefined,
    #[error(transparent)]
    NotPowerAssociative(#[from] NotPowerAssociative),
    #[error("decomposition fails: {0}")]
    DecompositionFails(String),
}
