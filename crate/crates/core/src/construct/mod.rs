//! Builders for concrete loops.

mod factor;
mod standard;
mod sts;

pub use factor::{
    c_factor_set_reduced, constr_factor_set, constr_family, extension, is_c_factor_set, FactorSet,
};
pub use standard::{direct_product, octonion16, standard_loop, STANDARD_NAMES};
pub use sts::{build_sts, steiner_loop, TripleSystem};

use thiserror::Error;

use crate::table::TableError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("no Steiner triple system on {0} points (need v = 1 or 3 mod 6)")]
    InadmissibleOrder(usize),
    #[error("invalid triple system: {0}")]
    InvalidTripleSystem(String),
    #[error("invalid factor set: {0}")]
    InvalidFactorSet(String),
    #[error("alpha = {alpha} has order {order}; need order > 2")]
    AlphaOrderTooSmall { alpha: u8, order: usize },
    #[error("construction postcondition failed: {0}")]
    PostconditionFailed(String),
    #[error("unknown standard loop `{0}`")]
    UnknownName(String),
    #[error("bad parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Table(#[from] TableError),
}
