//! Product normal forms of types, isomorphisms, component splitting and separation with products.

mod iso;
mod measure;
mod separate;
mod split;
mod typenf;

pub use iso::{build_iso, build_iso_with, iso_from_trace, lift, primitive, IsoWitness};
pub use measure::{measure, Measure, MEASURE_CAP_BITS};
pub use separate::{separate_prod, separate_prod_with, verify_product, verify_product_with, ProductCertificate};
pub use split::{
    component_count, differing_component, differing_component_with, project, projector, split, split_with, Split,
};
pub use typenf::{
    decrease, is_product_normal, next_redex, parse_position, position_string, product_normal_form, redex_rule,
    replace_at, subtype_at, type_nf, type_nf_with, DecreaseTier, Dir, Position, RedexOrder, Rule, TraceStep,
    TypeNfTrace,
};

use crate::normalize::NormalizeError;
use crate::separator::SeparationError;
use crate::syntax::TypeError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProductError {
    #[error("the terms are provably equal")]
    EqualTerms,
    #[error("terms must be closed")]
    NotClosed,
    #[error("ill-typed: {0}")]
    IllTyped(String),
    #[error("component index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error(transparent)]
    Separation(#[from] SeparationError),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
    #[error("internal error: {0}")]
    Internal(String),
}

impl From<TypeError> for ProductError {
    fn from(e: TypeError) -> ProductError {
        ProductError::IllTyped(e.to_string())
    }
}
