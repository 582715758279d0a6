//! The equational calculus of cartesian closed categories, its translation into terms with
//! products, and the collapse derivation.

mod arrow;
mod axioms;
mod collapse;
mod translate;

pub use arrow::{
    arrow_type_of, match_instance, parse_arrow, parse_arrow_with, print_arrow, print_arrow_with, ArrowTerm,
};
pub use axioms::{check_axioms, check_axioms_with, AxiomCheck, AxiomReport, AXIOMS};
pub use collapse::{
    collapse, collapse_with, replay, replay_with, verify_collapse, CollapseCertificate, CollapseReplay, ReplayStep,
};
pub use translate::{decide_ccc_eq, decide_ccc_eq_with, from_lambda, to_lambda};

use crate::normalize::NormalizeError;
use crate::products::ProductError;
use crate::syntax::TypeError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CccError {
    #[error("ill-formed arrow: {0}")]
    IllFormed(String),
    #[error("arrow types differ: {left} vs {right}")]
    TypeMismatch { left: String, right: String },
    #[error("the arrows are provably equal")]
    EqualArrows,
    #[error(transparent)]
    Separation(#[from] ProductError),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
}

impl From<TypeError> for CccError {
    fn from(e: TypeError) -> CccError {
        CccError::IllFormed(e.to_string())
    }
}
