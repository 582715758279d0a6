//! Finite full type hierarchies over an ordinal `P`, evaluation, model search and definability.

mod define;
mod distinguish;
mod eval;
mod functional;

pub use define::{
    define_functional, i_defines_check, i_defines_check_with, kappa, level_type, nth_prime, prime_power_code, Definer,
};
pub use distinguish::{apply_term, distinguish, distinguish_with, transport, Distinction, DEFAULT_LEAF_BUDGET};
pub use eval::{eval, Assignment};
pub use functional::{Functional, PModel, CARD_CAP};

use crate::normalize::NormalizeError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("code {code} out of range for type {ty}")]
    CodeOutOfRange { code: u64, ty: String },
    #[error("model base must be at least 2, got {0}")]
    BadBase(u32),
    #[error("level too small: need at least {required}, got {given}")]
    LevelTooSmall { required: u64, given: usize },
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
    #[error("internal error: {0}")]
    Internal(String),
}
