//! Exit codes: 0 success, 1 negative answer, 2 parse or usage error, 3 type error,
//! 4 equal pair, 5 budget exceeded, 6 certificate schema or kind mismatch, 7 I/O error.

use bohm::ccc::CccError;
use bohm::models::ModelError;
use bohm::normalize::NormalizeError;
use bohm::numerals::NumeralError;
use bohm::products::ProductError;
use bohm::separator::SeparationError;
use bohm::syntax::{ParseError, ReadError, TypeError};

use crate::cert::SchemaMismatch;

pub enum Outcome {
    Success,
    Negative,
}

pub const PARSE: u8 = 2;
pub const TYPE: u8 = 3;
pub const EQUAL: u8 = 4;
pub const BUDGET: u8 = 5;
pub const SCHEMA: u8 = 6;
pub const IO: u8 = 7;

fn normalize(e: &NormalizeError) -> u8 {
    match e {
        NormalizeError::ResourceExhausted { .. } => BUDGET,
        NormalizeError::TypeMismatch { .. } => TYPE,
    }
}

fn model(e: &ModelError) -> u8 {
    match e {
        ModelError::Overflow(_) | ModelError::LevelTooSmall { .. } => BUDGET,
        ModelError::Normalize(n) => normalize(n),
        ModelError::TypeMismatch(_) | ModelError::UnboundVariable(_) | ModelError::CodeOutOfRange { .. } => TYPE,
        _ => 1,
    }
}

fn separation(e: &SeparationError) -> u8 {
    match e {
        SeparationError::EqualTerms => EQUAL,
        SeparationError::NotSeparable { .. }
        | SeparationError::LevelTooLarge { .. }
        | SeparationError::ResourceExhausted(_) => BUDGET,
        SeparationError::IllTyped(_) | SeparationError::Unsupported(_) => TYPE,
        SeparationError::InvalidLevel { .. } => PARSE,
        SeparationError::Model(m) => model(m),
    }
}

fn product(e: &ProductError) -> u8 {
    match e {
        ProductError::EqualTerms => EQUAL,
        ProductError::NotClosed | ProductError::IllTyped(_) | ProductError::IndexOutOfRange { .. } => TYPE,
        ProductError::Separation(s) => separation(s),
        ProductError::Normalize(n) => normalize(n),
        ProductError::Internal(_) => 1,
    }
}

pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<SchemaMismatch>() {
            return SCHEMA;
        }
        if cause.is::<ParseError>() || cause.is::<serde_json::Error>() {
            return PARSE;
        }
        if let Some(e) = cause.downcast_ref::<ReadError>() {
            return if matches!(e, ReadError::Parse(_)) { PARSE } else { TYPE };
        }
        if cause.is::<TypeError>() {
            return TYPE;
        }
        if cause.is::<std::io::Error>() {
            return IO;
        }
        if let Some(e) = cause.downcast_ref::<NormalizeError>() {
            return normalize(e);
        }
        if let Some(e) = cause.downcast_ref::<ModelError>() {
            return model(e);
        }
        if let Some(e) = cause.downcast_ref::<SeparationError>() {
            return separation(e);
        }
        if let Some(e) = cause.downcast_ref::<ProductError>() {
            return product(e);
        }
        if let Some(e) = cause.downcast_ref::<CccError>() {
            return match e {
                CccError::EqualArrows => EQUAL,
                CccError::IllFormed(_) | CccError::TypeMismatch { .. } => TYPE,
                CccError::Separation(p) => product(p),
                CccError::Normalize(n) => normalize(n),
            };
        }
        if cause.is::<NumeralError>() {
            return TYPE;
        }
    }
    PARSE
}
