//! Types, terms, typing, substitution, parsing and printing.

mod context;
mod parse;
mod print;
mod term;
mod types;

pub use context::Context;
pub use parse::{check, parse, parse_type, parse_type_with, parse_with, read_term, read_term_with, type_of, Surface};
pub(crate) use parse::{parse_type_tokens, Lexer, Tok};
pub(crate) use print::write_type;
pub use print::{print_term, print_term_with, print_type, AliasSink, NoAlias, TypeAliases};
pub(crate) use term::{instantiate, mentions, shift};
pub use term::{is_type_instance, substitute_term, substitute_types, Name, Term, TermKind};
pub use types::{numeral_type, tower_over, tower_type, Atom, Ty, TyKind, TypeSubst};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TypeError {
    #[error("ill-typed term {term}: {reason}")]
    IllTyped { term: String, reason: String },
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("type mismatch: expected {}, found {}", .expected.short(), .found.short())]
    TypeMismatch { expected: Ty, found: Ty },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReadError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Type(#[from] TypeError),
}
