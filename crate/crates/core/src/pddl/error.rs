use thiserror::Error;

use super::sexpr::Pos;

/// Errors raised while reading or validating PDDL input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PddlError {
    #[error("{pos}: syntax error: {msg}")]
    Syntax { pos: Pos, msg: String },
    #[error("{pos}: unsupported PDDL feature `{feature}` (only :strips and :typing are accepted)")]
    Unsupported { pos: Pos, feature: String },
    #[error("{pos}: unknown type `{name}`")]
    UnknownType { pos: Pos, name: String },
    #[error("{pos}: unknown predicate `{name}`")]
    UnknownPredicate { pos: Pos, name: String },
    #[error("{pos}: unknown object `{name}`")]
    UnknownObject { pos: Pos, name: String },
    #[error("{pos}: variable `{name}` is not an action parameter")]
    UnknownVariable { pos: Pos, name: String },
    #[error("{pos}: `{name}` expects {expected} arguments, found {found}")]
    ArityMismatch {
        pos: Pos,
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("{pos}: argument `{arg}` of `{name}` has incompatible type")]
    TypeMismatch { pos: Pos, name: String, arg: String },
    #[error("{pos}: duplicate definition of `{name}`")]
    Duplicate { pos: Pos, name: String },
    #[error("type hierarchy contains a cycle through `{name}`")]
    TypeCycle { name: String },
    #[error("{pos}: problem is for domain `{found}`, expected `{expected}`")]
    DomainMismatch {
        pos: Pos,
        expected: String,
        found: String,
    },
}

impl PddlError {
    pub(crate) fn syntax(pos: Pos, msg: impl Into<String>) -> Self {
        PddlError::Syntax {
            pos,
            msg: msg.into(),
        }
    }

    pub(crate) fn unsupported(pos: Pos, feature: impl Into<String>) -> Self {
        PddlError::Unsupported {
            pos,
            feature: feature.into(),
        }
    }

    /// Stable numeric code per error kind, for scripts and diagnostics.
    pub fn code(&self) -> u32 {
        match self {
            PddlError::Syntax { .. } => 1,
            PddlError::Unsupported { .. } => 2,
            PddlError::UnknownType { .. } => 3,
            PddlError::UnknownPredicate { .. } => 4,
            PddlError::UnknownObject { .. } => 5,
            PddlError::UnknownVariable { .. } => 6,
            PddlError::ArityMismatch { .. } => 7,
            PddlError::TypeMismatch { .. } => 8,
            PddlError::Duplicate { .. } => 9,
            PddlError::TypeCycle { .. } => 10,
            PddlError::DomainMismatch { .. } => 11,
        }
    }
}
