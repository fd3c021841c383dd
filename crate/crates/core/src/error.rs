//! Errors shared by the trace and term modules.

use crate::position::Position;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("unknown lifeline `{0}`")]
    UnknownLifeline(String),

    #[error("unknown message `{0}`")]
    UnknownMessage(String),

    #[error("duplicate lifeline `{0}` in signature")]
    DuplicateLifeline(String),

    #[error("duplicate message `{0}` in signature")]
    DuplicateMessage(String),

    #[error("signature needs at least one lifeline and one message")]
    EmptySignature,

    #[error("multi-trace has {got} components but the signature declares {expected} lifelines")]
    ComponentCountMismatch { expected: usize, got: usize },

    #[error("component {component} contains an action on a different lifeline")]
    WrongLifeline { component: usize },

    #[error("component {component} does not start with the given action")]
    HeadMismatch { component: usize },

    #[error("position {0} is not valid for this term")]
    InvalidPosition(Position),

    #[error("position {0} is not in the frontier of this term")]
    NotInFrontier(Position),

    #[error("term does not avoid lifeline #{0}; prune is undefined")]
    PruneUndefined(usize),
}
