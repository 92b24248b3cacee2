//! Quantified Complexes: constraints, scope solving, transcription.

mod complex;
mod constraints;
mod solve;
mod transcribe;

use thiserror::Error;

pub use complex::{free_fragments, free_fragments_in, Fragment, QuantifiedComplex};
pub use constraints::{apply_constraints, ConstraintSet, Rule};
pub use solve::{solve, Reading};
pub use transcribe::{check_instance, transcribe, transcribe_with, Determiner, DeterminerRegistry, Transcription};

use crate::fol::FolError;
use crate::model::{Entity, Label, ModelError, NodeId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScopeError {
    #[error("no top hole: every hole belongs to a logical node")]
    NoTopHole,
    #[error("several top hole candidates: {0:?}")]
    AmbiguousTop(Vec<NodeId>),
    #[error("top label {0} does not name an unattached hole")]
    UnknownTop(Label),
    #[error("{0} belongs to no fragment")]
    StrayNode(NodeId),
    #[error("{node} is shared by fragments {} and {}", .fragments.0, .fragments.1)]
    SharedNode { node: NodeId, fragments: (usize, usize) },
    #[error("scope relation targets {0}, which is not a fragment of another node")]
    BadScope(Entity),
    #[error("hole {0} is unresolved")]
    UnresolvedHole(NodeId),
    #[error("{node} lacks attribute {attr}")]
    MissingAttr { node: NodeId, attr: String },
    #[error("unsupported quantifier: {0}")]
    Unsupported(String),
    #[error("reading is not a valid model: {}", .0.join("; "))]
    InvalidReading(Vec<String>),
    #[error("not an instance: {0}")]
    NotAnInstance(String),
    #[error(transparent)]
    Fol(#[from] FolError),
    #[error(transparent)]
    Model(#[from] ModelError),
}
