use thiserror::Error;

use crate::search::checkpoint::SearchState;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: order {left} vs order {right}")]
    Dimension { left: usize, right: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("order {0} is outside the scope of the theoretical filter (needs n >= 4)")]
    OutOfScope(usize),

    /// The search stopped before covering its whole range. The state can be
    /// written out as a checkpoint and resumed.
    #[error("search stopped early after {} nodes: {reason}", state.counters.nodes_visited)]
    Partial {
        reason: String,
        state: Box<SearchState>,
    },

    /// A survivor failed the independent exact re-check.
    #[error("verification failed: {0}")]
    Verification(String),

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
