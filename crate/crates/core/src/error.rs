use thiserror::Error;

/// Errors reported by parsing, validation and the synchronization algorithms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("automaton is not strongly connected; the general synchronization problem is PSPACE-complete and is not attempted")]
    NotStronglyConnected,

    #[error("automaton is not complete")]
    NotComplete,

    #[error("automaton is not synchronizing: pair {{{p}, {q}}} is incompressible")]
    NotSynchronizing { p: usize, q: usize },

    #[error("no word of non-zero rank at most {target}; minimal non-zero rank is {min_rank}")]
    RankUnreachable { target: usize, min_rank: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{what} exceeds the limit of {limit}")]
    TooLarge { what: String, limit: usize },

    #[error("generator failed: {0}")]
    Generator(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
