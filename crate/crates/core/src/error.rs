use thiserror::Error;

/// Errors produced while building games, configuring solvers or evaluating profiles.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The game tree violates a structural invariant.
    #[error("invalid game structure at node {node}: {reason}")]
    Structure { node: usize, reason: String },

    /// A strategy profile does not cover the game's information sets.
    #[error("strategy profile does not cover {what}")]
    Coverage { what: String },

    /// Unknown names, out-of-range parameters and similar setup mistakes.
    #[error("configuration error: {0}")]
    Config(String),

    /// An argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
}

impl Error {
    pub(crate) fn structure(node: usize, reason: impl Into<String>) -> Self {
        Error::Structure {
            node,
            reason: reason.into(),
        }
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
