use thiserror::Error;

use crate::operators::Op;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown operator `{name}` at {pos}")]
    UnknownOperator { pos: usize, name: String },

    #[error("operator `{op}` expects {expected} argument(s), got {got}")]
    Arity { op: String, expected: usize, got: usize },

    #[error("symbol `{symbol}` is not in the alphabet")]
    SymbolOutsideAlphabet { symbol: char },

    #[error("definitions line {line}: {msg}")]
    Definitions { line: usize, msg: String },

    #[error("invalid parameters for `{op}`: {msg}")]
    Parameters { op: String, msg: String },

    #[error("homomorphism table `{table}` is erasing; `hom` needs a non-erasing table")]
    ErasingHomomorphism { table: String },

    #[error("operator `{op}` is not supported here: {reason}")]
    Capability { op: Op, reason: String },

    #[error("nullability undecided: {reason}")]
    Undecided { reason: String },

    #[error("automaton exceeded the state cap of {0}")]
    StateCapExceeded(usize),

    #[error("iterated-derivative set exceeded the cap of {0} elements")]
    CapExceeded(usize),

    #[error("operator `{op}` cannot be turned into a transducer: {reason}")]
    NotTransducible { op: Op, reason: String },
}

impl Error {
    /// True for errors caused by malformed input rather than by the limits
    /// of what the engine can decide.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::UnknownOperator { .. }
                | Error::Arity { .. }
                | Error::SymbolOutsideAlphabet { .. }
                | Error::Definitions { .. }
                | Error::Parameters { .. }
                | Error::ErasingHomomorphism { .. }
        )
    }
}
