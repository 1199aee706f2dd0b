//! Error types shared across the crate.

use crate::alphabet::{Symbol, Trace};
use thiserror::Error;

/// Errors from machine construction and evaluation.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("symbol {symbol} outside alphabet of size {size}")]
    SymbolOutOfRange { symbol: Symbol, size: u16 },
    #[error("state {state} out of range for machine with {num_states} states")]
    StateOutOfRange { state: u32, num_states: u32 },
    #[error("transition table has {got} entries, expected {expected}")]
    IncompleteDelta { got: usize, expected: usize },
    #[error("input alphabets differ ({0} vs {1})")]
    InputAlphabetMismatch(u16, u16),
    #[error("output alphabets differ ({0} vs {1})")]
    OutputAlphabetMismatch(u16, u16),
    #[error("machine must have at least one state")]
    NoStates,
}

/// Parse errors for the textual machine and dataset formats. Carries the
/// 1-based line number where parsing failed.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

/// Errors from building or querying a trace store.
#[derive(Debug, Error)]
pub enum StoreError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Automaton(#[from] AutomatonError),
    #[error("store file corrupt: {0}")]
    Corrupt(String),
    #[error("duplicate trace with conflicting labels: {0}")]
    LabelConflict(Trace),
    #[error("{0}")]
    Parse(#[from] ParseError),
}

/// Errors from observation-tree updates.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("trace relabeled with conflicting output ({existing} vs {new})")]
    LabelConflict { existing: Symbol, new: Symbol },
    #[error("{0}")]
    Automaton(#[from] AutomatonError),
}

/// Why a learning run was cut short.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbortReason {
    MemoryBudget,
    Timeout,
}

impl std::fmt::Display for AbortReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AbortReason::MemoryBudget => write!(f, "memory budget exceeded"),
            AbortReason::Timeout => write!(f, "wall-clock timeout"),
        }
    }
}

/// Errors from a learning run.
#[derive(Debug, Error)]
pub enum LearnError {
    #[error("store is empty")]
    EmptyStore,
    #[error("{0}")]
    Store(#[from] StoreError),
    #[error("{0}")]
    Tree(#[from] TreeError),
    #[error("run aborted: {reason}")]
    Aborted {
        reason: AbortReason,
        stats: Box<crate::stats::LearnStats>,
    },
}

/// Errors from dataset generation.
#[derive(Debug, Error)]
pub enum DatagenError {
    #[error("target generation gave up after {attempts} attempts")]
    RetryLimit { attempts: u32 },
    #[error("{0}")]
    Automaton(#[from] AutomatonError),
}
