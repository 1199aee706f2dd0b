//! Alphabets, traces, and labeled traces — the vocabulary every other
//! module speaks.

use crate::error::AutomatonError;
use std::fmt;

/// An input or output symbol. Symbols are the integers `0..alphabet.size()`.
pub type Symbol = u16;

/// A finite alphabet of integer symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet {
    size: u16,
}

impl Alphabet {
    /// A `size`-symbol alphabet. Panics if `size` is zero.
    pub fn new(size: u16) -> Self {
        assert!(size >= 1, "alphabet must have at least one symbol");
        Alphabet { size }
    }

    pub fn size(&self) -> u16 {
        self.size
    }

    pub fn contains(&self, symbol: Symbol) -> bool {
        symbol < self.size
    }

    pub fn check(&self, symbol: Symbol) -> Result<(), AutomatonError> {
        if self.contains(symbol) {
            Ok(())
        } else {
            Err(AutomatonError::SymbolOutOfRange {
                symbol,
                size: self.size,
            })
        }
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        0..self.size
    }
}

/// A finite sequence of input symbols, possibly empty.
///
/// Traces order lexicographically by symbols, with a prefix sorting before
/// its extensions; this is the order the trace store keeps on disk.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Trace(Vec<Symbol>);

impl Trace {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Trace(symbols)
    }

    pub fn empty() -> Self {
        Trace(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn push(&mut self, symbol: Symbol) {
        self.0.push(symbol);
    }

    /// The prefix consisting of the first `len` symbols.
    pub fn prefix(&self, len: usize) -> Trace {
        Trace(self.0[..len].to_vec())
    }

    pub fn starts_with(&self, prefix: &Trace) -> bool {
        self.0.starts_with(&prefix.0)
    }

    pub fn valid_under(&self, alphabet: &Alphabet) -> Result<(), AutomatonError> {
        for &s in &self.0 {
            alphabet.check(s)?;
        }
        Ok(())
    }
}

impl From<Vec<Symbol>> for Trace {
    fn from(symbols: Vec<Symbol>) -> Self {
        Trace(symbols)
    }
}

impl From<&[Symbol]> for Trace {
    fn from(symbols: &[Symbol]) -> Self {
        Trace(symbols.to_vec())
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// A trace paired with one output symbol: the label of the state the trace
/// reaches in the (possibly unknown) target machine.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabeledTrace {
    pub trace: Trace,
    pub label: Symbol,
}

impl LabeledTrace {
    pub fn new(trace: Trace, label: Symbol) -> Self {
        LabeledTrace { trace, label }
    }
}
