//! Complete deterministic Moore machines: a total transition function plus a
//! per-state output label. A trace's label is the output of the state it
//! reaches from the initial state.

use crate::alphabet::{Alphabet, Symbol, Trace};
use crate::error::AutomatonError;

pub type StateId = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MooreMachine {
    input: Alphabet,
    output: Alphabet,
    initial: StateId,
    /// Row-major: `delta[state * input.size() + symbol]`.
    delta: Vec<StateId>,
    /// One output symbol per state.
    lambda: Vec<Symbol>,
}

impl MooreMachine {
    /// Builds a machine from a complete transition table.
    ///
    /// `delta` must hold `lambda.len() * input.size()` entries in row-major
    /// order, all targets in range, and every output symbol valid.
    pub fn new(
        input: Alphabet,
        output: Alphabet,
        initial: StateId,
        delta: Vec<StateId>,
        lambda: Vec<Symbol>,
    ) -> Result<Self, AutomatonError> {
        let num_states = lambda.len() as u32;
        if num_states == 0 {
            return Err(AutomatonError::NoStates);
        }
        let expected = lambda.len() * input.size() as usize;
        if delta.len() != expected {
            return Err(AutomatonError::IncompleteDelta {
                got: delta.len(),
                expected,
            });
        }
        if initial >= num_states {
            return Err(AutomatonError::StateOutOfRange {
                state: initial,
                num_states,
            });
        }
        for &t in &delta {
            if t >= num_states {
                return Err(AutomatonError::StateOutOfRange {
                    state: t,
                    num_states,
                });
            }
        }
        for &o in &lambda {
            output.check(o)?;
        }
        Ok(MooreMachine {
            input,
            output,
            initial,
            delta,
            lambda,
        })
    }

    pub fn num_states(&self) -> u32 {
        self.lambda.len() as u32
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn input_alphabet(&self) -> Alphabet {
        self.input
    }

    pub fn output_alphabet(&self) -> Alphabet {
        self.output
    }

    pub fn step(&self, state: StateId, symbol: Symbol) -> StateId {
        self.delta[state as usize * self.input.size() as usize + symbol as usize]
    }

    pub fn output(&self, state: StateId) -> Symbol {
        self.lambda[state as usize]
    }

    /// Runs the machine on `trace` and returns the output of the state
    /// reached; the empty trace yields the initial state's output.
    pub fn evaluate(&self, trace: &Trace) -> Result<Symbol, AutomatonError> {
        let mut state = self.initial;
        for &s in trace.symbols() {
            self.input.check(s)?;
            state = self.step(state, s);
        }
        Ok(self.output(state))
    }

    /// Graph-description export for rendering with graphviz.
    pub fn to_dot(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        writeln!(out, "digraph moore {{").unwrap();
        writeln!(out, "  rankdir=LR;").unwrap();
        writeln!(out, "  __start [shape=point];").unwrap();
        writeln!(out, "  __start -> q{};", self.initial).unwrap();
        for q in 0..self.num_states() {
            writeln!(out, "  q{q} [shape=circle,label=\"q{q}/{}\"];", self.output(q)).unwrap();
        }
        for q in 0..self.num_states() {
            for s in self.input.symbols() {
                writeln!(out, "  q{q} -> q{} [label=\"{s}\"];", self.step(q, s)).unwrap();
            }
        }
        writeln!(out, "}}").unwrap();
        out
    }
}
