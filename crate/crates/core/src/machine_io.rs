//! Textual machine format.
//!
//! ```text
//! moore-machine v1
//! states 3
//! initial 0
//! inputs 2
//! outputs 2
//! output 0 1          # state 0 emits symbol 1
//! ...
//! trans 0 1 2         # state 0 --symbol 1--> state 2
//! ...
//! ```
//!
//! Exactly one `output` line per state and one `trans` line per
//! (state, symbol) pair. Blank lines and `#` comments are ignored.

use crate::alphabet::{Alphabet, Symbol};
use crate::error::ParseError;
use crate::machine::{MooreMachine, StateId};

const HEADER: &str = "moore-machine v1";

pub fn serialize(m: &MooreMachine) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    writeln!(out, "states {}", m.num_states()).unwrap();
    writeln!(out, "initial {}", m.initial()).unwrap();
    writeln!(out, "inputs {}", m.input_alphabet().size()).unwrap();
    writeln!(out, "outputs {}", m.output_alphabet().size()).unwrap();
    for q in 0..m.num_states() {
        writeln!(out, "output {q} {}", m.output(q)).unwrap();
    }
    for q in 0..m.num_states() {
        for s in m.input_alphabet().symbols() {
            writeln!(out, "trans {q} {s} {}", m.step(q, s)).unwrap();
        }
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        for (i, raw) in self.inner.by_ref() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if !line.is_empty() {
                return Some((i + 1, line));
            }
        }
        None
    }
}

fn parse_field<T: std::str::FromStr>(line_no: usize, word: &str, what: &str) -> Result<T, ParseError> {
    word.parse()
        .map_err(|_| ParseError::new(line_no, format!("invalid {what}: {word:?}")))
}

fn expect_keyword<'a>(
    lines: &mut Lines<'a>,
    keyword: &str,
) -> Result<(usize, &'a str), ParseError> {
    let (no, line) = lines
        .next_content()
        .ok_or_else(|| ParseError::new(0, format!("unexpected end of file, expected {keyword}")))?;
    let rest = line
        .strip_prefix(keyword)
        .ok_or_else(|| ParseError::new(no, format!("expected {keyword:?}, found {line:?}")))?;
    Ok((no, rest.trim()))
}

pub fn deserialize(text: &str) -> Result<MooreMachine, ParseError> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    let (no, header) = lines
        .next_content()
        .ok_or_else(|| ParseError::new(1, "empty file"))?;
    if header != HEADER {
        return Err(ParseError::new(no, format!("unknown header {header:?}")));
    }
    let (no, v) = expect_keyword(&mut lines, "states")?;
    let num_states: u32 = parse_field(no, v, "state count")?;
    let (no, v) = expect_keyword(&mut lines, "initial")?;
    let initial: StateId = parse_field(no, v, "initial state")?;
    let (no, v) = expect_keyword(&mut lines, "inputs")?;
    let inputs: u16 = parse_field(no, v, "input alphabet size")?;
    let (no, v) = expect_keyword(&mut lines, "outputs")?;
    let outputs: u16 = parse_field(no, v, "output alphabet size")?;
    if num_states == 0 || inputs == 0 || outputs == 0 {
        return Err(ParseError::new(no, "states, inputs and outputs must be positive"));
    }

    let mut lambda: Vec<Option<Symbol>> = vec![None; num_states as usize];
    let mut delta: Vec<Option<StateId>> = vec![None; num_states as usize * inputs as usize];
    let mut last_no = no;
    while let Some((no, line)) = lines.next_content() {
        last_no = no;
        let mut words = line.split_whitespace();
        match words.next() {
            Some("output") => {
                let q: u32 = parse_field(no, words.next().unwrap_or(""), "state")?;
                let o: Symbol = parse_field(no, words.next().unwrap_or(""), "output symbol")?;
                if q >= num_states {
                    return Err(ParseError::new(no, format!("state {q} out of range")));
                }
                if lambda[q as usize].replace(o).is_some() {
                    return Err(ParseError::new(no, format!("duplicate output for state {q}")));
                }
            }
            Some("trans") => {
                let q: u32 = parse_field(no, words.next().unwrap_or(""), "state")?;
                let s: Symbol = parse_field(no, words.next().unwrap_or(""), "input symbol")?;
                let t: u32 = parse_field(no, words.next().unwrap_or(""), "target state")?;
                if q >= num_states || t >= num_states {
                    return Err(ParseError::new(no, "state out of range".to_string()));
                }
                if s >= inputs {
                    return Err(ParseError::new(no, format!("input symbol {s} out of range")));
                }
                let slot = &mut delta[q as usize * inputs as usize + s as usize];
                if slot.replace(t).is_some() {
                    return Err(ParseError::new(no, format!("duplicate transition ({q}, {s})")));
                }
            }
            Some(other) => {
                return Err(ParseError::new(no, format!("unknown directive {other:?}")));
            }
            None => unreachable!("blank lines are skipped"),
        }
        if words.next().is_some() {
            return Err(ParseError::new(no, "trailing tokens on line"));
        }
    }

    let lambda: Vec<Symbol> = lambda
        .into_iter()
        .enumerate()
        .map(|(q, o)| o.ok_or_else(|| ParseError::new(last_no + 1, format!("missing output for state {q}"))))
        .collect::<Result<_, _>>()?;
    let delta: Vec<StateId> = delta
        .into_iter()
        .enumerate()
        .map(|(i, t)| {
            t.ok_or_else(|| {
                ParseError::new(
                    last_no + 1,
                    format!("missing transition ({}, {})", i / inputs as usize, i % inputs as usize),
                )
            })
        })
        .collect::<Result<_, _>>()?;

    MooreMachine::new(Alphabet::new(inputs), Alphabet::new(outputs), initial, delta, lambda)
        .map_err(|e| ParseError::new(last_no + 1, e.to_string()))
}
