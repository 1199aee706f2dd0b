//! Abbadingo-style text interchange for trace datasets, shared between the
//! generator and store ingestion.
//!
//! ```text
//! <record count> <input alphabet size>
//! <label> <length> <symbol> <symbol> ...
//! ```

use crate::alphabet::{LabeledTrace, Symbol, Trace};
use crate::error::{ParseError, StoreError};
use std::io::{BufRead, Write};

pub fn write_abbadingo(
    w: &mut impl Write,
    input_size: u16,
    records: &[LabeledTrace],
) -> std::io::Result<()> {
    writeln!(w, "{} {}", records.len(), input_size)?;
    for rec in records {
        write!(w, "{} {}", rec.label, rec.trace.len())?;
        for &s in rec.trace.symbols() {
            write!(w, " {s}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Streaming reader over an Abbadingo text file.
pub struct AbbadingoReader<R> {
    lines: std::io::Lines<R>,
    line_no: usize,
    remaining: u64,
    pub input_size: u16,
}

impl<R: BufRead> AbbadingoReader<R> {
    pub fn new(reader: R) -> Result<Self, StoreError> {
        let mut lines = reader.lines();
        let header = lines
            .next()
            .ok_or_else(|| ParseError::new(1, "missing header"))?
            .map_err(StoreError::Io)?;
        let mut words = header.split_whitespace();
        let count: u64 = words
            .next()
            .and_then(|w| w.parse().ok())
            .ok_or_else(|| ParseError::new(1, "header must be: <count> <alphabet size>"))?;
        let input_size: u16 = words
            .next()
            .and_then(|w| w.parse().ok())
            .ok_or_else(|| ParseError::new(1, "header must be: <count> <alphabet size>"))?;
        Ok(AbbadingoReader {
            lines,
            line_no: 1,
            remaining: count,
            input_size,
        })
    }
}

impl<R: BufRead> Iterator for AbbadingoReader<R> {
    type Item = Result<LabeledTrace, StoreError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.remaining == 0 {
            return None;
        }
        let line = match self.lines.next() {
            Some(Ok(l)) => l,
            Some(Err(e)) => return Some(Err(StoreError::Io(e))),
            None => {
                return Some(Err(ParseError::new(
                    self.line_no + 1,
                    format!("{} records missing", self.remaining),
                )
                .into()))
            }
        };
        self.line_no += 1;
        self.remaining -= 1;
        let no = self.line_no;
        let mut words = line.split_whitespace();
        let parse = |w: Option<&str>, what: &str| -> Result<u64, StoreError> {
            w.and_then(|w| w.parse().ok())
                .ok_or_else(|| ParseError::new(no, format!("invalid {what}")).into())
        };
        let rec = (|| {
            let label = parse(words.next(), "label")? as Symbol;
            let len = parse(words.next(), "length")? as usize;
            let mut symbols = Vec::with_capacity(len);
            for _ in 0..len {
                symbols.push(parse(words.next(), "symbol")? as Symbol);
            }
            if words.next().is_some() {
                return Err(ParseError::new(no, "trailing symbols on line").into());
            }
            Ok(LabeledTrace::new(Trace::new(symbols), label))
        })();
        Some(rec)
    }
}

/// Reads a whole Abbadingo file into memory.
pub fn read_abbadingo(reader: impl BufRead) -> Result<(u16, Vec<LabeledTrace>), StoreError> {
    let r = AbbadingoReader::new(reader)?;
    let input_size = r.input_size;
    let records: Result<Vec<_>, _> = r.collect();
    Ok((input_size, records?))
}
