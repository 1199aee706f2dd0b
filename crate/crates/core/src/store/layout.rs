//! On-disk byte layouts for the trace store. All integers little-endian.
//!
//! A store directory holds four files:
//!
//! ```text
//! manifest.bin   magic "DLDRSTR1", u32 version, u16 input size,
//!                u16 output size, u64 record count, u64 payload length,
//!                u64 fence count, u32 fence interval, u32 reserved
//! payload.bin    records sorted lexicographically by trace:
//!                u32 length, length x u16 symbols, u16 label
//! offsets.bin    u64 payload offset per record, in record order
//! index.bin      one fence per `fence interval` records:
//!                u64 ordinal, u64 offset, u32 key length, key symbols (u16)
//! ```

use crate::alphabet::{Alphabet, LabeledTrace, Symbol, Trace};
use crate::error::StoreError;
use std::fs::File;
use std::io::{Read, Write};
use std::os::unix::fs::FileExt;

pub const MAGIC: &[u8; 8] = b"DLDRSTR1";
pub const VERSION: u32 = 1;
/// One fence key is kept in memory per this many records.
pub const FENCE_EVERY: u32 = 256;

pub const MANIFEST_FILE: &str = "manifest.bin";
pub const PAYLOAD_FILE: &str = "payload.bin";
pub const OFFSETS_FILE: &str = "offsets.bin";
pub const INDEX_FILE: &str = "index.bin";

#[derive(Debug, Clone, Copy)]
pub struct Manifest {
    pub input: Alphabet,
    pub output: Alphabet,
    pub record_count: u64,
    pub payload_len: u64,
    pub fence_count: u64,
    pub fence_every: u32,
}

impl Manifest {
    pub fn write_to(&self, w: &mut impl Write) -> std::io::Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&self.input.size().to_le_bytes())?;
        w.write_all(&self.output.size().to_le_bytes())?;
        w.write_all(&self.record_count.to_le_bytes())?;
        w.write_all(&self.payload_len.to_le_bytes())?;
        w.write_all(&self.fence_count.to_le_bytes())?;
        w.write_all(&self.fence_every.to_le_bytes())?;
        w.write_all(&0u32.to_le_bytes())?;
        Ok(())
    }

    pub fn read_from(r: &mut impl Read) -> Result<Self, StoreError> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(StoreError::Corrupt("bad manifest magic".into()));
        }
        let version = read_u32(r)?;
        if version != VERSION {
            return Err(StoreError::Corrupt(format!("unsupported version {version}")));
        }
        let input = read_u16(r)?;
        let output = read_u16(r)?;
        if input == 0 || output == 0 {
            return Err(StoreError::Corrupt("zero-sized alphabet".into()));
        }
        let record_count = read_u64(r)?;
        let payload_len = read_u64(r)?;
        let fence_count = read_u64(r)?;
        let fence_every = read_u32(r)?;
        let _reserved = read_u32(r)?;
        if fence_every == 0 {
            return Err(StoreError::Corrupt("zero fence interval".into()));
        }
        Ok(Manifest {
            input: Alphabet::new(input),
            output: Alphabet::new(output),
            record_count,
            payload_len,
            fence_count,
            fence_every,
        })
    }
}

fn read_u16(r: &mut impl Read) -> std::io::Result<u16> {
    let mut b = [0u8; 2];
    r.read_exact(&mut b)?;
    Ok(u16::from_le_bytes(b))
}

fn read_u32(r: &mut impl Read) -> std::io::Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64(r: &mut impl Read) -> std::io::Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

/// Serialized size of one record.
pub fn record_len(trace: &Trace) -> u64 {
    4 + 2 * trace.len() as u64 + 2
}

pub fn write_record(w: &mut impl Write, rec: &LabeledTrace) -> std::io::Result<()> {
    w.write_all(&(rec.trace.len() as u32).to_le_bytes())?;
    for &s in rec.trace.symbols() {
        w.write_all(&s.to_le_bytes())?;
    }
    w.write_all(&rec.label.to_le_bytes())?;
    Ok(())
}

pub fn read_record(r: &mut impl Read) -> Result<LabeledTrace, StoreError> {
    let len = read_u32(r)? as usize;
    if len > (1 << 28) {
        return Err(StoreError::Corrupt(format!("unreasonable trace length {len}")));
    }
    let mut bytes = vec![0u8; 2 * len + 2];
    r.read_exact(&mut bytes)?;
    let mut symbols: Vec<Symbol> = Vec::with_capacity(len);
    for i in 0..len {
        symbols.push(u16::from_le_bytes([bytes[2 * i], bytes[2 * i + 1]]));
    }
    let label = u16::from_le_bytes([bytes[2 * len], bytes[2 * len + 1]]);
    Ok(LabeledTrace::new(Trace::new(symbols), label))
}

/// Buffered sequential reads over a shared file handle via `pread`, so
/// concurrent readers never contend on a seek position.
pub struct ChunkReader<'f> {
    file: &'f File,
    file_len: u64,
    pos: u64,
    chunk_start: u64,
    chunk: Vec<u8>,
}

const CHUNK: usize = 64 * 1024;

impl<'f> ChunkReader<'f> {
    pub fn new(file: &'f File, file_len: u64, pos: u64) -> Self {
        ChunkReader {
            file,
            file_len,
            pos,
            chunk_start: 0,
            chunk: Vec::new(),
        }
    }

    pub fn position(&self) -> u64 {
        self.pos
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.file_len
    }

    fn refill(&mut self, at: u64) -> std::io::Result<()> {
        let want = CHUNK.min((self.file_len - at) as usize);
        self.chunk.resize(want, 0);
        self.file.read_exact_at(&mut self.chunk, at)?;
        self.chunk_start = at;
        Ok(())
    }
}

impl Read for ChunkReader<'_> {
    fn read(&mut self, buf: &mut [u8]) -> std::io::Result<usize> {
        if self.pos >= self.file_len {
            return Ok(0);
        }
        let in_chunk = self.pos >= self.chunk_start
            && self.pos < self.chunk_start + self.chunk.len() as u64;
        if !in_chunk {
            self.refill(self.pos)?;
        }
        let start = (self.pos - self.chunk_start) as usize;
        let n = buf.len().min(self.chunk.len() - start);
        buf[..n].copy_from_slice(&self.chunk[start..start + n]);
        self.pos += n as u64;
        Ok(n)
    }
}
