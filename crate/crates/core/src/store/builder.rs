//! Store construction by external sorting: input records are buffered up to
//! a configurable byte budget, spilled as sorted runs to temporary files,
//! then k-way merged with de-duplication. Peak memory is bounded by the
//! buffer, not the dataset.

use super::layout::{self, Manifest, FENCE_EVERY};
use super::TraceStore;
use crate::alphabet::{Alphabet, LabeledTrace};
use crate::error::StoreError;
use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

pub const DEFAULT_SORT_BUFFER: usize = 32 * 1024 * 1024;

pub struct StoreBuilder {
    dir: PathBuf,
    input: Alphabet,
    output: Alphabet,
    sort_buffer_bytes: usize,
    buf: Vec<LabeledTrace>,
    buf_bytes: usize,
    runs: Vec<BufReader<File>>,
}

impl StoreBuilder {
    /// Starts a build into `dir`, which is created if missing. Any existing
    /// store files in it are overwritten on `finish`.
    pub fn new(dir: impl AsRef<Path>, input: Alphabet, output: Alphabet) -> Result<Self, StoreError> {
        let dir = dir.as_ref().to_path_buf();
        std::fs::create_dir_all(&dir)?;
        Ok(StoreBuilder {
            dir,
            input,
            output,
            sort_buffer_bytes: DEFAULT_SORT_BUFFER,
            buf: Vec::new(),
            buf_bytes: 0,
            runs: Vec::new(),
        })
    }

    pub fn sort_buffer_bytes(mut self, bytes: usize) -> Self {
        self.sort_buffer_bytes = bytes.max(64 * 1024);
        self
    }

    pub fn push(&mut self, rec: LabeledTrace) -> Result<(), StoreError> {
        rec.trace.valid_under(&self.input)?;
        self.output.check(rec.label)?;
        self.buf_bytes += 48 + 2 * rec.trace.len();
        self.buf.push(rec);
        if self.buf_bytes >= self.sort_buffer_bytes {
            self.spill()?;
        }
        Ok(())
    }

    fn spill(&mut self) -> Result<(), StoreError> {
        if self.buf.is_empty() {
            return Ok(());
        }
        self.buf.sort_unstable();
        let mut file = tempfile::tempfile_in(&self.dir)?;
        {
            let mut w = BufWriter::new(&mut file);
            let mut prev: Option<&LabeledTrace> = None;
            for rec in &self.buf {
                if let Some(p) = prev {
                    if p.trace == rec.trace {
                        if p.label != rec.label {
                            return Err(StoreError::LabelConflict(rec.trace.clone()));
                        }
                        continue;
                    }
                }
                layout::write_record(&mut w, rec)?;
                prev = Some(rec);
            }
            w.flush()?;
        }
        file.seek(SeekFrom::Start(0))?;
        self.runs.push(BufReader::new(file));
        self.buf.clear();
        self.buf_bytes = 0;
        Ok(())
    }

    /// Merges all runs, writes the store files, and opens the result.
    pub fn finish(mut self) -> Result<TraceStore, StoreError> {
        self.spill()?;

        let payload_path = self.dir.join(layout::PAYLOAD_FILE);
        let offsets_path = self.dir.join(layout::OFFSETS_FILE);
        let index_path = self.dir.join(layout::INDEX_FILE);
        let manifest_path = self.dir.join(layout::MANIFEST_FILE);

        let mut payload = BufWriter::new(File::create(&payload_path)?);
        let mut offsets = BufWriter::new(File::create(&offsets_path)?);
        let mut index = BufWriter::new(File::create(&index_path)?);

        // Heap entries compare by record first, so equal traces from
        // different runs pop adjacently.
        let mut heap: BinaryHeap<Reverse<(LabeledTrace, usize)>> = BinaryHeap::new();
        for (i, run) in self.runs.iter_mut().enumerate() {
            if let Some(rec) = next_record(run)? {
                heap.push(Reverse((rec, i)));
            }
        }

        let mut count: u64 = 0;
        let mut payload_len: u64 = 0;
        let mut fence_count: u64 = 0;
        let mut prev: Option<LabeledTrace> = None;
        while let Some(Reverse((rec, run_idx))) = heap.pop() {
            if let Some(next) = next_record(&mut self.runs[run_idx])? {
                heap.push(Reverse((next, run_idx)));
            }
            if let Some(p) = &prev {
                if p.trace == rec.trace {
                    if p.label != rec.label {
                        return Err(StoreError::LabelConflict(rec.trace));
                    }
                    continue;
                }
            }
            if count % FENCE_EVERY as u64 == 0 {
                index.write_all(&count.to_le_bytes())?;
                index.write_all(&payload_len.to_le_bytes())?;
                index.write_all(&(rec.trace.len() as u32).to_le_bytes())?;
                for &s in rec.trace.symbols() {
                    index.write_all(&s.to_le_bytes())?;
                }
                fence_count += 1;
            }
            offsets.write_all(&payload_len.to_le_bytes())?;
            layout::write_record(&mut payload, &rec)?;
            payload_len += layout::record_len(&rec.trace);
            count += 1;
            prev = Some(rec);
        }
        payload.flush()?;
        offsets.flush()?;
        index.flush()?;
        drop(self.runs);

        let manifest = Manifest {
            input: self.input,
            output: self.output,
            record_count: count,
            payload_len,
            fence_count,
            fence_every: FENCE_EVERY,
        };
        let mut mf = BufWriter::new(File::create(&manifest_path)?);
        manifest.write_to(&mut mf)?;
        mf.flush()?;

        TraceStore::open(&self.dir)
    }
}

fn next_record(run: &mut BufReader<File>) -> Result<Option<LabeledTrace>, StoreError> {
    use std::io::BufRead;
    if run.fill_buf()?.is_empty() {
        return Ok(None);
    }
    Ok(Some(layout::read_record(run)?))
}

/// Builds a store in one call from any record iterator.
pub fn build_store<I>(
    dir: impl AsRef<Path>,
    input: Alphabet,
    output: Alphabet,
    records: I,
) -> Result<TraceStore, StoreError>
where
    I: IntoIterator<Item = LabeledTrace>,
{
    let mut builder = StoreBuilder::new(dir, input, output)?;
    for rec in records {
        builder.push(rec)?;
    }
    builder.finish()
}
