//! Disk-backed, prefix-ordered store of labeled traces.
//!
//! Records live sorted on disk (lexicographically by trace, a prefix before
//! its extensions), so all extensions of a prefix form one contiguous range.
//! A sparse in-memory fence index locates the range start; queries then scan
//! O(k) records. Which k of many matches are returned is fixed as the
//! lexicographically first k, for reproducibility.
//!
//! The store is immutable after build; all read paths go through `pread`,
//! so concurrent readers are safe.

mod abbadingo;
mod builder;
mod layout;

pub use abbadingo::{read_abbadingo, write_abbadingo, AbbadingoReader};
pub use builder::{build_store, StoreBuilder, DEFAULT_SORT_BUFFER};

use crate::alphabet::{Alphabet, LabeledTrace, Symbol, Trace};
use crate::error::StoreError;
use layout::{ChunkReader, Manifest};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fs::File;
use std::io::BufReader;
use std::os::unix::fs::FileExt;
use std::path::{Path, PathBuf};

/// Result of a prefix query: at most `k` labeled traces extending the query
/// prefix, in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixQueryResult {
    pub items: Vec<LabeledTrace>,
}

struct Fence {
    ordinal: u64,
    offset: u64,
    key: Trace,
}

pub struct TraceStore {
    dir: PathBuf,
    manifest: Manifest,
    payload: File,
    offsets: File,
    fences: Vec<Fence>,
}

impl TraceStore {
    /// Opens an existing store directory.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self, StoreError> {
        let dir = dir.as_ref().to_path_buf();
        let manifest = {
            let mut f = BufReader::new(File::open(dir.join(layout::MANIFEST_FILE))?);
            Manifest::read_from(&mut f)?
        };
        let payload = File::open(dir.join(layout::PAYLOAD_FILE))?;
        let offsets = File::open(dir.join(layout::OFFSETS_FILE))?;
        if payload.metadata()?.len() != manifest.payload_len {
            return Err(StoreError::Corrupt("payload length mismatch".into()));
        }
        if offsets.metadata()?.len() != manifest.record_count * 8 {
            return Err(StoreError::Corrupt("offsets length mismatch".into()));
        }

        let mut fences = Vec::with_capacity(manifest.fence_count as usize);
        let index = File::open(dir.join(layout::INDEX_FILE))?;
        let index_len = index.metadata()?.len();
        let mut reader = ChunkReader::new(&index, index_len, 0);
        for _ in 0..manifest.fence_count {
            use std::io::Read;
            let mut b8 = [0u8; 8];
            reader.read_exact(&mut b8)?;
            let ordinal = u64::from_le_bytes(b8);
            reader.read_exact(&mut b8)?;
            let offset = u64::from_le_bytes(b8);
            let mut b4 = [0u8; 4];
            reader.read_exact(&mut b4)?;
            let key_len = u32::from_le_bytes(b4) as usize;
            let mut raw = vec![0u8; 2 * key_len];
            reader.read_exact(&mut raw)?;
            let key = Trace::new(
                (0..key_len)
                    .map(|i| u16::from_le_bytes([raw[2 * i], raw[2 * i + 1]]))
                    .collect(),
            );
            fences.push(Fence { ordinal, offset, key });
        }
        if !reader.at_end() {
            return Err(StoreError::Corrupt("trailing bytes in index".into()));
        }

        Ok(TraceStore {
            dir,
            manifest,
            payload,
            offsets,
            fences,
        })
    }

    pub fn record_count(&self) -> u64 {
        self.manifest.record_count
    }

    pub fn input_alphabet(&self) -> Alphabet {
        self.manifest.input
    }

    pub fn output_alphabet(&self) -> Alphabet {
        self.manifest.output
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Payload position of the last fence whose key is <= `t` (the range
    /// containing the first record >= `t` starts within one fence interval).
    fn seek_before(&self, t: &Trace) -> (u64, u64) {
        let i = self.fences.partition_point(|f| f.key <= *t);
        if i == 0 {
            (0, 0)
        } else {
            (self.fences[i - 1].ordinal, self.fences[i - 1].offset)
        }
    }

    /// Up to `k` stored traces that have `t` as a prefix (and, if `n` is
    /// set, length <= `n`), lexicographically first. Touches O(k) records
    /// plus one fence interval; never a full scan.
    pub fn prefix_query(
        &self,
        t: &Trace,
        n: Option<usize>,
        k: usize,
    ) -> Result<PrefixQueryResult, StoreError> {
        assert!(k >= 1, "prefix_query requires k >= 1");
        let mut items = Vec::new();
        let (_, offset) = self.seek_before(t);
        let mut reader = ChunkReader::new(&self.payload, self.manifest.payload_len, offset);
        while !reader.at_end() && items.len() < k {
            let rec = layout::read_record(&mut reader)?;
            if rec.trace < *t {
                continue;
            }
            if !rec.trace.starts_with(t) {
                break; // past the contiguous prefix range
            }
            if let Some(max_len) = n {
                if rec.trace.len() > max_len {
                    continue;
                }
            }
            items.push(rec);
        }
        Ok(PrefixQueryResult { items })
    }

    /// The stored label of exactly `t`, if present.
    pub fn lookup(&self, t: &Trace) -> Result<Option<Symbol>, StoreError> {
        let (_, offset) = self.seek_before(t);
        let mut reader = ChunkReader::new(&self.payload, self.manifest.payload_len, offset);
        while !reader.at_end() {
            let rec = layout::read_record(&mut reader)?;
            if rec.trace < *t {
                continue;
            }
            return Ok(if rec.trace == *t { Some(rec.label) } else { None });
        }
        Ok(None)
    }

    /// Sequential scan over all records in lexicographic order.
    pub fn scan(&self) -> Scan<'_> {
        Scan {
            reader: ChunkReader::new(&self.payload, self.manifest.payload_len, 0),
        }
    }

    /// Streams every record exactly once in a seed-determined pseudo-random
    /// order. Record ids pass through an affine permutation over the
    /// smallest power of two >= record_count, skipping out-of-range values;
    /// memory stays O(1) beyond the current record.
    pub fn random_stream(&self, seed: u64) -> RandomStream<'_> {
        let count = self.manifest.record_count;
        let modulus = count.max(1).next_power_of_two();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mult = rng.gen_range(0..modulus / 2) * 2 + 1; // odd, so coprime
        let add = rng.gen_range(0..modulus);
        RandomStream {
            store: self,
            modulus,
            mult,
            add,
            next: 0,
        }
    }

    fn record_at_ordinal(&self, ordinal: u64) -> Result<LabeledTrace, StoreError> {
        let mut b8 = [0u8; 8];
        self.offsets.read_exact_at(&mut b8, ordinal * 8)?;
        let offset = u64::from_le_bytes(b8);
        let end = if ordinal + 1 < self.manifest.record_count {
            self.offsets.read_exact_at(&mut b8, (ordinal + 1) * 8)?;
            u64::from_le_bytes(b8)
        } else {
            self.manifest.payload_len
        };
        let mut raw = vec![0u8; (end - offset) as usize];
        self.payload.read_exact_at(&mut raw, offset)?;
        layout::read_record(&mut &raw[..])
    }
}

pub struct Scan<'s> {
    reader: ChunkReader<'s>,
}

impl Iterator for Scan<'_> {
    type Item = Result<LabeledTrace, StoreError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.reader.at_end() {
            return None;
        }
        Some(layout::read_record(&mut self.reader))
    }
}

pub struct RandomStream<'s> {
    store: &'s TraceStore,
    modulus: u64,
    mult: u64,
    add: u64,
    next: u64,
}

impl Iterator for RandomStream<'_> {
    type Item = Result<LabeledTrace, StoreError>;

    fn next(&mut self) -> Option<Self::Item> {
        let count = self.store.manifest.record_count;
        while self.next < self.modulus {
            let j = self.next;
            self.next += 1;
            let id = (j.wrapping_mul(self.mult).wrapping_add(self.add)) & (self.modulus - 1);
            if id < count {
                return Some(self.store.record_at_ordinal(id));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{BTreeMap, HashSet};

    fn lt(symbols: &[u16], label: u16) -> LabeledTrace {
        LabeledTrace::new(Trace::new(symbols.to_vec()), label)
    }

    fn tmp_store(records: &[LabeledTrace]) -> (tempfile::TempDir, TraceStore) {
        let dir = tempfile::tempdir().unwrap();
        let store = build_store(
            dir.path().join("s"),
            Alphabet::new(2),
            Alphabet::new(4),
            records.iter().cloned(),
        )
        .unwrap();
        (dir, store)
    }

    #[test]
    fn empty_stream_gives_empty_store() {
        let (_d, store) = tmp_store(&[]);
        assert_eq!(store.record_count(), 0);
        assert!(store.scan().next().is_none());
        assert!(store.random_stream(1).next().is_none());
        assert_eq!(
            store.prefix_query(&Trace::empty(), None, 5).unwrap().items,
            vec![]
        );
    }

    #[test]
    fn duplicates_collapse() {
        let x = lt(&[0, 1], 2);
        let (_d, store) = tmp_store(&[x.clone(), x.clone(), x.clone()]);
        assert_eq!(store.record_count(), 1);
    }

    #[test]
    fn conflicting_duplicate_is_error() {
        let dir = tempfile::tempdir().unwrap();
        let err = build_store(
            dir.path().join("s"),
            Alphabet::new(2),
            Alphabet::new(4),
            vec![lt(&[0, 1], 2), lt(&[0, 1], 3)],
        )
        .unwrap_err();
        assert!(matches!(err, StoreError::LabelConflict(_)));
    }

    #[test]
    fn dedup_count_matches_set_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut records = Vec::new();
        for _ in 0..10_000 {
            let len = rng.gen_range(0..10);
            let t = Trace::new((0..len).map(|_| rng.gen_range(0..2u16)).collect());
            // Deterministic label so duplicates agree.
            let label = (t.len() % 4) as u16;
            records.push(LabeledTrace::new(t, label));
        }
        let oracle: HashSet<Trace> = records.iter().map(|r| r.trace.clone()).collect();
        let (_d, store) = tmp_store(&records);
        assert_eq!(store.record_count(), oracle.len() as u64);
    }

    #[test]
    fn prefix_query_example() {
        // store {01 -> 0, 010 -> 1, 10 -> 2}, t = 01, k = 10
        let (_d, store) = tmp_store(&[lt(&[0, 1], 0), lt(&[0, 1, 0], 1), lt(&[1, 0], 2)]);
        let got = store
            .prefix_query(&Trace::new(vec![0, 1]), None, 10)
            .unwrap();
        assert_eq!(got.items, vec![lt(&[0, 1], 0), lt(&[0, 1, 0], 1)]);
    }

    #[test]
    fn empty_prefix_matches_everything() {
        let recs = vec![lt(&[], 0), lt(&[0], 1), lt(&[1, 1], 2)];
        let (_d, store) = tmp_store(&recs);
        let got = store.prefix_query(&Trace::empty(), None, 100).unwrap();
        assert_eq!(got.items.len(), 3);
    }

    #[test]
    fn overlong_prefix_matches_nothing() {
        let (_d, store) = tmp_store(&[lt(&[0], 0), lt(&[1], 1)]);
        let got = store
            .prefix_query(&Trace::new(vec![0, 0, 0, 0]), None, 10)
            .unwrap();
        assert!(got.items.is_empty());
    }

    #[test]
    fn length_bound_filters() {
        let (_d, store) = tmp_store(&[lt(&[0], 0), lt(&[0, 0], 1), lt(&[0, 0, 0], 2)]);
        let got = store
            .prefix_query(&Trace::new(vec![0]), Some(2), 10)
            .unwrap();
        assert_eq!(got.items, vec![lt(&[0], 0), lt(&[0, 0], 1)]);
    }

    #[test]
    fn lookup_trivial_cases() {
        let (_d, store) = tmp_store(&[lt(&[0, 1], 3), lt(&[1], 0)]);
        assert_eq!(store.lookup(&Trace::new(vec![0, 1])).unwrap(), Some(3));
        assert_eq!(store.lookup(&Trace::new(vec![0])).unwrap(), None);
        assert_eq!(store.lookup(&Trace::empty()).unwrap(), None);
    }

    #[test]
    fn lookup_agrees_with_prefix_query_probes() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let mut records = Vec::new();
        for _ in 0..2_000 {
            let len = rng.gen_range(0..8);
            let t = Trace::new((0..len).map(|_| rng.gen_range(0..2u16)).collect());
            let label = (t.len() % 4) as u16;
            records.push(LabeledTrace::new(t, label));
        }
        let (_d, store) = tmp_store(&records);
        for _ in 0..1_000 {
            let len = rng.gen_range(0..8);
            let t = Trace::new((0..len).map(|_| rng.gen_range(0..2u16)).collect());
            let via_lookup = store.lookup(&t).unwrap();
            let via_query = store
                .prefix_query(&t, Some(t.len()), 1)
                .unwrap()
                .items
                .into_iter()
                .find(|r| r.trace == t)
                .map(|r| r.label);
            assert_eq!(via_lookup, via_query, "{t}");
        }
    }

    #[test]
    fn random_stream_single_record() {
        let (_d, store) = tmp_store(&[lt(&[0, 1], 2)]);
        let got: Vec<_> = store.random_stream(9).map(|r| r.unwrap()).collect();
        assert_eq!(got, vec![lt(&[0, 1], 2)]);
    }

    #[test]
    fn random_stream_is_permutation() {
        let records: Vec<LabeledTrace> = (0..100u32)
            .map(|i| {
                let bits: Vec<u16> = (0..8).map(|b| ((i >> b) & 1) as u16).collect();
                LabeledTrace::new(Trace::new(bits), (i % 4) as u16)
            })
            .collect();
        let (_d, store) = tmp_store(&records);
        let streamed: Vec<_> = store.random_stream(3).map(|r| r.unwrap()).collect();
        assert_eq!(streamed.len(), 100);
        let a: BTreeMap<_, _> = streamed.iter().map(|r| (r.trace.clone(), r.label)).collect();
        let b: BTreeMap<_, _> = records.iter().map(|r| (r.trace.clone(), r.label)).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn random_stream_seed_determinism() {
        let records: Vec<LabeledTrace> = (0..64u32)
            .map(|i| {
                let bits: Vec<u16> = (0..6).map(|b| ((i >> b) & 1) as u16).collect();
                LabeledTrace::new(Trace::new(bits), 0)
            })
            .collect();
        let (_d, store) = tmp_store(&records);
        let a: Vec<_> = store.random_stream(11).map(|r| r.unwrap()).collect();
        let b: Vec<_> = store.random_stream(11).map(|r| r.unwrap()).collect();
        let c: Vec<_> = store.random_stream(12).map(|r| r.unwrap()).collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn reopen_scans_identically() {
        let records = vec![lt(&[0], 0), lt(&[0, 1], 1), lt(&[1], 2)];
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s");
        let store =
            build_store(&path, Alphabet::new(2), Alphabet::new(4), records.clone()).unwrap();
        drop(store);
        let store = TraceStore::open(&path).unwrap();
        let got: Vec<_> = store.scan().map(|r| r.unwrap()).collect();
        assert_eq!(got, records);
    }

    #[test]
    fn out_of_alphabet_symbol_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let err = build_store(
            dir.path().join("s"),
            Alphabet::new(2),
            Alphabet::new(2),
            vec![lt(&[0, 5], 0)],
        )
        .unwrap_err();
        assert!(matches!(err, StoreError::Automaton(_)));
    }
}
