//! Append-only store of representability bitsets.
//!
//! The data file starts with [`MAGIC`] and holds records of
//! `key hash | lo | hi | word count | words`, all little-endian `u64`.
//! A JSON sidecar (`<path>.idx.json`) maps each hash to its full key so a
//! hit is only served when `(m, coefficients, lo, hi)` match exactly.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use mgonal::sieve::Bitset;
use mgonal::{represents_range, MGonalForm, RangeBits};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub const MAGIC: &[u8; 8] = b"MGCACHE1";
const RECORD_HEADER: usize = 32;

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache file does not start with the expected header")]
    BadMagic,
    #[error("record at byte {offset} is truncated")]
    Truncated { offset: usize },
    #[error("record at byte {offset} is malformed: {reason}")]
    Malformed { offset: usize, reason: &'static str },
    #[error("cached bitset for {key} differs from recomputation")]
    Mismatch { key: String },
    #[error("cache index: {0}")]
    Index(#[from] serde_json::Error),
    #[error("cache io: {0}")]
    Io(#[from] io::Error),
    #[error(transparent)]
    Engine(#[from] mgonal::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheKey {
    pub m: u64,
    pub coeffs: Vec<u64>,
    pub lo: u64,
    pub hi: u64,
}

impl CacheKey {
    pub fn new(form: &MGonalForm, lo: u64, hi: u64) -> Self {
        Self {
            m: form.order(),
            coeffs: form.coeffs().to_vec(),
            lo,
            hi,
        }
    }

    /// First eight bytes of SHA-256 over the decimal rendering of the key.
    pub fn hash(&self) -> u64 {
        let coeffs: Vec<String> = self.coeffs.iter().map(u64::to_string).collect();
        let text = format!("{}|{}|{}|{}", self.m, coeffs.join(","), self.lo, self.hi);
        let digest = Sha256::digest(text.as_bytes());
        u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
    }
}

impl std::fmt::Display for CacheKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let coeffs: Vec<String> = self.coeffs.iter().map(u64::to_string).collect();
        write!(
            f,
            "<{}>_{} [{}, {}]",
            coeffs.join(","),
            self.m,
            self.lo,
            self.hi
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub hash: u64,
    pub bits: RangeBits,
}

fn word_count(lo: u64, hi: u64) -> u64 {
    (hi - lo) / 64 + 1
}

pub fn encode_record(hash: u64, bits: &RangeBits, out: &mut Vec<u8>) {
    let words = bits.bits.words();
    for v in [hash, bits.lo, bits.hi, words.len() as u64] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for w in words {
        out.extend_from_slice(&w.to_le_bytes());
    }
}

fn read_u64(bytes: &[u8], at: usize) -> u64 {
    u64::from_le_bytes(bytes[at..at + 8].try_into().expect("caller checked length"))
}

/// Parses a whole data file. Never panics on malformed input.
pub fn decode_records(bytes: &[u8]) -> Result<Vec<(usize, Record)>, CacheError> {
    let body = bytes
        .strip_prefix(MAGIC.as_slice())
        .ok_or(CacheError::BadMagic)?;
    let mut out = Vec::new();
    let mut at = 0;
    while at < body.len() {
        let offset = at + MAGIC.len();
        if body.len() - at < RECORD_HEADER {
            return Err(CacheError::Truncated { offset });
        }
        let [hash, lo, hi, n] = [0, 8, 16, 24].map(|k| read_u64(body, at + k));
        if lo > hi {
            return Err(CacheError::Malformed {
                offset,
                reason: "lo > hi",
            });
        }
        if n != word_count(lo, hi) {
            return Err(CacheError::Malformed {
                offset,
                reason: "word count does not match range",
            });
        }
        let avail = (body.len() - at - RECORD_HEADER) / 8;
        if n > avail as u64 {
            return Err(CacheError::Truncated { offset });
        }
        let start = at + RECORD_HEADER;
        let words = (0..n as usize)
            .map(|i| read_u64(body, start + 8 * i))
            .collect();
        let bits = Bitset::from_words(hi - lo + 1, words).ok_or(CacheError::Malformed {
            offset,
            reason: "bits set past the range end",
        })?;
        out.push((
            offset,
            Record {
                hash,
                bits: RangeBits { lo, hi, bits },
            },
        ));
        at = start + 8 * n as usize;
    }
    Ok(out)
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct Index {
    entries: Vec<IndexEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct IndexEntry {
    hash: String,
    key: CacheKey,
    offset: usize,
}

/// Shared by sweep workers; new entries are buffered and written by
/// [`Cache::flush`].
#[derive(Debug)]
pub struct Cache {
    path: PathBuf,
    verify: bool,
    known: HashMap<CacheKey, RangeBits>,
    index: Index,
    pending: Mutex<Vec<(CacheKey, RangeBits)>>,
    hits: Mutex<u64>,
}

fn index_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".idx.json");
    PathBuf::from(s)
}

impl Cache {
    pub fn open(path: impl Into<PathBuf>, verify: bool) -> Result<Self, CacheError> {
        let path = path.into();
        let mut known = HashMap::new();
        let mut index = Index::default();
        if path.exists() {
            let records = decode_records(&fs::read(&path)?)?;
            let by_hash: HashMap<u64, RangeBits> =
                records.into_iter().map(|(_, r)| (r.hash, r.bits)).collect();
            let idx = index_path(&path);
            if idx.exists() {
                index = serde_json::from_slice(&fs::read(&idx)?)?;
            }
            for e in &index.entries {
                if let Some(bits) = by_hash.get(&e.key.hash()) {
                    if (bits.lo, bits.hi) == (e.key.lo, e.key.hi) {
                        known.insert(e.key.clone(), bits.clone());
                    }
                }
            }
        }
        Ok(Self {
            path,
            verify,
            known,
            index,
            pending: Mutex::new(Vec::new()),
            hits: Mutex::new(0),
        })
    }

    pub fn len(&self) -> usize {
        self.known.len()
    }

    pub fn is_empty(&self) -> bool {
        self.known.is_empty()
    }

    pub fn hits(&self) -> u64 {
        *self.hits.lock().expect("cache lock")
    }

    /// Representability of `[lo, hi]`, from the cache when present.
    pub fn range(&self, form: &MGonalForm, lo: u64, hi: u64) -> Result<RangeBits, CacheError> {
        let key = CacheKey::new(form, lo, hi);
        if let Some(bits) = self.known.get(&key) {
            *self.hits.lock().expect("cache lock") += 1;
            if self.verify && represents_range(form, lo, hi)? != *bits {
                return Err(CacheError::Mismatch {
                    key: key.to_string(),
                });
            }
            return Ok(bits.clone());
        }
        let bits = represents_range(form, lo, hi)?;
        self.pending
            .lock()
            .expect("cache lock")
            .push((key, bits.clone()));
        Ok(bits)
    }

    /// Appends buffered entries and rewrites the index.
    pub fn flush(&mut self) -> Result<(), CacheError> {
        let mut pending = std::mem::take(self.pending.get_mut().expect("cache lock"));
        pending.sort_by_key(|(k, _)| (k.hash(), k.lo));
        pending.dedup_by(|a, b| a.0 == b.0);
        pending.retain(|(k, _)| !self.known.contains_key(k));
        if pending.is_empty() {
            return Ok(());
        }
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        let base = file.metadata()?.len() as usize;
        let mut buf = Vec::new();
        if base == 0 {
            buf.extend_from_slice(MAGIC);
        }
        for (key, bits) in pending {
            let hash = key.hash();
            self.index.entries.push(IndexEntry {
                hash: format!("{hash:016x}"),
                key: key.clone(),
                offset: base + buf.len(),
            });
            encode_record(hash, &bits, &mut buf);
            self.known.insert(key, bits);
        }
        file.write_all(&buf)?;
        file.sync_data()?;
        let idx = index_path(&self.path);
        let tmp = idx.with_extension("json.tmp");
        let mut f = File::create(&tmp)?;
        f.write_all(&serde_json::to_vec_pretty(&self.index)?)?;
        f.sync_all()?;
        fs::rename(tmp, idx)?;
        Ok(())
    }
}
