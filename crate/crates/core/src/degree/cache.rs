//! Append-only JSON-lines cache of degree records.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::degree::record::{DegreeRecord, Method};
use crate::error::{Error, Result};

pub const CACHE_FILE: &str = "degrees.jsonl";

/// One cache line. Field order is fixed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub q: usize,
    pub n: usize,
    pub degree: u128,
    pub method: Method,
    /// Root seed of the protocol that produced the record.
    pub seed: Option<u64>,
    /// First prime among the agreeing runs.
    pub prime: Option<u64>,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

/// Contents of a cache file.
#[derive(Clone, Debug, Default, Serialize)]
pub struct CacheListing {
    pub path: String,
    pub entries: Vec<CacheEntry>,
    pub malformed_lines: usize,
}

#[derive(Clone, Debug)]
pub struct DegreeCache {
    path: PathBuf,
}

impl DegreeCache {
    pub fn new(dir: impl AsRef<Path>) -> Self {
        DegreeCache {
            path: dir.as_ref().join(CACHE_FILE),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Appends one line per record with a single write on an `O_APPEND` handle.
    pub fn append(&self, record: &DegreeRecord, seed: Option<u64>) -> Result<CacheEntry> {
        if let Some(dir) = self.path.parent() {
            fs::create_dir_all(dir).map_err(io_err)?;
        }
        let entry = CacheEntry {
            q: record.q,
            n: record.n,
            degree: record.degree,
            method: record.method,
            seed,
            prime: record.primes.first().copied(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        };
        let mut line = serde_json::to_string(&entry).map_err(|e| Error::Parse(e.to_string()))?;
        line.push('\n');
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .map_err(io_err)?;
        f.write_all(line.as_bytes()).map_err(io_err)?;
        Ok(entry)
    }

    pub fn inspect(&self) -> Result<CacheListing> {
        let mut listing = CacheListing {
            path: self.path.display().to_string(),
            ..Default::default()
        };
        let text = match fs::read_to_string(&self.path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(listing),
            Err(e) => return Err(io_err(e)),
        };
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            match serde_json::from_str::<CacheEntry>(line) {
                Ok(e) => listing.entries.push(e),
                Err(_) => listing.malformed_lines += 1,
            }
        }
        Ok(listing)
    }

    /// Latest entry for `(q, n, method, seed)` whose prime has `prime_bits` bits.
    pub fn lookup(
        &self,
        q: usize,
        n: usize,
        method: Method,
        seed: Option<u64>,
        prime_bits: Option<u32>,
    ) -> Result<Option<CacheEntry>> {
        Ok(self.inspect()?.entries.into_iter().rev().find(|e| {
            e.q == q
                && e.n == n
                && e.method == method
                && e.seed == seed
                && match (prime_bits, e.prime) {
                    (Some(b), Some(p)) => 64 - p.leading_zeros() == b,
                    (None, None) => true,
                    _ => false,
                }
        }))
    }

    /// Removes the cache file; returns the number of entries it held.
    pub fn clear(&self) -> Result<usize> {
        let n = self.inspect()?.entries.len();
        match fs::remove_file(&self.path) {
            Ok(()) => Ok(n),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(0),
            Err(e) => Err(io_err(e)),
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(n: usize, d: u128, prime: u64) -> DegreeRecord {
        DegreeRecord {
            q: 3,
            n,
            degree: d,
            method: Method::Probe,
            seeds: vec![1, 2],
            primes: vec![prime, prime + 2],
            agreement: 2,
        }
    }

    #[test]
    fn round_trip_and_field_order() {
        let dir = tempfile::tempdir().unwrap();
        let c = DegreeCache::new(dir.path());
        assert!(c.inspect().unwrap().entries.is_empty());
        let p = (1u64 << 60) + 33;
        c.append(&rec(1, 7, p), Some(5)).unwrap();
        c.append(&rec(2, 16, p), Some(5)).unwrap();
        let text = fs::read_to_string(c.path()).unwrap();
        let first = text.lines().next().unwrap();
        assert!(first.starts_with(r#"{"q":3,"n":1,"degree":7,"method":"probe","seed":5,"prime":"#));
        assert!(first.contains("\"timestamp\":"));
        let hit = c.lookup(3, 2, Method::Probe, Some(5), Some(61)).unwrap().unwrap();
        assert_eq!(hit.degree, 16);
        assert!(c.lookup(3, 2, Method::Probe, Some(6), Some(61)).unwrap().is_none());
        assert!(c.lookup(3, 2, Method::Probe, Some(5), Some(62)).unwrap().is_none());
        assert_eq!(c.clear().unwrap(), 2);
        assert!(c.inspect().unwrap().entries.is_empty());
    }

    #[test]
    fn malformed_lines_are_counted() {
        let dir = tempfile::tempdir().unwrap();
        let c = DegreeCache::new(dir.path());
        c.append(&rec(1, 7, 101), None).unwrap();
        let mut f = OpenOptions::new().append(true).open(c.path()).unwrap();
        f.write_all(b"not json\n").unwrap();
        let l = c.inspect().unwrap();
        assert_eq!((l.entries.len(), l.malformed_lines), (1, 1));
    }

    #[test]
    fn concurrent_appends_stay_whole() {
        let dir = tempfile::tempdir().unwrap();
        let c = DegreeCache::new(dir.path());
        std::thread::scope(|s| {
            for t in 0..8 {
                let c = c.clone();
                s.spawn(move || {
                    for n in 0..25 {
                        c.append(&rec(n, t, 101), Some(t as u64)).unwrap();
                    }
                });
            }
        });
        let l = c.inspect().unwrap();
        assert_eq!((l.entries.len(), l.malformed_lines), (200, 0));
    }
}
