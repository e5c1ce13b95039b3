//! Append-only JSON-lines cache of verdicts. The latest record per
//! `(shape, k, method)` wins; unreadable lines are skipped with a warning.

use std::collections::HashMap;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::PartitionShape;
use crate::verifier::{Outcome, Verdict, VerifyStats};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exhaustive,
    Sampled,
    Oracle,
    Replay,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub shape: PartitionShape,
    pub k: usize,
    pub verdict: Outcome,
    pub method: Method,
    #[serde(default)]
    pub stats: VerifyStats,
    pub version: String,
    /// Seconds since the Unix epoch; absent when timestamps are disabled.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

pub fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

impl CacheRecord {
    /// Record of an exhaustive run. A `Choosable` verdict from the verifier
    /// already implies the canonical stream ran to the end.
    pub fn exhaustive(shape: &PartitionShape, k: usize, verdict: &Verdict, timestamp: Option<u64>) -> Self {
        CacheRecord {
            shape: shape.clone(),
            k,
            verdict: verdict.outcome,
            method: Method::Exhaustive,
            stats: verdict.stats.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
        }
    }
}

type Key = (PartitionShape, usize, Method);

#[derive(Debug)]
pub struct Cache {
    path: PathBuf,
    /// Record plus its line order, for tie-breaking equal timestamps.
    records: HashMap<Key, (CacheRecord, usize)>,
    lines: usize,
    warnings: Vec<String>,
}

fn newer(a: &(CacheRecord, usize), b: &(CacheRecord, usize)) -> bool {
    (a.0.timestamp.unwrap_or(0), a.1) > (b.0.timestamp.unwrap_or(0), b.1)
}

impl Cache {
    /// Loads the cache; a missing file is an empty cache.
    pub fn open(path: &Path) -> Result<Cache> {
        let mut cache = Cache {
            path: path.to_path_buf(),
            records: HashMap::new(),
            lines: 0,
            warnings: Vec::new(),
        };
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(cache),
            Err(e) => return Err(Error::Io(format!("{}: {e}", path.display()))),
        };
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<CacheRecord>(line) {
                Ok(r) => cache.insert(r),
                Err(e) => cache
                    .warnings
                    .push(format!("{}:{}: skipped corrupt record: {e}", path.display(), i + 1)),
            }
        }
        Ok(cache)
    }

    fn insert(&mut self, r: CacheRecord) {
        let key = (r.shape.clone(), r.k, r.method);
        let entry = (r, self.lines);
        self.lines += 1;
        match self.records.get(&key) {
            Some(old) if !newer(&entry, old) => {}
            _ => {
                self.records.insert(key, entry);
            }
        }
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn get(&self, shape: &PartitionShape, k: usize, method: Method) -> Option<&CacheRecord> {
        self.records.get(&(shape.clone(), k, method)).map(|e| &e.0)
    }

    /// Latest record for `(shape, k)` across all methods.
    pub fn latest(&self, shape: &PartitionShape, k: usize) -> Option<&CacheRecord> {
        self.records
            .iter()
            .filter(|((s, kk, _), _)| s == shape && *kk == k)
            .map(|(_, e)| e)
            .reduce(|a, b| if newer(b, a) { b } else { a })
            .map(|e| &e.0)
    }

    /// Whether `(shape, k)` is proven k-choosable by an exhaustive run or an oracle.
    pub fn is_certified(&self, shape: &PartitionShape, k: usize) -> bool {
        [Method::Exhaustive, Method::Oracle]
            .iter()
            .any(|&m| self.get(shape, k, m).is_some_and(|r| r.verdict == Outcome::Choosable))
    }

    /// Appends one line and updates the in-memory view.
    pub fn put(&mut self, record: CacheRecord) -> Result<()> {
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path)?;
        let line = serde_json::to_string(&record).expect("plain data serializes");
        writeln!(f, "{line}")?;
        self.insert(record);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(k: usize, outcome: Outcome, ts: Option<u64>) -> CacheRecord {
        CacheRecord {
            shape: "2,2".parse().unwrap(),
            k,
            verdict: outcome,
            method: Method::Exhaustive,
            stats: VerifyStats::default(),
            version: "test".into(),
            timestamp: ts,
        }
    }

    #[test]
    fn put_then_get() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        let shape: PartitionShape = "2,2".parse().unwrap();
        let mut c = Cache::open(&path).unwrap();
        assert!(c.get(&shape, 2, Method::Exhaustive).is_none());
        c.put(rec(2, Outcome::Choosable, Some(5))).unwrap();
        assert_eq!(c.get(&shape, 2, Method::Exhaustive).unwrap().verdict, Outcome::Choosable);
        let again = Cache::open(&path).unwrap();
        assert_eq!(again.get(&shape, 2, Method::Exhaustive), c.get(&shape, 2, Method::Exhaustive));
        assert!(again.is_certified(&shape, 2));
        assert!(!again.is_certified(&shape, 1));
    }

    #[test]
    fn later_timestamp_wins_regardless_of_line_order() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        let shape: PartitionShape = "2,2".parse().unwrap();
        let mut c = Cache::open(&path).unwrap();
        c.put(rec(2, Outcome::Choosable, Some(20))).unwrap();
        c.put(rec(2, Outcome::BudgetExhausted, Some(10))).unwrap();
        let c = Cache::open(&path).unwrap();
        assert_eq!(c.latest(&shape, 2).unwrap().timestamp, Some(20));
    }

    #[test]
    fn without_timestamps_last_line_wins() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        let shape: PartitionShape = "2,2".parse().unwrap();
        let mut c = Cache::open(&path).unwrap();
        c.put(rec(2, Outcome::BudgetExhausted, None)).unwrap();
        c.put(rec(2, Outcome::Choosable, None)).unwrap();
        let c = Cache::open(&path).unwrap();
        assert_eq!(c.latest(&shape, 2).unwrap().verdict, Outcome::Choosable);
    }

    #[test]
    fn corrupt_lines_are_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        let good = serde_json::to_string(&rec(2, Outcome::Choosable, Some(1))).unwrap();
        std::fs::write(&path, format!("{{broken\n{good}\n[1,2]\n")).unwrap();
        let c = Cache::open(&path).unwrap();
        assert_eq!(c.warnings().len(), 2);
        assert!(c.is_certified(&"2,2".parse().unwrap(), 2));
    }
}
