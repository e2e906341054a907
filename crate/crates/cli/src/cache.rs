//! On-disk cache of `solve` verdicts.
//!
//! One file per graph file content, named `<sha256 hex>.json`:
//!
//! ```json
//! {"format": "snakegraph-solve-cache", "version": 1, "sha256": "...",
//!  "winnable": false, "witness": [0, 2], "nodes": 1234}
//! ```
//!
//! Entries with another format or version are ignored and overwritten.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const CACHE_FORMAT: &str = "snakegraph-solve-cache";
pub const CACHE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub format: String,
    pub version: u32,
    pub sha256: String,
    pub winnable: bool,
    pub witness: Option<(usize, usize)>,
    pub nodes: u64,
}

pub fn content_hash(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub struct SolveCache {
    dir: PathBuf,
}

impl SolveCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        SolveCache { dir: dir.into() }
    }

    fn path(&self, hash: &str) -> PathBuf {
        self.dir.join(format!("{hash}.json"))
    }

    /// A usable entry for `hash`, if any. Unreadable entries count as misses.
    pub fn get(&self, hash: &str) -> Option<CacheEntry> {
        let text = fs::read_to_string(self.path(hash)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        (entry.format == CACHE_FORMAT && entry.version == CACHE_VERSION && entry.sha256 == hash)
            .then_some(entry)
    }

    pub fn put(&self, entry: &CacheEntry) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!("{}.tmp", entry.sha256));
        fs::write(&tmp, serde_json::to_string_pretty(entry)? + "\n")?;
        fs::rename(tmp, self.path(&entry.sha256))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_digest() {
        assert_eq!(
            content_hash(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn round_trip_and_version_check() {
        let dir = tempfile::tempdir().unwrap();
        let cache = SolveCache::new(dir.path().join("c"));
        let hash = content_hash(b"0 1\n1 2\n");
        assert_eq!(cache.get(&hash), None);
        let mut entry = CacheEntry {
            format: CACHE_FORMAT.into(),
            version: CACHE_VERSION,
            sha256: hash.clone(),
            winnable: false,
            witness: Some((0, 2)),
            nodes: 7,
        };
        cache.put(&entry).unwrap();
        assert_eq!(cache.get(&hash), Some(entry.clone()));
        entry.version = 99;
        cache.put(&entry).unwrap();
        assert_eq!(cache.get(&hash), None);
    }
}
