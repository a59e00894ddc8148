//! Content-addressed JSON store. Keys are SHA-256 digests of
//! `(group fingerprint, p, operation)`; a missing or unreadable entry is a
//! miss, so the cache never changes results.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Result;

#[derive(Clone, Debug, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Cache {
            dir: Some(dir.into()),
        }
    }

    pub fn from_dir(dir: Option<&PathBuf>) -> Self {
        Cache { dir: dir.cloned() }
    }

    pub fn is_enabled(&self) -> bool {
        self.dir.is_some()
    }

    pub fn key(fingerprint: &str, p: u8, operation: &str) -> String {
        let mut h = Sha256::new();
        for part in [fingerprint.as_bytes(), &[p], operation.as_bytes()] {
            h.update((part.len() as u64).to_le_bytes());
            h.update(part);
        }
        hex::encode(h.finalize())
    }

    fn path(dir: &Path, key: &str) -> PathBuf {
        dir.join(&key[..2]).join(format!("{key}.json"))
    }

    pub fn get<T: DeserializeOwned>(&self, key: &str) -> Option<T> {
        let dir = self.dir.as_ref()?;
        let text = fs::read_to_string(Cache::path(dir, key)).ok()?;
        serde_json::from_str(&text).ok()
    }

    /// Writes through a temporary file and a rename.
    pub fn put<T: Serialize>(&self, key: &str, value: &T) -> Result<()> {
        let Some(dir) = self.dir.as_ref() else {
            return Ok(());
        };
        let path = Cache::path(dir, key);
        let parent = path.parent().expect("entries live in a subdirectory");
        fs::create_dir_all(parent)?;
        let tmp = parent.join(format!(".{key}.{}.tmp", std::process::id()));
        let text =
            serde_json::to_string(value).map_err(|e| crate::error::Error::Io(e.to_string()))?;
        fs::write(&tmp, text)?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    pub fn get_or_compute<T: Serialize + DeserializeOwned>(
        &self,
        key: &str,
        compute: impl FnOnce() -> Result<T>,
    ) -> Result<T> {
        if let Some(v) = self.get(key) {
            return Ok(v);
        }
        let v = compute()?;
        // a failed write only costs a recomputation later
        let _ = self.put(key, &v);
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cell::Cell;

    #[test]
    fn keys_separate_their_parts() {
        assert_ne!(Cache::key("ab", 2, "c"), Cache::key("a", 2, "bc"));
        assert_eq!(Cache::key("g", 3, "op").len(), 64);
    }

    #[test]
    fn round_trip_and_hits() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path());
        let calls = Cell::new(0);
        let key = Cache::key("fp", 2, "dims");
        for _ in 0..2 {
            let v: Vec<u32> = cache
                .get_or_compute(&key, || {
                    calls.set(calls.get() + 1);
                    Ok(vec![1, 2])
                })
                .unwrap();
            assert_eq!(v, vec![1, 2]);
        }
        assert_eq!(calls.get(), 1);
    }

    #[test]
    fn corrupt_entries_are_misses() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path());
        let key = Cache::key("fp", 2, "x");
        cache.put(&key, &5u32).unwrap();
        fs::write(Cache::path(dir.path(), &key), "{").unwrap();
        assert_eq!(cache.get::<u32>(&key), None);
        assert_eq!(Cache::disabled().get::<u32>(&key), None);
    }
}
