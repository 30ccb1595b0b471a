//! Content-addressed result cache: one JSON file per key, written by rename.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use serde_json::Value;
use sha2::{Digest, Sha256};

/// Bumped whenever cached payloads would change shape or content.
pub const CACHE_TAG: &str = "scatterlab-cache-1";

pub struct Cache {
    dir: Option<PathBuf>,
    hits: usize,
    misses: usize,
}

impl Cache {
    pub fn open(flag: Option<PathBuf>) -> Cache {
        let dir = flag.or_else(|| std::env::var_os("SCATTERLAB_CACHE").filter(|v| !v.is_empty()).map(PathBuf::from));
        Cache { dir, hits: 0, misses: 0 }
    }

    pub fn key(parts: &Value) -> String {
        let mut h = Sha256::new();
        h.update(CACHE_TAG.as_bytes());
        h.update(parts.to_string().as_bytes());
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    fn get(&self, key: &str) -> Option<Vec<Value>> {
        let path = self.dir.as_ref()?.join(format!("{key}.json"));
        let text = fs::read_to_string(path).ok()?;
        serde_json::from_str(&text).ok()
    }

    fn put(&self, key: &str, vals: &[Value]) -> std::io::Result<()> {
        let Some(dir) = &self.dir else { return Ok(()) };
        fs::create_dir_all(dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(serde_json::to_string(vals)?.as_bytes())?;
        tmp.persist(dir.join(format!("{key}.json"))).map_err(|e| e.error)?;
        Ok(())
    }

    /// Cached payload for `parts`, computing and storing it on a miss.
    pub fn get_or<E: From<std::io::Error>>(
        &mut self,
        parts: &Value,
        compute: impl FnOnce() -> Result<Vec<Value>, E>,
    ) -> Result<Vec<Value>, E> {
        if self.dir.is_none() {
            return compute();
        }
        let key = Self::key(parts);
        if let Some(v) = self.get(&key) {
            self.hits += 1;
            return Ok(v);
        }
        self.misses += 1;
        let v = compute()?;
        self.put(&key, &v)?;
        Ok(v)
    }

    pub fn status(&self) -> &'static str {
        match (self.dir.is_some(), self.hits, self.misses) {
            (false, _, _) => "off",
            (true, 0, 0) => "unused",
            (true, _, 0) => "hit",
            (true, 0, _) => "miss",
            _ => "partial",
        }
    }
}
