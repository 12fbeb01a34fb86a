//! On-disk memo tables for fusion rings.
//!
//! One file per ring, named after a SHA-256 of the ring definition. A file whose
//! stored hash or format does not match is ignored and later overwritten.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use wreathcat_core::{FusionRing, Label};

const FORMAT: u64 = 1;

pub struct RingCache {
    path: PathBuf,
    hash: String,
}

type Entry = ((Label, Label), Vec<(Label, u64)>);

impl RingCache {
    /// `definition` is the text that determines the ring: a file's contents or
    /// the built-in name.
    pub fn new(dir: &Path, definition: &str) -> Self {
        let hash = hex::encode(Sha256::digest(definition.as_bytes()));
        let path = dir.join(format!("ring-{}.json", &hash[..16]));
        Self { path, hash }
    }

    /// Seeds the ring's memo table. Missing, stale or malformed files are skipped.
    pub fn load(&self, ring: &FusionRing) -> usize {
        let Ok(text) = fs::read_to_string(&self.path) else { return 0 };
        let Ok(doc) = serde_json::from_str::<Value>(&text) else { return 0 };
        if doc["format"].as_u64() != Some(FORMAT) || doc["hash"].as_str() != Some(self.hash.as_str()) {
            return 0;
        }
        let Some(entries) = doc["entries"].as_array().and_then(|e| parse_entries(e, ring)) else { return 0 };
        let n = entries.len();
        ring.preload(entries);
        n
    }

    /// Writes the memo table through a temporary file.
    pub fn store(&self, ring: &FusionRing) -> std::io::Result<()> {
        let entries: Vec<Value> = ring
            .memo_entries()
            .into_iter()
            .map(|((a, b), d)| json!([a.0, b.0, d.iter().map(|(c, m)| json!([c.0, m])).collect::<Vec<_>>()]))
            .collect();
        let doc = json!({"format": FORMAT, "hash": self.hash, "entries": entries});
        if let Some(dir) = self.path.parent() {
            fs::create_dir_all(dir)?;
        }
        let tmp = self.path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_vec(&doc)?)?;
        fs::rename(tmp, &self.path)
    }
}

fn label(v: &Value, ring: &FusionRing) -> Option<Label> {
    let l = Label(u32::try_from(v.as_u64()?).ok()?);
    ring.contains(l).then_some(l)
}

fn parse_entries(entries: &[Value], ring: &FusionRing) -> Option<Vec<Entry>> {
    entries
        .iter()
        .map(|e| {
            let e = e.as_array()?;
            let (a, b) = (label(e.first()?, ring)?, label(e.get(1)?, ring)?);
            let dec = e
                .get(2)?
                .as_array()?
                .iter()
                .map(|t| Some((label(t.get(0)?, ring)?, t.get(1)?.as_u64()?)))
                .collect::<Option<Vec<_>>>()?;
            Some(((a, b), dec))
        })
        .collect()
}
