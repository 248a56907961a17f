use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{ModelRecord, RequestParams};

#[derive(Serialize)]
struct KeyMaterial<'a> {
    model_id: &'a str,
    prompt: &'a str,
    request_params: &'a RequestParams,
}

/// Hex SHA-256 over the canonical JSON of (model id, prompt, parameters).
pub fn cache_key(model: &ModelRecord, prompt: &str) -> String {
    let material = KeyMaterial { model_id: &model.model_id, prompt, request_params: &model.request_params };
    let json = serde_json::to_vec(&material).expect("key material serializes");
    hex::encode(Sha256::digest(json))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub model_id: String,
    pub raw_reply: String,
    /// Seconds since the Unix epoch at which the reply was stored.
    pub timestamp: u64,
    #[serde(default)]
    pub provider_metadata: String,
}

impl CacheEntry {
    pub fn new(key: String, model_id: &str, raw_reply: String, provider_metadata: String) -> Self {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        Self { key, model_id: model_id.to_owned(), raw_reply, timestamp, provider_metadata }
    }
}

/// One JSON file per entry under `<root>/<key[..2]>/<key>.json`.
///
/// Writes go through a temporary file and a rename, so concurrent writers
/// of the same key never expose a partial file.
#[derive(Debug, Clone)]
pub struct CompletionCache {
    root: PathBuf,
}

impl CompletionCache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn path_for(&self, key: &str) -> PathBuf {
        self.root.join(&key[..2.min(key.len())]).join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> io::Result<Option<CacheEntry>> {
        match fs::read_to_string(self.path_for(key)) {
            Ok(text) => {
                serde_json::from_str(&text).map(Some).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))
            }
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e),
        }
    }

    pub fn put(&self, entry: &CacheEntry) -> io::Result<()> {
        let path = self.path_for(&entry.key);
        let dir = path.parent().expect("entry path has a parent");
        fs::create_dir_all(dir)?;
        let json = serde_json::to_string_pretty(entry).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
        let tmp = dir.join(format!(".{}.{}.tmp", entry.key, std::process::id()));
        let mut file = fs::File::create(&tmp)?;
        file.write_all(json.as_bytes())?;
        file.write_all(b"\n")?;
        file.sync_all()?;
        fs::rename(&tmp, &path)
    }
}
