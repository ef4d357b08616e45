//! File-backed result cache: one JSON file per key under `$KCH_CACHE`
//! (default `./.kch-cache`).

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use log::{debug, warn};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// What a command produced: the human-readable text and the JSON result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Payload {
    pub text: String,
    pub result: Value,
}

pub struct ResultCache {
    dir: Option<PathBuf>,
}

impl ResultCache {
    pub fn from_env(enabled: bool) -> ResultCache {
        let dir = enabled.then(|| std::env::var_os("KCH_CACHE").map(PathBuf::from).unwrap_or_else(|| PathBuf::from(".kch-cache")));
        ResultCache { dir }
    }

    /// Content address of a request.
    pub fn key(request: &Value) -> String {
        let digest = Sha256::digest(request.to_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn get(&self, key: &str) -> Option<Payload> {
        let path = self.dir.as_ref()?.join(format!("{key}.json"));
        let text = fs::read_to_string(&path).ok()?;
        match serde_json::from_str(&text) {
            Ok(p) => {
                debug!("cache hit {}", path.display());
                Some(p)
            }
            Err(e) => {
                warn!("ignoring unreadable cache entry {}: {e}", path.display());
                None
            }
        }
    }

    /// Stores `payload`; failures only cost the next run a recomputation.
    pub fn put(&self, key: &str, payload: &Payload) {
        let Some(dir) = &self.dir else { return };
        if let Err(e) = self.write(dir, key, payload) {
            warn!("could not write cache entry {key}: {e}");
        }
    }

    fn write(&self, dir: &PathBuf, key: &str, payload: &Payload) -> std::io::Result<()> {
        fs::create_dir_all(dir)?;
        let tmp = dir.join(format!(".{key}.{}.tmp", std::process::id()));
        let mut f = fs::File::create(&tmp)?;
        f.write_all(serde_json::to_string(payload)?.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, dir.join(format!("{key}.json")))
    }
}
