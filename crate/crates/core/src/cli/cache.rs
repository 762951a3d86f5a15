//! On-disk cache of rendered outputs, keyed by a hash of the run
//! configuration and the tool version.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::output::TOOL_VERSION;

pub fn key(config: &impl serde::Serialize) -> String {
    let mut h = Sha256::new();
    h.update(TOOL_VERSION.as_bytes());
    h.update([0]);
    h.update(serde_json::to_vec(config).expect("configs serialize"));
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.out"))
    }

    pub fn get(&self, key: &str) -> Option<String> {
        fs::read_to_string(self.path(key)).ok()
    }

    /// Writes through a temporary file so readers never see a partial entry.
    pub fn put(&self, key: &str, contents: &str) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!("{key}.tmp{}", std::process::id()));
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, self.path(key))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_depends_on_every_field() {
        let a = key(&("profile", 10u32, "zd:1"));
        assert_eq!(a, key(&("profile", 10u32, "zd:1")));
        assert_ne!(a, key(&("profile", 11u32, "zd:1")));
        assert_eq!(a.len(), 64);
    }

    #[test]
    fn round_trip() {
        let tmp = tempfile::tempdir().unwrap();
        let dir = tmp.path().join("cache");
        let c = Cache::new(&dir);
        assert_eq!(c.get("k"), None);
        c.put("k", "n,value\n1,inf\n").unwrap();
        assert_eq!(c.get("k").as_deref(), Some("n,value\n1,inf\n"));
    }
}
