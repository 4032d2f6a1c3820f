//! On-disk memo of fiber trace tables: one JSON file per field, with a
//! format version and a checksum over the traces.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{count_all_fibers, CountBudget, CountMethod, FiberTraceTable};
use crate::error::{Error, Result};
use crate::ring::FiniteField;

pub const CACHE_VERSION: u32 = 1;
pub const CACHE_ENV: &str = "ASDLAB_CACHE";

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    table: FiberTraceTable,
}

/// A cache directory; `None` disables caching.
#[derive(Clone, Debug, Default)]
pub struct FiberCache {
    dir: Option<PathBuf>,
}

impl FiberCache {
    pub fn disabled() -> Self {
        FiberCache { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        FiberCache { dir: Some(dir.into()) }
    }

    /// `$ASDLAB_CACHE` when set, else the given default.
    pub fn from_env_or(default: Option<PathBuf>) -> Self {
        match std::env::var_os(CACHE_ENV) {
            Some(d) if !d.is_empty() => FiberCache::at(PathBuf::from(d)),
            _ => FiberCache { dir: default },
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn path_for(&self, p: u64, r: u32) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("fibers-p{p}-r{r}.json")))
    }

    /// Cached table if present and intact; damaged files are reported and
    /// ignored.
    pub fn load(&self, field: &FiniteField) -> Option<FiberTraceTable> {
        let path = self.path_for(field.p(), field.r())?;
        let text = fs::read_to_string(&path).ok()?;
        match serde_json::from_str::<CacheFile>(&text) {
            Ok(f) if f.version == CACHE_VERSION && f.table.checksum_ok() && f.table.matches_field(field) => Some(f.table),
            Ok(_) => {
                log::warn!("ignoring stale or corrupt cache file {}", path.display());
                None
            }
            Err(e) => {
                log::warn!("ignoring unreadable cache file {}: {e}", path.display());
                None
            }
        }
    }

    pub fn store(&self, table: &FiberTraceTable) -> Result<()> {
        let Some(path) = self.path_for(table.p, table.r) else { return Ok(()) };
        let io = |source| Error::Io { path: path.clone(), source };
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(io)?;
        }
        let body = serde_json::to_string(&CacheFile { version: CACHE_VERSION, table: table.clone() })?;
        // Write then rename so readers never see a partial file.
        let tmp = path.with_extension(format!("json.tmp{}", std::process::id()));
        fs::write(&tmp, body).map_err(|source| Error::Io { path: tmp.clone(), source })?;
        fs::rename(&tmp, &path).map_err(io)?;
        Ok(())
    }

    /// Cached table, or a fresh count (stored on success).
    pub fn get_or_count(&self, field: &FiniteField, method: Option<CountMethod>, budget: &CountBudget) -> Result<FiberTraceTable> {
        if let Some(t) = self.load(field) {
            return Ok(t);
        }
        let method = match method {
            Some(m) => m,
            None => budget.choose(field.q())?,
        };
        let table = count_all_fibers(field, method, budget)?;
        self.store(&table)?;
        Ok(table)
    }

    /// Files currently in the cache, sorted.
    pub fn list(&self) -> Result<Vec<PathBuf>> {
        let Some(dir) = &self.dir else { return Ok(Vec::new()) };
        if !dir.exists() {
            return Ok(Vec::new());
        }
        let mut out: Vec<PathBuf> = fs::read_dir(dir)
            .map_err(|source| Error::Io { path: dir.clone(), source })?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.starts_with("fibers-") && n.ends_with(".json")))
            .collect();
        out.sort();
        Ok(out)
    }

    /// Removes every cache file; returns how many were deleted.
    pub fn clear(&self) -> Result<usize> {
        let files = self.list()?;
        for f in &files {
            fs::remove_file(f).map_err(|source| Error::Io { path: f.clone(), source })?;
        }
        Ok(files.len())
    }
}
