//! Content-addressed on-disk cache for cohomology pieces.
//!
//! Layout: `<root>/<first two hex chars>/<sha256>.json`. The root is
//! `$CHIRALIS_CACHE` when set, else `$HOME/.cache/chiralis`. Entries are written to a
//! temporary file and renamed into place, so readers see whole files only.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::algebra::State;
use crate::cohomology::{cohomology_at, subspace, ComplexSpec, GradedPieceKey};
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CacheEntry {
    pub schema_version: u32,
    pub hash: String,
    pub key: GradedPieceKey,
    /// subspace basis, printed
    pub basis: Vec<String>,
    /// target monomials of d, printed
    pub targets: Vec<String>,
    /// d on the basis as (row, column, "num/den") triplets
    pub matrix: Vec<(usize, usize, String)>,
    pub report: Value,
    /// sha256 over the fields above
    pub checksum: String,
}

#[derive(Clone, Debug)]
pub struct Cache {
    pub root: PathBuf,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CacheInfo {
    pub root: String,
    pub entries: usize,
    pub bytes: u64,
}

fn sha_hex(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0u8]);
    }
    hex::encode(h.finalize())
}

/// Cache key for one piece of one complex.
pub fn piece_hash(spec: &ComplexSpec, key: GradedPieceKey) -> String {
    let k = serde_json::to_string(&key).expect("key serializes");
    sha_hex(&[&SCHEMA_VERSION.to_string(), &spec.fingerprint(), &k])
}

impl CacheEntry {
    fn payload_checksum(&self) -> String {
        let body = serde_json::to_string(&(
            self.schema_version,
            &self.hash,
            &self.key,
            &self.basis,
            &self.targets,
            &self.matrix,
            &self.report,
        ))
        .expect("entry serializes");
        sha_hex(&[&body])
    }
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl Cache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Cache { root: root.into() }
    }

    pub fn from_env() -> Self {
        match std::env::var_os("CHIRALIS_CACHE") {
            Some(p) if !p.is_empty() => Cache::new(p),
            _ => match std::env::var_os("HOME") {
                Some(h) => Cache::new(PathBuf::from(h).join(".cache").join("chiralis")),
                None => Cache::new("cache"),
            },
        }
    }

    pub fn path_for(&self, hash: &str) -> PathBuf {
        self.root.join(&hash[..2]).join(format!("{hash}.json"))
    }

    /// `Ok(None)` on a miss; `CacheCorrupt` when the file exists but does
    /// not verify.
    pub fn get(&self, hash: &str) -> Result<Option<CacheEntry>> {
        let path = self.path_for(hash);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let corrupt = |why: &str| Error::CacheCorrupt(format!("{}: {why}", path.display()));
        let entry: CacheEntry = serde_json::from_str(&text).map_err(|e| corrupt(&e.to_string()))?;
        if entry.schema_version != SCHEMA_VERSION {
            return Err(corrupt("schema version"));
        }
        if entry.hash != hash {
            return Err(corrupt("key hash mismatch"));
        }
        if entry.checksum != entry.payload_checksum() {
            return Err(corrupt("checksum mismatch"));
        }
        Ok(Some(entry))
    }

    pub fn put(&self, entry: &CacheEntry) -> Result<()> {
        let path = self.path_for(&entry.hash);
        let dir = path.parent().expect("entry path has a parent");
        fs::create_dir_all(dir)?;
        let n = TMP_COUNTER.fetch_add(1, Ordering::Relaxed);
        let tmp = dir.join(format!(".{}.{}.{n}.tmp", entry.hash, std::process::id()));
        let mut text = serde_json::to_string_pretty(entry)?;
        text.push('\n');
        fs::write(&tmp, text)?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    pub fn info(&self) -> Result<CacheInfo> {
        let mut entries = 0;
        let mut bytes = 0;
        for path in self.entry_paths()? {
            entries += 1;
            bytes += fs::metadata(&path)?.len();
        }
        Ok(CacheInfo { root: self.root.display().to_string(), entries, bytes })
    }

    /// Removes every entry file and empty prefix directory. Anything else
    /// under the root is left alone.
    pub fn clear(&self) -> Result<usize> {
        let paths = self.entry_paths()?;
        for p in &paths {
            fs::remove_file(p)?;
            if let Some(dir) = p.parent() {
                let _ = fs::remove_dir(dir);
            }
        }
        Ok(paths.len())
    }

    fn entry_paths(&self) -> Result<Vec<PathBuf>> {
        let mut out = Vec::new();
        if !self.root.is_dir() {
            return Ok(out);
        }
        for d in fs::read_dir(&self.root)? {
            let d = d?.path();
            if !is_prefix_dir(&d) {
                continue;
            }
            for f in fs::read_dir(&d)? {
                let f = f?.path();
                if f.extension().is_some_and(|e| e == "json") {
                    out.push(f);
                }
            }
        }
        out.sort();
        Ok(out)
    }
}

fn is_prefix_dir(p: &Path) -> bool {
    p.is_dir()
        && p.file_name()
            .and_then(|n| n.to_str())
            .is_some_and(|n| n.len() == 2 && n.bytes().all(|c| c.is_ascii_hexdigit()))
}

/// Compute (or fetch) the cohomology report at `key`. Returns the report
/// JSON and whether it came from the cache. Corrupt entries are recomputed
/// and overwritten.
pub fn cached_cohomology(cache: &Cache, spec: &ComplexSpec, key: GradedPieceKey) -> Result<(Value, bool)> {
    let hash = piece_hash(spec, key);
    match cache.get(&hash) {
        Ok(Some(e)) => return Ok((e.report, true)),
        Ok(None) | Err(Error::CacheCorrupt(_)) => {}
        Err(e) => return Err(e),
    }
    let entry = build_entry(spec, key, hash)?;
    cache.put(&entry)?;
    Ok((entry.report, false))
}

fn build_entry(spec: &ComplexSpec, key: GradedPieceKey, hash: String) -> Result<CacheEntry> {
    let alg = spec.algebra();
    let rep = cohomology_at(spec, key)?;
    let basis_states = subspace(spec, key)?.states();
    let images: Vec<State> = basis_states.iter().map(|s| spec.d.apply(alg, s)).collect();
    let mut targets: Vec<_> = images.iter().flat_map(|s| s.terms.keys().cloned()).collect();
    targets.sort();
    targets.dedup();
    let mut matrix = Vec::new();
    for (r, s) in images.iter().enumerate() {
        for (m, c) in &s.terms {
            let col = targets.binary_search(m).expect("target listed");
            matrix.push((r, col, c.to_repr()));
        }
    }
    let mut entry = CacheEntry {
        schema_version: SCHEMA_VERSION,
        hash,
        key,
        basis: basis_states.iter().map(|s| alg.format_state(s)).collect(),
        targets: targets.iter().map(|m| alg.format_monomial(m)).collect(),
        matrix,
        report: rep.to_json(alg),
        checksum: String::new(),
    };
    entry.checksum = entry.payload_checksum();
    Ok(entry)
}
