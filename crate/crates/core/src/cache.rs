//! On-disk cache of resolutions, keyed by content.
//!
//! A file stores the summands, generators and certificates of every stage;
//! the modules themselves are rebuilt from the target on load, so a hit is
//! identical to a recomputation. Files from another format version, or that
//! fail to parse, are skipped and reported.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::gamma::{GammaModule, Partition, PartitionFamily};
use crate::resolution::{CertEntry, CoverOptions, CoverStage, CoverStrategy, ModuleComplex, PiParams};

pub const CACHE_VERSION: u32 = 1;
pub const CACHE_DIR_ENV: &str = "GAMMA_AQ_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheKey {
    /// Fingerprint of the input functor.
    pub fingerprint: String,
    pub field: FieldSpec,
    pub trunc: usize,
    pub bound: usize,
    pub degree: usize,
    pub family: PartitionFamily,
    pub strategy: CoverStrategy,
}

impl CacheKey {
    pub fn new(fingerprint: &str, field: FieldSpec, params: &PiParams) -> Self {
        CacheKey {
            fingerprint: fingerprint.to_string(),
            field,
            trunc: params.trunc,
            bound: params.bound,
            degree: params.degree,
            family: params.family,
            strategy: params.strategy,
        }
    }

    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("key serializes");
        let mut h = Sha256::new();
        h.update(CACHE_VERSION.to_le_bytes());
        h.update(&bytes);
        hex::encode(h.finalize())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct StoredStage {
    summands: Vec<Partition>,
    /// Sparse generators with coefficients in the field's text format.
    generators: Vec<Vec<(usize, String)>>,
    certificate: Vec<CertEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct StoredComplex {
    version: u32,
    key: CacheKey,
    target: String,
    target_dims: Vec<usize>,
    stages: Vec<StoredStage>,
}

/// What a lookup found.
pub enum Lookup<F: Field> {
    Hit(ModuleComplex<F>),
    Miss,
    /// A file was present but unusable; the reason is a warning for the user.
    Ignored(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CacheEntry {
    pub file: String,
    pub bytes: u64,
    pub key: Option<CacheKey>,
    pub target: Option<String>,
    pub version: Option<u32>,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

fn cache_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Cache(format!("{}: {e}", path.display()))
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// `$GAMMA_AQ_CACHE_DIR`, else `$XDG_CACHE_HOME/gamma-aq`, else
    /// `~/.cache/gamma-aq`.
    pub fn from_env() -> Self {
        if let Some(d) = std::env::var_os(CACHE_DIR_ENV) {
            return Cache::new(d);
        }
        if let Some(d) = std::env::var_os("XDG_CACHE_HOME") {
            return Cache::new(PathBuf::from(d).join("gamma-aq"));
        }
        let home = std::env::var_os("HOME").map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
        Cache::new(home.join(".cache").join("gamma-aq"))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{}.json", key.digest()))
    }

    pub fn store<F: Field>(&self, key: &CacheKey, complex: &ModuleComplex<F>) -> Result<PathBuf> {
        let field = complex.target().field();
        let stored = StoredComplex {
            version: CACHE_VERSION,
            key: key.clone(),
            target: complex.target().name().to_string(),
            target_dims: complex.target().dims(),
            stages: complex
                .stages()
                .iter()
                .map(|s| StoredStage {
                    summands: s.summands.clone(),
                    generators: s
                        .generators
                        .iter()
                        .map(|g| g.iter().map(|(i, c)| (*i, field.format(c))).collect())
                        .collect(),
                    certificate: s.certificate.clone(),
                })
                .collect(),
        };
        fs::create_dir_all(&self.dir).map_err(|e| cache_err(&self.dir, e))?;
        let path = self.path_for(key);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        let mut f = fs::File::create(&tmp).map_err(|e| cache_err(&tmp, e))?;
        f.write_all(&serde_json::to_vec(&stored).map_err(|e| cache_err(&tmp, e))?)
            .map_err(|e| cache_err(&tmp, e))?;
        f.sync_all().map_err(|e| cache_err(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| cache_err(&path, e))?;
        Ok(path)
    }

    /// Loads the resolution of `target` stored under `key`.
    pub fn load<F: Field>(&self, key: &CacheKey, target: &Arc<GammaModule<F>>) -> Lookup<F> {
        let path = self.path_for(key);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Lookup::Miss,
            Err(e) => return Lookup::Ignored(format!("{}: {e}", path.display())),
        };
        match self.decode(&path, &bytes, key, target) {
            Ok(c) => Lookup::Hit(c),
            Err(e) => Lookup::Ignored(e.to_string()),
        }
    }

    fn decode<F: Field>(
        &self,
        path: &Path,
        bytes: &[u8],
        key: &CacheKey,
        target: &Arc<GammaModule<F>>,
    ) -> Result<ModuleComplex<F>> {
        let header: serde_json::Value = serde_json::from_slice(bytes).map_err(|e| cache_err(path, format!("corrupt: {e}")))?;
        let version = header.get("version").and_then(|v| v.as_u64());
        if version != Some(u64::from(CACHE_VERSION)) {
            return Err(cache_err(
                path,
                format!("format version {version:?}, expected {CACHE_VERSION}; ignoring"),
            ));
        }
        let stored: StoredComplex = serde_json::from_value(header).map_err(|e| cache_err(path, format!("corrupt: {e}")))?;
        if &stored.key != key {
            return Err(cache_err(path, "key mismatch"));
        }
        if stored.target_dims != target.dims() {
            return Err(cache_err(path, "target dimensions differ"));
        }
        let field = target.field();
        let opts = CoverOptions {
            bound: key.bound,
            family: key.family,
            strategy: key.strategy,
            cap: usize::MAX,
        };
        let mut stages: Vec<CoverStage<F>> = Vec::with_capacity(stored.stages.len());
        for s in stored.stages {
            let generators = s
                .generators
                .iter()
                .map(|g| {
                    g.iter()
                        .map(|(i, c)| Ok((*i, field.parse(c)?)))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()
                .map_err(|e| cache_err(path, format!("corrupt: {e}")))?;
            let parent = stages.last().map_or(target, |p| p.module());
            let stage = CoverStage::from_generators(parent, s.summands, generators, s.certificate)
                .map_err(|e| cache_err(path, format!("corrupt: {e}")))?;
            stages.push(stage);
        }
        ModuleComplex::from_stages(target, stages, opts).map_err(|e| cache_err(path, e))
    }

    pub fn list(&self) -> Result<Vec<CacheEntry>> {
        let mut out = Vec::new();
        let rd = match fs::read_dir(&self.dir) {
            Ok(rd) => rd,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
            Err(e) => return Err(cache_err(&self.dir, e)),
        };
        for entry in rd {
            let entry = entry.map_err(|e| cache_err(&self.dir, e))?;
            let path = entry.path();
            if path.extension().and_then(|e| e.to_str()) != Some("json") {
                continue;
            }
            let bytes = fs::read(&path).unwrap_or_default();
            let parsed: Option<serde_json::Value> = serde_json::from_slice(&bytes).ok();
            let field = |k: &str| parsed.as_ref().and_then(|v| v.get(k)).cloned();
            out.push(CacheEntry {
                file: entry.file_name().to_string_lossy().into_owned(),
                bytes: bytes.len() as u64,
                key: field("key").and_then(|k| serde_json::from_value(k).ok()),
                target: field("target").and_then(|t| t.as_str().map(str::to_string)),
                version: field("version").and_then(|v| v.as_u64()).map(|v| v as u32),
            });
        }
        out.sort_by(|a, b| a.file.cmp(&b.file));
        Ok(out)
    }

    /// Removes every cache file; returns how many were removed.
    pub fn clear(&self) -> Result<usize> {
        let mut n = 0;
        for e in self.list()? {
            fs::remove_file(self.dir.join(&e.file)).map_err(|err| cache_err(&self.dir, err))?;
            n += 1;
        }
        Ok(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_lam, corpus_algebra, FiniteModule, DEFAULT_LEVEL_CAP};
    use crate::field::{PrimeField, Rationals};
    use crate::resolution::{apply_pi0, y_resolution};

    fn setup<F: Field>(field: &F) -> (Arc<GammaModule<F>>, PiParams, CacheKey) {
        let (a, _) = corpus_algebra(field, "K[x]/(x^2)").unwrap();
        let m = Arc::new(FiniteModule::regular(&a));
        let l = build_lam(&m, 3, DEFAULT_LEVEL_CAP).unwrap();
        let params = PiParams::new(1, 3, 3);
        let key = CacheKey::new(&format!("{}:{}", a.fingerprint(), m.fingerprint()), field.spec(), &params);
        (l, params, key)
    }

    #[test]
    fn round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let q = Rationals;
        let (l, params, key) = setup(&q);
        let c = y_resolution(&l, 1, &params.cover_options()).unwrap();
        assert!(matches!(cache.load(&key, &l), Lookup::Miss));
        cache.store(&key, &c).unwrap();
        let Lookup::Hit(back) = cache.load(&key, &l) else {
            panic!("expected a hit")
        };
        for (a, b) in c.stages().iter().zip(back.stages()) {
            assert_eq!(a.summands, b.summands);
            assert_eq!(a.generators, b.generators);
            assert_eq!(a.certificate, b.certificate);
            for n in 0..=3 {
                assert_eq!(a.module().level(n).unwrap(), b.module().level(n).unwrap());
            }
        }
        let (x, y) = (apply_pi0(&c).unwrap(), apply_pi0(&back).unwrap());
        assert_eq!(x.homology(&q), y.homology(&q));
        assert_eq!(cache.list().unwrap().len(), 1);
        assert_eq!(cache.clear().unwrap(), 1);
        assert!(cache.list().unwrap().is_empty());
    }

    #[test]
    fn corrupt_and_stale_files_are_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let f2 = PrimeField::new(2).unwrap();
        let (l, _, key) = setup(&f2);
        fs::write(cache.path_for(&key), b"{not json").unwrap();
        assert!(matches!(cache.load(&key, &l), Lookup::Ignored(_)));
        fs::write(cache.path_for(&key), br#"{"version": 0}"#).unwrap();
        match cache.load(&key, &l) {
            Lookup::Ignored(msg) => assert!(msg.contains("version"), "{msg}"),
            _ => panic!("stale file used"),
        }
    }

    #[test]
    fn fields_do_not_collide() {
        let q = Rationals;
        let f2 = PrimeField::new(2).unwrap();
        let (_, _, kq) = setup(&q);
        let (_, _, k2) = setup(&f2);
        assert_ne!(kq.digest(), k2.digest());
        let mut other = kq.clone();
        other.trunc = 4;
        assert_ne!(kq.digest(), other.digest());
    }
}
