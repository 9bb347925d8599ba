//! On-disk cache of cobar complexes, one file per `(tag, s, t)` slice.
//!
//! The directory is keyed by a hash of the prime and generator choice only.
//! Basis order and differentials at `(s, t)` do not depend on the window, so
//! a larger window reuses every slice a smaller one wrote. Each file is
//!
//! ```text
//! adams-workbench-slice <version> sha256=<hex of the body>
//! <CochainSlice as JSON>
//! ```
//!
//! and a checksum mismatch is reported as a failed `cache-integrity` check.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use adams_core::cobar::{CobarComplex, CochainSlice, Coalgebra, Coefficients, ComplexTag};
use adams_core::prime::Prime;

use crate::chart::GENERATORS;
use crate::error::{Result, WorkbenchError};

pub const CACHE_VERSION: u32 = 1;
const SLICE_MAGIC: &str = "adams-workbench-slice";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct Manifest {
    version: u32,
    prime: u32,
    generators: String,
}

#[derive(Clone, Debug)]
pub struct Cache {
    root: PathBuf,
}

/// Removes the writer lock when dropped.
struct WriteLock(PathBuf);

impl Drop for WriteLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn digest(body: &[u8]) -> String {
    hex(&Sha256::digest(body))
}

impl Cache {
    /// Opens (creating if needed) the cache for `p` under `base`. With
    /// `rebuild`, an existing cache of another format version is discarded.
    pub fn open(base: &Path, p: Prime, rebuild: bool) -> Result<Self> {
        let key = digest(format!("p={}\ngenerators={GENERATORS}\n", p.value()).as_bytes());
        let root = base.join(&key[..16]);
        let manifest = Manifest {
            version: CACHE_VERSION,
            prime: p.value(),
            generators: GENERATORS.into(),
        };
        let mpath = root.join("manifest.json");
        if mpath.exists() {
            let text = fs::read_to_string(&mpath).map_err(|e| WorkbenchError::io(&mpath, e))?;
            let found: Manifest = serde_json::from_str(&text).map_err(|e| WorkbenchError::CacheCorrupt {
                path: mpath.clone(),
                reason: e.to_string(),
            })?;
            if found.version != CACHE_VERSION {
                if !rebuild {
                    return Err(WorkbenchError::CacheVersion {
                        path: root,
                        found: found.version,
                        expected: CACHE_VERSION,
                    });
                }
                fs::remove_dir_all(&root).map_err(|e| WorkbenchError::io(&root, e))?;
            } else if found != manifest {
                return Err(WorkbenchError::CacheCorrupt {
                    path: mpath,
                    reason: format!("manifest describes p = {}, generators {:?}", found.prime, found.generators),
                });
            }
        }
        if !mpath.exists() {
            fs::create_dir_all(&root).map_err(|e| WorkbenchError::io(&root, e))?;
            let text = serde_json::to_string(&manifest).expect("manifest serializes");
            fs::write(&mpath, text).map_err(|e| WorkbenchError::io(&mpath, e))?;
        }
        Ok(Cache { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn slice_path(&self, tag: ComplexTag, s: u32, t: u32) -> PathBuf {
        self.root.join(tag.to_string()).join(format!("{s}-{t}.slice"))
    }

    fn lock(&self) -> Result<WriteLock> {
        let path = self.root.join("write.lock");
        match fs::OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(_) => Ok(WriteLock(path)),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => Err(WorkbenchError::Config(format!(
                "{} exists: another process is writing this cache (remove the file if it is stale)",
                path.display()
            ))),
            Err(e) => Err(WorkbenchError::io(path, e)),
        }
    }

    fn read_slice(&self, path: &Path, tag: ComplexTag, s: u32, t: u32) -> Result<Option<CochainSlice>> {
        let bytes = match fs::read(path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(WorkbenchError::io(path, e)),
        };
        let corrupt = |reason: String| WorkbenchError::CacheCorrupt {
            path: path.to_path_buf(),
            reason,
        };
        let split = bytes.iter().position(|&b| b == b'\n').ok_or_else(|| corrupt("no header line".into()))?;
        let header = std::str::from_utf8(&bytes[..split]).map_err(|_| corrupt("header is not utf-8".into()))?;
        let body = &bytes[split + 1..];
        let fields: Vec<&str> = header.split(' ').collect();
        let [magic, version, sum] = fields[..] else {
            return Err(corrupt(format!("bad header {header:?}")));
        };
        if magic != SLICE_MAGIC {
            return Err(corrupt(format!("bad header {header:?}")));
        }
        let version: u32 = version.parse().map_err(|_| corrupt(format!("bad version {version:?}")))?;
        if version != CACHE_VERSION {
            return Err(WorkbenchError::CacheVersion {
                path: path.to_path_buf(),
                found: version,
                expected: CACHE_VERSION,
            });
        }
        if sum.strip_prefix("sha256=") != Some(digest(body).as_str()) {
            return Err(corrupt("checksum mismatch".into()));
        }
        let slice: CochainSlice = serde_json::from_slice(body).map_err(|e| corrupt(e.to_string()))?;
        if (slice.tag, slice.s, slice.t) != (tag, s, t) {
            return Err(corrupt(format!("holds {} ({},{})", slice.tag, slice.s, slice.t)));
        }
        Ok(Some(slice))
    }

    fn write_slice(&self, path: &Path, slice: &CochainSlice) -> Result<()> {
        let dir = path.parent().expect("slice paths have a parent");
        fs::create_dir_all(dir).map_err(|e| WorkbenchError::io(dir, e))?;
        let body = serde_json::to_vec(slice).expect("slice serializes");
        let mut bytes = format!("{SLICE_MAGIC} {CACHE_VERSION} sha256={}\n", digest(&body)).into_bytes();
        bytes.extend_from_slice(&body);
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, &bytes).map_err(|e| WorkbenchError::io(&tmp, e))?;
        fs::rename(&tmp, path).map_err(|e| WorkbenchError::io(path, e))
    }

    /// Loads the complex for the window, or `None` if a slice is missing or
    /// was written without the differential this window needs.
    pub fn load_complex(
        &self,
        tag: ComplexTag,
        alg: Arc<dyn Coalgebra>,
        coeffs: Coefficients,
        s_max: u32,
        t_max: u32,
    ) -> Result<Option<CobarComplex>> {
        let mut slices = HashMap::new();
        for t in 0..=t_max {
            for s in 0..=s_max + 1 {
                let Some(mut slice) = self.read_slice(&self.slice_path(tag, s, t), tag, s, t)? else {
                    return Ok(None);
                };
                if s > s_max {
                    slice.differential.clear();
                } else if slice.differential.len() != slice.basis.len() {
                    return Ok(None);
                }
                slices.insert((s, t), slice);
            }
        }
        Ok(Some(CobarComplex::from_slices(tag, alg, coeffs, s_max, t_max, slices)))
    }

    /// Writes every slice of `complex`, keeping existing files that carry a
    /// differential this complex lacks.
    pub fn store_complex(&self, complex: &CobarComplex) -> Result<()> {
        let _lock = self.lock()?;
        let mut slices: Vec<&CochainSlice> = complex.slices().collect();
        slices.sort_by_key(|x| (x.t, x.s));
        for slice in slices {
            let path = self.slice_path(slice.tag, slice.s, slice.t);
            let partial = slice.differential.len() != slice.basis.len();
            if partial && path.exists() {
                continue;
            }
            self.write_slice(&path, slice)?;
        }
        Ok(())
    }

    pub fn load_or_build(
        &self,
        tag: ComplexTag,
        alg: Arc<dyn Coalgebra>,
        coeffs: Coefficients,
        s_max: u32,
        t_max: u32,
    ) -> Result<CobarComplex> {
        if let Some(c) = self.load_complex(tag, alg.clone(), coeffs.clone(), s_max, t_max)? {
            return Ok(c);
        }
        let c = CobarComplex::build(tag, alg, coeffs, s_max, t_max)?;
        self.store_complex(&c)?;
        Ok(c)
    }

    /// Reads every slice file and checks its checksum. Returns the number of
    /// files checked.
    pub fn verify_all(&self) -> Result<usize> {
        let mut count = 0;
        let Ok(dirs) = fs::read_dir(&self.root) else { return Ok(0) };
        let mut dirs: Vec<PathBuf> = dirs.filter_map(|e| e.ok()).map(|e| e.path()).filter(|p| p.is_dir()).collect();
        dirs.sort();
        for dir in dirs {
            let tag: ComplexTag = dir
                .file_name()
                .and_then(|n| n.to_str())
                .and_then(|n| n.parse().ok())
                .ok_or_else(|| WorkbenchError::CacheCorrupt {
                    path: dir.clone(),
                    reason: "unknown complex directory".into(),
                })?;
            let mut files: Vec<PathBuf> = fs::read_dir(&dir)
                .map_err(|e| WorkbenchError::io(&dir, e))?
                .filter_map(|e| e.ok())
                .map(|e| e.path())
                .collect();
            files.sort();
            for path in files {
                let st = path
                    .file_stem()
                    .and_then(|n| n.to_str())
                    .and_then(|n| n.split_once('-'))
                    .and_then(|(s, t)| Some((s.parse().ok()?, t.parse().ok()?)));
                let Some((s, t)) = st.filter(|_| path.extension().is_some_and(|e| e == "slice")) else {
                    return Err(WorkbenchError::CacheCorrupt {
                        path,
                        reason: "unexpected file".into(),
                    });
                };
                self.read_slice(&path, tag, s, t)?;
                count += 1;
            }
        }
        Ok(count)
    }
}
