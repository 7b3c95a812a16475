//! Line-delimited JSON cache of normalization integrals.
//!
//! One record per line:
//!
//! ```text
//! {"schema_version":1,"n":4,"mean":"arithmetic","beta":2,"method":"adaptive",
//!  "region":"ordered","config_digest":"…","code_version":"0.1.0",
//!  "value":…,"error":…,"evaluations":…,"converged":true,"timestamp":…}
//! ```
//!
//! Floats are written with round-trip precision, so a cache hit reproduces the
//! computed value bit for bit. Later records for the same key win.

use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{PipelineConfig, Region};
use crate::kernels::{KernelSpec, Mean};
use crate::quad::{Method, QuadratureEstimate};
use crate::{Error, Result};

pub const CACHE_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub n: usize,
    pub mean: Mean,
    pub beta: u32,
    pub method: Method,
    pub region: Region,
    pub config_digest: String,
    pub code_version: String,
}

impl CacheKey {
    pub fn new(spec: &KernelSpec, method: Method, cfg: &PipelineConfig) -> Result<Self> {
        let region = cfg.region_for(method);
        let engine = match method {
            Method::Adaptive => serde_json::to_string(&cfg.adaptive),
            Method::Qmc => serde_json::to_string(&cfg.qmc),
        }
        .map_err(|e| Error::Cache(e.to_string()))?;
        let digest = Sha256::digest(format!("{region}|{engine}").as_bytes());
        Ok(Self {
            n: spec.n,
            mean: spec.mean,
            beta: spec.beta,
            method,
            region,
            config_digest: hex(&digest),
            code_version: env!("CARGO_PKG_VERSION").to_string(),
        })
    }
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub schema_version: u32,
    #[serde(flatten)]
    pub key: CacheKey,
    pub value: f64,
    pub error: f64,
    pub evaluations: u64,
    pub converged: bool,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl CacheRecord {
    pub fn new(key: CacheKey, estimate: &QuadratureEstimate) -> Self {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            schema_version: CACHE_SCHEMA_VERSION,
            value: estimate.value,
            error: estimate.error_estimate,
            evaluations: estimate.evaluations,
            converged: estimate.converged,
            key,
            timestamp,
        }
    }

    pub fn estimate(&self) -> QuadratureEstimate {
        QuadratureEstimate {
            value: self.value,
            error_estimate: self.error,
            evaluations: self.evaluations,
            method: self.key.method,
            converged: self.converged,
        }
    }
}

/// Append-only cache file; all access goes through one lock.
#[derive(Debug)]
pub struct ResultCache {
    path: PathBuf,
    lock: Mutex<()>,
}

impl ResultCache {
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent).map_err(|e| Error::Cache(format!("{}: {e}", parent.display())))?;
        }
        Ok(Self {
            path,
            lock: Mutex::new(()),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn read_all(&self) -> Result<Vec<CacheRecord>> {
        let file = match std::fs::File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(Error::Cache(format!("{}: {e}", self.path.display()))),
        };
        let mut out = Vec::new();
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::Cache(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let record: CacheRecord = serde_json::from_str(&line)
                .map_err(|e| Error::Cache(format!("{}:{}: {e}", self.path.display(), i + 1)))?;
            if record.schema_version == CACHE_SCHEMA_VERSION {
                out.push(record);
            }
        }
        Ok(out)
    }

    pub fn records(&self) -> Result<Vec<CacheRecord>> {
        let _guard = self.lock.lock().map_err(|_| Error::Cache("poisoned lock".into()))?;
        self.read_all()
    }

    pub fn get(&self, key: &CacheKey) -> Result<Option<CacheRecord>> {
        let _guard = self.lock.lock().map_err(|_| Error::Cache("poisoned lock".into()))?;
        Ok(self.read_all()?.into_iter().rev().find(|r| &r.key == key))
    }

    pub fn put(&self, record: CacheRecord) -> Result<()> {
        let _guard = self.lock.lock().map_err(|_| Error::Cache("poisoned lock".into()))?;
        let line = serde_json::to_string(&record).map_err(|e| Error::Cache(e.to_string()))?;
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .map_err(|e| Error::Cache(format!("{}: {e}", self.path.display())))?;
        writeln!(file, "{line}").map_err(|e| Error::Cache(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{hall_constant_cached, PipelineConfig};
    use crate::quad::AdaptiveConfig;

    #[test]
    fn cached_value_is_bit_identical() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ResultCache::open(dir.path().join("sub/cache.jsonl")).unwrap();
        let spec = KernelSpec::bures(3).unwrap();
        let cfg = PipelineConfig {
            adaptive: AdaptiveConfig::with_rel_tol(1e-9),
            ..PipelineConfig::default()
        };
        let first = hall_constant_cached(&spec, Method::Adaptive, &cfg, &cache).unwrap();
        assert_eq!(cache.records().unwrap().len(), 1);
        let second = hall_constant_cached(&spec, Method::Adaptive, &cfg, &cache).unwrap();
        assert_eq!(cache.records().unwrap().len(), 1);
        assert_eq!(first.raw_integral.to_bits(), second.raw_integral.to_bits());
        assert_eq!(first.constant.to_bits(), second.constant.to_bits());
        assert_eq!(first.estimate, second.estimate);
    }

    #[test]
    fn different_config_is_a_miss() {
        let spec = KernelSpec::bures(2).unwrap();
        let a = CacheKey::new(&spec, Method::Adaptive, &PipelineConfig::default()).unwrap();
        let cfg = PipelineConfig {
            adaptive: AdaptiveConfig::with_rel_tol(1e-3),
            ..PipelineConfig::default()
        };
        let b = CacheKey::new(&spec, Method::Adaptive, &cfg).unwrap();
        assert_ne!(a, b);
        let full = PipelineConfig {
            region: Some(Region::FullBox),
            ..PipelineConfig::default()
        };
        assert_ne!(a, CacheKey::new(&spec, Method::Adaptive, &full).unwrap());
    }

    #[test]
    fn record_format_has_stable_names() {
        let spec = KernelSpec::bures(2).unwrap();
        let key = CacheKey::new(&spec, Method::Qmc, &PipelineConfig::default()).unwrap();
        let est = QuadratureEstimate {
            value: 0.1 + 0.2,
            error_estimate: 1e-17,
            evaluations: 7,
            method: Method::Qmc,
            converged: false,
        };
        let line = serde_json::to_string(&CacheRecord::new(key, &est)).unwrap();
        for field in ["schema_version", "\"n\"", "mean", "beta", "method", "region", "value", "error", "evaluations", "timestamp"] {
            assert!(line.contains(field), "{field} missing from {line}");
        }
        let back: CacheRecord = serde_json::from_str(&line).unwrap();
        assert_eq!(back.value.to_bits(), (0.1f64 + 0.2).to_bits());
    }
}
