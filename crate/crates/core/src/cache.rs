//! Disk cache for exact coefficient tables.
//!
//! High-order tables (K around 40-60 for degree 7) are expensive to build
//! and reused across the large-order diagnostics, so they are persisted as
//! JSON keyed by (degree, level, Kmax, schema version). Writes go through a
//! temp file plus atomic rename, so concurrent writers race benignly to an
//! identical result; loads verify a content checksum and treat any mismatch
//! as a miss to recompute from.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::rspt::{rspt_coeffs, CoeffTable, OscillatorSpec};

/// Bumped whenever the on-disk layout or the table semantics change;
/// mismatched versions are cache misses, never migration attempts.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Envelope {
    schema: u32,
    /// SHA-256 of the serialized table payload.
    checksum: String,
    table: CoeffTable,
}

fn digest(payload: &str) -> String {
    let mut h = Sha256::new();
    h.update(payload.as_bytes());
    format!("{:x}", h.finalize())
}

/// Content-addressed file name for a table.
pub fn cache_path(dir: &Path, spec: OscillatorSpec, n: u32, kmax: usize) -> PathBuf {
    dir.join(format!(
        "coeffs-m{}-n{}-k{}-v{}.json",
        spec.degree(),
        n,
        kmax,
        SCHEMA_VERSION
    ))
}

/// Persist a table atomically (temp file + rename into place).
pub fn store(dir: &Path, table: &CoeffTable) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let payload = serde_json::to_string(table)?;
    let envelope = Envelope {
        schema: SCHEMA_VERSION,
        checksum: digest(&payload),
        table: serde_json::from_str(&payload)?,
    };
    let target = cache_path(dir, table.spec, table.level, table.kmax());
    let nanos = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.subsec_nanos())
        .unwrap_or(0);
    let tmp = target.with_extension(format!("tmp.{}.{}", std::process::id(), nanos));
    std::fs::write(&tmp, serde_json::to_vec(&envelope)?)?;
    std::fs::rename(&tmp, &target)?;
    Ok(target)
}

/// Load a table if present with the current schema; checksum mismatch is an
/// error (the caller decides whether to recompute).
pub fn load(dir: &Path, spec: OscillatorSpec, n: u32, kmax: usize) -> Result<Option<CoeffTable>> {
    let path = cache_path(dir, spec, n, kmax);
    let bytes = match std::fs::read(&path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let envelope: Envelope = serde_json::from_slice(&bytes)?;
    if envelope.schema != SCHEMA_VERSION {
        return Ok(None);
    }
    let payload = serde_json::to_string(&envelope.table)?;
    if digest(&payload) != envelope.checksum {
        return Err(Error::CacheChecksum { path: path.display().to_string() });
    }
    Ok(Some(envelope.table))
}

/// Cached coefficient computation: load when valid, otherwise compute and
/// store. A corrupted entry is reported to stderr and recomputed.
pub fn load_or_compute(dir: &Path, spec: OscillatorSpec, n: u32, kmax: usize) -> Result<CoeffTable> {
    match load(dir, spec, n, kmax) {
        Ok(Some(table)) => return Ok(table),
        Ok(None) => {}
        Err(Error::CacheChecksum { path }) => {
            eprintln!("warning: cache checksum mismatch for {path}; recomputing");
        }
        Err(e) => return Err(e),
    }
    let table = rspt_coeffs(spec, n, kmax);
    store(dir, &table)?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(m: u32) -> OscillatorSpec {
        OscillatorSpec::new(m).unwrap()
    }

    #[test]
    fn round_trip_is_bit_identical() {
        let dir = tempfile::tempdir().unwrap();
        let table = rspt_coeffs(spec(4), 0, 12);
        store(dir.path(), &table).unwrap();
        let back = load(dir.path(), spec(4), 0, 12).unwrap().unwrap();
        assert_eq!(back.coeffs, table.coeffs);
        assert_eq!(back.level, table.level);
        assert_eq!(back.spec, table.spec);
    }

    #[test]
    fn absent_entry_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        assert!(load(dir.path(), spec(3), 2, 9).unwrap().is_none());
    }

    #[test]
    fn schema_bump_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        let table = rspt_coeffs(spec(3), 0, 6);
        let path = store(dir.path(), &table).unwrap();
        // rewrite the envelope with a future schema number
        let mut env: serde_json::Value =
            serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
        env["schema"] = serde_json::json!(SCHEMA_VERSION + 1);
        std::fs::write(&path, serde_json::to_vec(&env).unwrap()).unwrap();
        assert!(load(dir.path(), spec(3), 0, 6).unwrap().is_none());
    }

    #[test]
    fn corruption_is_detected_and_recomputed() {
        let dir = tempfile::tempdir().unwrap();
        let table = rspt_coeffs(spec(3), 1, 6);
        let path = store(dir.path(), &table).unwrap();
        let mut env: serde_json::Value =
            serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
        env["table"]["coeffs"][1] = serde_json::json!("1/7");
        std::fs::write(&path, serde_json::to_vec(&env).unwrap()).unwrap();
        assert!(matches!(
            load(dir.path(), spec(3), 1, 6),
            Err(Error::CacheChecksum { .. })
        ));
        let fresh = load_or_compute(dir.path(), spec(3), 1, 6).unwrap();
        assert_eq!(fresh.coeffs, table.coeffs);
        // the recomputed table replaced the corrupted entry
        let reloaded = load(dir.path(), spec(3), 1, 6).unwrap().unwrap();
        assert_eq!(reloaded.coeffs, table.coeffs);
    }

    #[test]
    fn concurrent_writers_leave_one_valid_entry() {
        let dir = tempfile::tempdir().unwrap();
        let table = rspt_coeffs(spec(4), 1, 8);
        std::thread::scope(|s| {
            for _ in 0..8 {
                s.spawn(|| store(dir.path(), &table).unwrap());
            }
        });
        let back = load(dir.path(), spec(4), 1, 8).unwrap().unwrap();
        assert_eq!(back.coeffs, table.coeffs);
    }
}
