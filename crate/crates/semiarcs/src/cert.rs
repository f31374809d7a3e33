//! Canonical JSON certificates and a content-addressed certificate store.
//!
//! Every certificate this crate emits is serialized through [`canonical_json`],
//! which writes object keys in sorted order, keeps array order, and rejects
//! floating-point numbers outright.  Two runs that compute the same result
//! therefore produce byte-identical payloads, and the SHA-256 of the payload
//! doubles as its identity in the store.
//!
//! A stored file is an [`Envelope`]: the payload plus its kind, a
//! human-readable label, the payload hash, and (optionally) the wall time of
//! the run that produced it.  The wall time lives outside the hashed payload,
//! so replaying a computation reproduces the hash even when the timing
//! differs.
//!
//! The store root is chosen explicitly, or falls back to the
//! `SEMIARCS_STORE` environment variable, or to `./certificates`.

use crate::field::FiniteField;
use crate::plane::{Plane, PlaneError};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use thiserror::Error;

/// Environment variable naming the default store root.
pub const STORE_ENV: &str = "SEMIARCS_STORE";

#[derive(Debug, Error)]
pub enum CertError {
    #[error("certificate store I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("certificate JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("canonical JSON forbids non-integer numbers, got {0}")]
    FloatValue(String),
    #[error("bad plane reference {0:?}: expected pg:<q> or file:<path>")]
    BadPlaneRef(String),
    #[error("plane reference {reference:?}: {source}")]
    Plane {
        reference: String,
        source: PlaneError,
    },
    #[error("plane reference {reference:?}: {message}")]
    Field { reference: String, message: String },
    #[error("stored certificate {path}: hash mismatch (file says {stored}, payload hashes to {actual})")]
    HashMismatch {
        path: String,
        stored: String,
        actual: String,
    },
    #[error("no stored certificate for kind {kind:?} label {label:?} under {root}")]
    NotFound {
        kind: String,
        label: String,
        root: String,
    },
}

/// Serializes a JSON value with sorted object keys and no whitespace.
///
/// Arrays keep their order; only integers (and the other scalar kinds) are
/// accepted as numbers.  The output is deterministic: equal values produce
/// equal strings.
pub fn canonical_json(value: &Value) -> Result<String, CertError> {
    let mut out = String::new();
    write_canonical(value, &mut out)?;
    Ok(out)
}

fn write_canonical(value: &Value, out: &mut String) -> Result<(), CertError> {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                return Err(CertError::FloatValue(n.to_string()));
            }
            out.push_str(&n.to_string());
        }
        Value::String(s) => {
            // serde_json's escaping is already canonical for strings.
            out.push_str(&serde_json::to_string(s).expect("string serialization"));
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_canonical(item, out)?;
            }
            out.push(']');
        }
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, key) in keys.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(key).expect("string serialization"));
                out.push(':');
                write_canonical(&map[key.as_str()], out)?;
            }
            out.push('}');
        }
    }
    Ok(())
}

/// Canonical serialization of any serde value.
pub fn canonical_string<T: Serialize>(payload: &T) -> Result<String, CertError> {
    canonical_json(&serde_json::to_value(payload)?)
}

/// SHA-256 (lowercase hex) of the canonical serialization.
pub fn content_hash<T: Serialize>(payload: &T) -> Result<String, CertError> {
    let canon = canonical_string(payload)?;
    let mut hasher = Sha256::new();
    hasher.update(canon.as_bytes());
    Ok(hex(&hasher.finalize()))
}

fn hex(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

/// A certificate as stored on disk: hashed payload plus identifying metadata.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Envelope {
    pub kind: String,
    pub label: String,
    /// SHA-256 of the canonical payload serialization (and nothing else).
    pub sha256: String,
    /// Wall time of the producing run; excluded from the hash so replays
    /// reproduce the identity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
    pub payload: Value,
}

impl Envelope {
    /// Recomputes the payload hash and checks it against the recorded one.
    pub fn verify_hash(&self) -> Result<(), CertError> {
        let actual = content_hash(&self.payload)?;
        if actual != self.sha256 {
            return Err(CertError::HashMismatch {
                path: format!("{}-{}", self.kind, self.label),
                stored: self.sha256.clone(),
                actual,
            });
        }
        Ok(())
    }

    /// Deserializes the payload into a concrete certificate type.
    pub fn decode<T: DeserializeOwned>(&self) -> Result<T, CertError> {
        Ok(serde_json::from_value(self.payload.clone())?)
    }
}

/// Result of persisting a certificate: where it went and its identity.
#[derive(Debug, Clone)]
pub struct StoredCert {
    pub path: PathBuf,
    pub sha256: String,
}

/// A directory of content-addressed certificate files, one JSON file per
/// certificate, named `<kind>-<label>-<hash prefix>.json`.
pub struct CertStore {
    root: PathBuf,
}

impl CertStore {
    /// Opens (creating if necessary) a store rooted at `root`.
    pub fn open(root: impl Into<PathBuf>) -> Result<CertStore, CertError> {
        let root = root.into();
        fs::create_dir_all(&root)?;
        Ok(CertStore { root })
    }

    /// Opens the store named by `SEMIARCS_STORE`, or `./certificates`.
    pub fn from_env() -> Result<CertStore, CertError> {
        match std::env::var(STORE_ENV) {
            Ok(dir) if !dir.is_empty() => CertStore::open(dir),
            _ => CertStore::open("certificates"),
        }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Serializes `payload` canonically, wraps it in an [`Envelope`], and
    /// writes it atomically.  Returns the final path and payload hash.
    pub fn put<T: Serialize>(
        &self,
        kind: &str,
        label: &str,
        payload: &T,
        wall_time_ms: Option<u64>,
    ) -> Result<StoredCert, CertError> {
        let payload = serde_json::to_value(payload)?;
        let sha256 = content_hash(&payload)?;
        let envelope = Envelope {
            kind: kind.to_string(),
            label: label.to_string(),
            sha256: sha256.clone(),
            wall_time_ms,
            payload,
        };
        let name = format!("{}-{}-{}.json", kind, label, &sha256[..16]);
        let path = self.root.join(name);
        let body = canonical_string(&envelope)?;
        write_atomic(&path, body.as_bytes())?;
        Ok(StoredCert { path, sha256 })
    }

    /// Loads an envelope from an explicit path and verifies its hash.
    pub fn load_path(path: &Path) -> Result<Envelope, CertError> {
        let body = fs::read_to_string(path)?;
        let envelope: Envelope = serde_json::from_str(&body)?;
        envelope.verify_hash()?;
        Ok(envelope)
    }

    /// Finds the most recently written certificate for (kind, label).
    pub fn find(&self, kind: &str, label: &str) -> Result<Envelope, CertError> {
        let prefix = format!("{kind}-{label}-");
        let mut best: Option<(std::time::SystemTime, PathBuf)> = None;
        for entry in fs::read_dir(&self.root)? {
            let entry = entry?;
            let name = entry.file_name();
            let Some(name) = name.to_str() else { continue };
            if name.starts_with(&prefix) && name.ends_with(".json") {
                let modified = entry
                    .metadata()?
                    .modified()
                    .unwrap_or(std::time::SystemTime::UNIX_EPOCH);
                if best.as_ref().is_none_or(|(t, _)| modified >= *t) {
                    best = Some((modified, entry.path()));
                }
            }
        }
        match best {
            Some((_, path)) => Self::load_path(&path),
            None => Err(CertError::NotFound {
                kind: kind.to_string(),
                label: label.to_string(),
                root: self.root.display().to_string(),
            }),
        }
    }

    /// Path of the resumable frontier file for (kind, label).  Frontier files
    /// are named without a content hash because they are overwritten as the
    /// computation progresses.
    pub fn frontier_path(&self, kind: &str, label: &str) -> PathBuf {
        self.root.join(format!("{kind}-{label}.frontier.json"))
    }

    /// Persists in-progress state so an interrupted run can resume.
    pub fn save_frontier<T: Serialize>(
        &self,
        kind: &str,
        label: &str,
        state: &T,
    ) -> Result<PathBuf, CertError> {
        let path = self.frontier_path(kind, label);
        let body = canonical_string(state)?;
        write_atomic(&path, body.as_bytes())?;
        Ok(path)
    }

    /// Loads a frontier file if one exists.
    pub fn load_frontier<T: DeserializeOwned>(
        &self,
        kind: &str,
        label: &str,
    ) -> Result<Option<T>, CertError> {
        let path = self.frontier_path(kind, label);
        if !path.exists() {
            return Ok(None);
        }
        let body = fs::read_to_string(&path)?;
        Ok(Some(serde_json::from_str(&body)?))
    }

    /// Removes the frontier file once a run completes.
    pub fn clear_frontier(&self, kind: &str, label: &str) -> Result<(), CertError> {
        let path = self.frontier_path(kind, label);
        if path.exists() {
            fs::remove_file(path)?;
        }
        Ok(())
    }
}

fn write_atomic(path: &Path, body: &[u8]) -> Result<(), CertError> {
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, body)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Parses a plane reference (`pg:<q>` or `file:<path>`) and builds the plane.
pub fn resolve_plane_ref(reference: &str) -> Result<Arc<Plane>, CertError> {
    if let Some(q) = reference.strip_prefix("pg:") {
        let q: u32 = q
            .parse()
            .map_err(|_| CertError::BadPlaneRef(reference.to_string()))?;
        let field = FiniteField::for_order(q).map_err(|e| CertError::Field {
            reference: reference.to_string(),
            message: e.to_string(),
        })?;
        return Ok(Arc::new(Plane::build_pg2(field)));
    }
    if let Some(path) = reference.strip_prefix("file:") {
        let file = fs::File::open(path)?;
        let plane = Plane::load(BufReader::new(file)).map_err(|e| CertError::Plane {
            reference: reference.to_string(),
            source: e,
        })?;
        return Ok(Arc::new(plane));
    }
    Err(CertError::BadPlaneRef(reference.to_string()))
}

/// A filesystem-safe label for a plane reference: `pg:5` becomes `pg5`,
/// `file:planes/x.txt` becomes `file_x_txt`.
pub fn plane_label(reference: &str) -> String {
    let sanitize = |s: &str| -> String {
        s.chars()
            .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
            .collect()
    };
    match reference.split_once(':') {
        Some(("pg", q)) => format!("pg{}", sanitize(q)),
        Some((scheme, rest)) => format!("{}_{}", sanitize(scheme), sanitize(rest)),
        None => sanitize(reference),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn canonical_json_sorts_keys_and_keeps_array_order() {
        let v = json!({"b": [3, 1, 2], "a": {"z": 1, "y": null}});
        assert_eq!(
            canonical_json(&v).unwrap(),
            r#"{"a":{"y":null,"z":1},"b":[3,1,2]}"#
        );
    }

    #[test]
    fn canonical_json_rejects_floats() {
        let v = json!({"x": 1.5});
        assert!(matches!(
            canonical_json(&v),
            Err(CertError::FloatValue(_))
        ));
    }

    #[test]
    fn content_hash_is_stable_under_key_order() {
        let a = json!({"p": 1, "q": [true, "s"]});
        let b = json!({"q": [true, "s"], "p": 1});
        assert_eq!(content_hash(&a).unwrap(), content_hash(&b).unwrap());
    }

    #[test]
    fn store_round_trip_and_hash_verification() {
        let dir = tempfile::tempdir().unwrap();
        let store = CertStore::open(dir.path()).unwrap();
        let payload = json!({"t": 2, "plane": "pg:5", "count": 50});
        let stored = store.put("search", "pg5-t2", &payload, Some(12)).unwrap();
        assert!(stored.path.exists());

        let envelope = CertStore::load_path(&stored.path).unwrap();
        assert_eq!(envelope.kind, "search");
        assert_eq!(envelope.label, "pg5-t2");
        assert_eq!(envelope.sha256, stored.sha256);
        assert_eq!(envelope.wall_time_ms, Some(12));
        assert_eq!(envelope.payload, payload);

        let found = store.find("search", "pg5-t2").unwrap();
        assert_eq!(found.sha256, stored.sha256);
    }

    #[test]
    fn store_writes_are_byte_stable() {
        let dir = tempfile::tempdir().unwrap();
        let store = CertStore::open(dir.path()).unwrap();
        let payload = json!({"a": 1, "b": [2, 3]});
        let first = store.put("k", "l", &payload, None).unwrap();
        let body1 = std::fs::read(&first.path).unwrap();
        let second = store.put("k", "l", &payload, None).unwrap();
        let body2 = std::fs::read(&second.path).unwrap();
        assert_eq!(first.path, second.path);
        assert_eq!(body1, body2);
    }

    #[test]
    fn tampered_certificate_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let store = CertStore::open(dir.path()).unwrap();
        let stored = store.put("k", "l", &json!({"n": 1}), None).unwrap();
        let body = std::fs::read_to_string(&stored.path).unwrap();
        let tampered = body.replace("\"n\":1", "\"n\":2");
        std::fs::write(&stored.path, tampered).unwrap();
        assert!(matches!(
            CertStore::load_path(&stored.path),
            Err(CertError::HashMismatch { .. })
        ));
    }

    #[test]
    fn frontier_save_load_clear() {
        let dir = tempfile::tempdir().unwrap();
        let store = CertStore::open(dir.path()).unwrap();
        assert!(store
            .load_frontier::<Value>("search", "pg5-t2")
            .unwrap()
            .is_none());
        store
            .save_frontier("search", "pg5-t2", &json!({"done": [0, 2]}))
            .unwrap();
        let loaded: Value = store.load_frontier("search", "pg5-t2").unwrap().unwrap();
        assert_eq!(loaded, json!({"done": [0, 2]}));
        store.clear_frontier("search", "pg5-t2").unwrap();
        assert!(store
            .load_frontier::<Value>("search", "pg5-t2")
            .unwrap()
            .is_none());
    }

    #[test]
    fn plane_refs_resolve_and_label() {
        let plane = resolve_plane_ref("pg:4").unwrap();
        assert_eq!(plane.q(), 4);
        assert!(matches!(
            resolve_plane_ref("pg:6"),
            Err(CertError::Field { .. })
        ));
        assert!(matches!(
            resolve_plane_ref("nonsense"),
            Err(CertError::BadPlaneRef(_))
        ));
        assert_eq!(plane_label("pg:5"), "pg5");
        assert_eq!(plane_label("file:planes/x.txt"), "file_planes_x_txt");
    }

    #[test]
    fn plane_ref_loads_incidence_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("fano.txt");
        // PG(2,2) written out as an incidence file.
        let field = FiniteField::for_order(2).unwrap();
        let plane = Plane::build_pg2(field);
        let mut body = String::from("order 2\n");
        for l in 0..plane.n_lines() {
            let row: Vec<String> = plane
                .points_of_line(l)
                .iter()
                .map(|p| p.to_string())
                .collect();
            body.push_str(&row.join(" "));
            body.push('\n');
        }
        std::fs::write(&path, body).unwrap();
        let loaded = resolve_plane_ref(&format!("file:{}", path.display())).unwrap();
        assert_eq!(loaded.q(), 2);
        assert_eq!(loaded.n_points(), 7);
    }
}
