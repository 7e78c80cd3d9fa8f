//! JSON encodings, canonical serialization and certificates.
//!
//! Canonical text has object keys in sorted order and two-space indentation,
//! so parsing and re-serializing a canonical file reproduces it byte for byte.

mod certificate;
mod json;

use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

pub use certificate::{
    closure_certificate, forced_support_certificate, preimage_certificate, reversible_certificate,
    sigma_witness_certificate, verify_certificate, witness_certificate, Verification,
};
pub use json::{
    ca_from_json, ca_to_json, config_from_json, config_to_json, element_from_json, element_to_json, group_from_json,
    group_to_json, lazy_from_json, lazy_to_json, pattern_from_json, pattern_to_json, sparse_from_json, sparse_to_json,
    value_from_json, window_from_json, window_to_json, ValueFile,
};

use crate::ca::LinearCA;
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u64 = 1;

/// Rebuilds every object with its keys in sorted order.
pub fn canonicalize(v: &Value) -> Value {
    match v {
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            let mut out = Map::new();
            for k in keys {
                out.insert(k.clone(), canonicalize(&map[k]));
            }
            Value::Object(out)
        }
        Value::Array(items) => Value::Array(items.iter().map(canonicalize).collect()),
        other => other.clone(),
    }
}

/// Pretty canonical text with a trailing newline.
pub fn canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(&canonicalize(v)).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Compact canonical text, the input of [`content_hash`].
pub fn canonical_compact(v: &Value) -> String {
    serde_json::to_string(&canonicalize(v)).expect("JSON values always serialize")
}

/// Lower-case hex SHA-256 of the compact canonical text.
pub fn content_hash(v: &Value) -> String {
    hex::encode(Sha256::digest(canonical_compact(v).as_bytes()))
}

/// Content hash of an automaton's canonical definition.
pub fn ca_hash(ca: &LinearCA) -> String {
    content_hash(&ca_to_json(ca))
}

pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}
