//! JSON interchange for networks and results.
//!
//! Networks are read with a streaming parser that validates one edge record
//! at a time. Everything written is canonical: object keys sorted, compact
//! separators, integers printed verbatim, one trailing newline. Identical
//! values therefore always serialize to identical bytes.

mod network;
mod results;

use std::io::Write;

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use network::{
    network_digest, read_network, write_network, IngestMode, NetworkDocument, ReadOutcome, SkippedRecord,
    TimeEncoding, SCHEMA_VERSION,
};
pub use results::{read_results, write_results, OutputFormat};

#[derive(Debug, Error)]
pub enum ReadError {
    #[error("malformed JSON: {0}")]
    MalformedJson(String),
    #[error("unsupported schema version {0}")]
    UnsupportedSchema(String),
    #[error("record {index}: mixes integer ticks and calendar timestamps with earlier records")]
    MixedTimeEncodings { index: usize },
    #[error("record {index}: {reason}")]
    RecordInvalid { index: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for ReadError {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            ReadError::Io(e.into())
        } else {
            ReadError::MalformedJson(e.to_string())
        }
    }
}

/// Canonical bytes of any serializable value.
pub fn to_canonical_vec<T: Serialize + ?Sized>(value: &T) -> Vec<u8> {
    // Round-tripping through `Value` sorts every object's keys.
    let value = serde_json::to_value(value).expect("value serializes to JSON");
    let mut out = serde_json::to_vec(&value).expect("JSON value serializes");
    out.push(b'\n');
    out
}

pub fn write_canonical<T: Serialize + ?Sized, W: Write>(value: &T, mut w: W) -> std::io::Result<()> {
    w.write_all(&to_canonical_vec(value))
}

/// Lowercase hex SHA-256.
pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}
