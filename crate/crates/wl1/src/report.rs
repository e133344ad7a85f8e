//! Plot-ready tables and run manifests.
//!
//! A CSV file starts with a `#`-prefixed header block that records the tool
//! version, the command and the SHA-256 of the canonical parameter JSON. The
//! body is a plain headered CSV. Nothing time-dependent appears in the file, so
//! re-running with the same parameters reproduces it byte for byte. Timestamps
//! and the file digest go into the JSON manifest written next to it.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Library version recorded in every output.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A rectangular table with named columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    /// Appends a row; panics if its width differs from the header's.
    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    /// CSV body (header line plus rows), RFC 4180 quoting where needed.
    pub fn to_csv_body(&self) -> String {
        let mut out = String::new();
        let line = |cells: &[String]| cells.iter().map(|c| quote(c)).collect::<Vec<_>>().join(",");
        writeln!(out, "{}", line(&self.columns)).unwrap();
        for r in &self.rows {
            writeln!(out, "{}", line(r)).unwrap();
        }
        out
    }

    /// Full CSV file: `#` header block followed by the body.
    pub fn to_csv(&self, command: &str, params_digest: &str) -> String {
        format!("# wl1 {VERSION}\n# command: {command}\n# params-sha256: {params_digest}\n{}", self.to_csv_body())
    }

    /// Index of a named column.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

fn quote(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_owned()
    }
}

/// Formats a float so that it round-trips exactly (`inf`/`nan` spelled out).
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:?}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Lowercase hex SHA-256.
pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// SHA-256 of the canonical (sorted-key, compact) JSON form of `params`.
pub fn params_digest(params: &serde_json::Value) -> String {
    // serde_json's default map is ordered by key, so `to_string` is canonical.
    sha256_hex(serde_json::to_string(params).expect("JSON values serialize").as_bytes())
}

/// Digest of one output file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputDigest {
    pub path: String,
    pub sha256: String,
}

/// Everything needed to re-derive a run's outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub params: serde_json::Value,
    pub params_sha256: String,
    pub seed: Option<u64>,
    pub started: String,
    pub finished: String,
    pub outputs: Vec<OutputDigest>,
    /// Conventions a reader needs to interpret the numbers (noise model, index rule…).
    pub notes: Vec<String>,
    /// Headline results (threshold, crossover, bound…), for quick inspection.
    pub summary: serde_json::Value,
}

impl RunManifest {
    pub fn new(command: &str, params: serde_json::Value, seed: Option<u64>, started: String) -> Self {
        let params_sha256 = params_digest(&params);
        RunManifest {
            tool: "wl1".into(),
            version: VERSION.into(),
            command: command.into(),
            params,
            params_sha256,
            seed,
            started,
            finished: String::new(),
            outputs: Vec::new(),
            notes: Vec::new(),
            summary: serde_json::Value::Null,
        }
    }
}

/// Current UTC time in RFC 3339.
pub fn now_rfc3339() -> String {
    chrono::Utc::now().to_rfc3339()
}
