//! Append-only run records and their JSONL persistence.

use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generate::CaseMeta;
use crate::harness::extract::ExtractedVerdict;
use crate::harness::grade::{Grade, GradingMode};

/// Everything recorded about one evaluated case. The API credential is
/// deliberately not part of this type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub case: CaseMeta,
    pub model: String,
    pub system_instruction: String,
    pub user_message: String,
    /// Raw model response; absent when every attempt failed.
    pub response: Option<String>,
    /// Transport error note for failed cases.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
    pub attempts: u32,
    /// RFC 3339 completion time; omitted in offline runs so fixture runs
    /// are bit-reproducible.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timestamp: Option<String>,
    pub extracted: ExtractedVerdict,
    pub grade: Grade,
    pub grading_mode: GradingMode,
}

#[derive(Debug, Error)]
pub enum RecordError {
    #[error("cannot access records file {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}: malformed record: {source}")]
    Malformed {
        path: std::path::PathBuf,
        line: usize,
        source: serde_json::Error,
    },
}

/// Writes records as JSONL, one record per line, in the given order.
pub fn write_records(path: &Path, records: &[RunRecord]) -> Result<(), RecordError> {
    let io_err = |source| RecordError::Io {
        path: path.to_owned(),
        source,
    };
    let file = std::fs::File::create(path).map_err(io_err)?;
    let mut out = std::io::BufWriter::new(file);
    for record in records {
        let line = serde_json::to_string(record).expect("records serialize");
        writeln!(out, "{line}").map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

/// Reads a JSONL records file.
pub fn read_records(path: &Path) -> Result<Vec<RunRecord>, RecordError> {
    let file = std::fs::File::open(path).map_err(|source| RecordError::Io {
        path: path.to_owned(),
        source,
    })?;
    let reader = std::io::BufReader::new(file);
    let mut records = Vec::new();
    for (index, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| RecordError::Io {
            path: path.to_owned(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|source| RecordError::Malformed {
            path: path.to_owned(),
            line: index + 1,
            source,
        })?;
        records.push(record);
    }
    Ok(records)
}
