use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::config::sha256_hex;
use crate::error::{Error, Result};
use crate::model::DatasetRecord;

pub const RECORDS_FILE: &str = "records.jsonl";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const PIPELINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Per-stage counts of one build.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCounters {
    pub pages_seen: usize,
    pub pages_skipped: usize,
    pub entities: usize,
    pub invalid_dropped: usize,
    pub duplicates_collapsed: usize,
    pub records: usize,
}

impl StageCounters {
    /// Every entity is either dropped, collapsed or kept.
    pub fn is_conserved(&self) -> bool {
        self.entities == self.invalid_dropped + self.duplicates_collapsed + self.records
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub snapshot_date: NaiveDate,
    pub record_count: usize,
    pub pipeline_version: String,
    pub config_checksums: BTreeMap<String, String>,
    /// SHA-256 of the records file.
    pub records_sha256: String,
    pub counters: StageCounters,
}

/// A dated, sorted set of records. Stored as a directory holding
/// `records.jsonl` and `manifest.json`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSnapshot {
    pub manifest: Manifest,
    pub records: Vec<DatasetRecord>,
}

impl CorpusSnapshot {
    /// Sorts the records and fills in the count and checksum.
    pub fn new(
        snapshot_date: NaiveDate,
        mut records: Vec<DatasetRecord>,
        config_checksums: BTreeMap<String, String>,
        counters: StageCounters,
    ) -> Result<Self> {
        records.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        let body = encode_records(&records)?;
        Ok(CorpusSnapshot {
            manifest: Manifest {
                snapshot_date,
                record_count: records.len(),
                pipeline_version: PIPELINE_VERSION.to_string(),
                config_checksums,
                records_sha256: sha256_hex(&body),
                counters,
            },
            records,
        })
    }

    pub fn date(&self) -> NaiveDate {
        self.manifest.snapshot_date
    }
}

pub fn encode_records(records: &[DatasetRecord]) -> Result<Vec<u8>> {
    let mut body = Vec::new();
    for r in records {
        serde_json::to_writer(&mut body, r).map_err(|e| Error::InvalidArgument(format!("record encoding: {e}")))?;
        body.push(b'\n');
    }
    Ok(body)
}

fn write_new(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    let mut f = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    f.write_all(bytes).and_then(|_| f.sync_all()).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// Writes a snapshot into a new or empty directory. Existing snapshots are
/// never overwritten.
pub fn write_snapshot(snapshot: &CorpusSnapshot, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for name in [RECORDS_FILE, MANIFEST_FILE] {
        if dir.join(name).exists() {
            return Err(Error::InvalidArgument(format!(
                "{} already holds a snapshot; snapshots are immutable",
                dir.display()
            )));
        }
    }
    let body = encode_records(&snapshot.records)?;
    let actual = sha256_hex(&body);
    if actual != snapshot.manifest.records_sha256 || snapshot.manifest.record_count != snapshot.records.len() {
        return Err(Error::InvalidArgument("manifest does not describe the records".into()));
    }
    let mut manifest = serde_json::to_vec_pretty(&snapshot.manifest)
        .map_err(|e| Error::InvalidArgument(format!("manifest encoding: {e}")))?;
    manifest.push(b'\n');
    write_new(&dir.join(RECORDS_FILE), &body)?;
    write_new(&dir.join(MANIFEST_FILE), &manifest)
}

pub fn read_manifest(dir: &Path) -> Result<Manifest> {
    let path = dir.join(MANIFEST_FILE);
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::MalformedSnapshot {
        path: path.clone(),
        line: e.line(),
        message: e.to_string(),
    })
}

/// Reads and verifies a snapshot: every line must parse, the count must
/// match the manifest, then the checksum must match.
pub fn read_snapshot(dir: &Path) -> Result<CorpusSnapshot> {
    let manifest = read_manifest(dir)?;
    let path: PathBuf = dir.join(RECORDS_FILE);
    let body = fs::read(&path).map_err(|e| Error::io(&path, e))?;
    let text = std::str::from_utf8(&body).map_err(|e| Error::MalformedSnapshot {
        path: path.clone(),
        line: body[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1,
        message: "invalid UTF-8".into(),
    })?;
    let mut records = Vec::with_capacity(manifest.record_count);
    for (i, line) in text.split_inclusive('\n').enumerate() {
        let malformed = |message: String| Error::MalformedSnapshot {
            path: path.clone(),
            line: i + 1,
            message,
        };
        let Some(json) = line.strip_suffix('\n') else {
            return Err(malformed("truncated line (no newline terminator)".into()));
        };
        let record: DatasetRecord = serde_json::from_str(json).map_err(|e| malformed(e.to_string()))?;
        records.push(record);
    }
    if records.len() != manifest.record_count {
        return Err(Error::ManifestMismatch {
            declared: manifest.record_count,
            actual: records.len(),
        });
    }
    let actual = sha256_hex(&body);
    if actual != manifest.records_sha256 {
        return Err(Error::ChecksumMismatch {
            path,
            expected: manifest.records_sha256.clone(),
            actual,
        });
    }
    if let Some(i) = records.windows(2).position(|w| w[0].sort_key() > w[1].sort_key()) {
        return Err(Error::MalformedSnapshot {
            path,
            line: i + 2,
            message: "records out of order".into(),
        });
    }
    Ok(CorpusSnapshot { manifest, records })
}
