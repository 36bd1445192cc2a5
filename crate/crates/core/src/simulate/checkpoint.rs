//! Resumable progress files.
//!
//! An append-only log of canonical JSON lines:
//!
//! ```text
//! {"format":"thd-checkpoint","input_digest":"…","plan_digest":"…","version":2}
//! {"record":{…},"source":"v017"}          one line per completed source
//! …
//! {"digest":"…","records":N}              seal after every chunk
//! ```
//!
//! A seal holds the SHA-256 of every record line before it and their count.
//! Sealed content that fails its digest makes the file corrupt. Lines after
//! the last seal are a chunk that was being written when the run stopped;
//! they are ignored on load and cut off before the run appends again.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::result::SourceRecord;
use super::SimError;
use crate::io::to_canonical_vec;

pub const CHECKPOINT_FORMAT: &str = "thd-checkpoint";
pub const CHECKPOINT_VERSION: u32 = 2;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckpointHeader {
    pub format: String,
    pub version: u32,
    pub input_digest: String,
    pub plan_digest: String,
}

impl CheckpointHeader {
    pub fn new(input_digest: String, plan_digest: String) -> Self {
        Self { format: CHECKPOINT_FORMAT.into(), version: CHECKPOINT_VERSION, input_digest, plan_digest }
    }
}

#[derive(Serialize)]
struct LineOut<'a> {
    source: &'a str,
    record: &'a SourceRecord,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LineIn {
    source: String,
    record: SourceRecord,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Seal {
    records: usize,
    digest: String,
}

/// The sealed content of a checkpoint file.
#[derive(Clone, Debug)]
pub struct Checkpoint {
    pub header: CheckpointHeader,
    pub completed: BTreeMap<String, SourceRecord>,
    /// byte length of the sealed prefix
    sealed_len: u64,
    hasher: Sha256,
    /// unsealed lines found after the last seal
    pub discarded_lines: usize,
}

impl PartialEq for Checkpoint {
    fn eq(&self, other: &Self) -> bool {
        self.header == other.header && self.completed == other.completed
    }
}

fn temp_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".tmp");
    path.with_file_name(name)
}

/// Appends sealed chunks of completed sources to a checkpoint file.
pub struct CheckpointWriter {
    file: BufWriter<File>,
    hasher: Sha256,
    records: usize,
}

impl CheckpointWriter {
    /// Starts a new file holding only the header, replacing any file at
    /// `path` atomically.
    pub fn create(path: &Path, header: &CheckpointHeader) -> Result<Self, SimError> {
        let tmp = temp_path(path);
        let mut file = File::create(&tmp)?;
        file.write_all(&to_canonical_vec(header))?;
        file.sync_all()?;
        fs::rename(&tmp, path)?;
        let file = OpenOptions::new().append(true).open(path)?;
        Ok(Self { file: BufWriter::new(file), hasher: Sha256::new(), records: 0 })
    }

    /// Continues a loaded checkpoint, dropping any unsealed tail first.
    pub fn resume(path: &Path, cp: &Checkpoint) -> Result<Self, SimError> {
        let file = OpenOptions::new().write(true).open(path)?;
        file.set_len(cp.sealed_len)?;
        drop(file);
        let file = OpenOptions::new().append(true).open(path)?;
        Ok(Self { file: BufWriter::new(file), hasher: cp.hasher.clone(), records: cp.completed.len() })
    }

    /// Writes the records and a seal covering them, then syncs the file.
    pub fn append<'a, I>(&mut self, records: I) -> Result<(), SimError>
    where
        I: IntoIterator<Item = (&'a str, &'a SourceRecord)>,
    {
        for (source, record) in records {
            let line = to_canonical_vec(&LineOut { source, record });
            self.hasher.update(&line);
            self.file.write_all(&line)?;
            self.records += 1;
        }
        let seal = Seal { records: self.records, digest: format!("{:x}", self.hasher.clone().finalize()) };
        self.file.write_all(&to_canonical_vec(&seal))?;
        self.file.flush()?;
        self.file.get_ref().sync_data()?;
        Ok(())
    }
}

/// Writes `completed` as a fresh single-chunk checkpoint.
pub fn checkpoint_write(
    path: &Path,
    header: &CheckpointHeader,
    completed: &BTreeMap<String, SourceRecord>,
) -> Result<(), SimError> {
    let mut w = CheckpointWriter::create(path, header)?;
    w.append(completed.iter().map(|(s, r)| (s.as_str(), r)))
}

pub fn checkpoint_load(path: &Path) -> Result<Checkpoint, SimError> {
    let corrupt = |m: String| SimError::CorruptCheckpoint(format!("{}: {m}", path.display()));
    let mut reader = BufReader::new(File::open(path)?);
    let mut line = Vec::new();

    let n = reader.read_until(b'\n', &mut line)?;
    if n == 0 || line.last() != Some(&b'\n') {
        return Err(corrupt("truncated or empty".into()));
    }
    let header: CheckpointHeader =
        serde_json::from_slice(&line).map_err(|_| corrupt("not a checkpoint file".into()))?;
    if header.format != CHECKPOINT_FORMAT {
        return Err(corrupt("not a checkpoint file".into()));
    }
    if header.version != CHECKPOINT_VERSION {
        return Err(corrupt(format!("unsupported version {}", header.version)));
    }

    let mut offset = n as u64;
    let mut sealed_len = offset;
    let mut completed = BTreeMap::new();
    let mut pending: Vec<(String, SourceRecord)> = Vec::new();
    let mut hasher = Sha256::new();
    let mut sealed_hasher = hasher.clone();
    let mut unsealed = 0;
    loop {
        line.clear();
        let n = reader.read_until(b'\n', &mut line)?;
        if n == 0 {
            break;
        }
        offset += n as u64;
        let complete = line.last() == Some(&b'\n');
        if let Ok(seal) = serde_json::from_slice::<Seal>(&line) {
            if !complete {
                unsealed += 1;
                break;
            }
            let records = completed.len() + pending.len();
            if seal.records != records || seal.digest != format!("{:x}", hasher.clone().finalize()) {
                return Err(corrupt(format!("seal after {records} records does not match its content")));
            }
            for (source, record) in pending.drain(..) {
                if completed.insert(source, record).is_some() {
                    return Err(corrupt("duplicate source".into()));
                }
            }
            sealed_len = offset;
            sealed_hasher = hasher.clone();
            unsealed = 0;
            continue;
        }
        unsealed += 1;
        hasher.update(&line);
        // An unreadable line is fatal only if a later seal vouches for it;
        // the seal digest catches that case.
        match serde_json::from_slice::<LineIn>(&line) {
            Ok(LineIn { source, record }) if complete => pending.push((source, record)),
            _ => pending.push((String::new(), SourceRecord { t0: Default::default(), metrics: BTreeMap::new() })),
        }
    }
    if unsealed > 0 {
        log::warn!("{}: ignoring {unsealed} unsealed trailing lines", path.display());
    }
    Ok(Checkpoint { header, completed, sealed_len, hasher: sealed_hasher, discarded_lines: unsealed })
}
