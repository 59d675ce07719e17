//! Reading and atomically writing dataset documents.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use tempfile::NamedTempFile;
use thiserror::Error;

use crate::model::{Dataset, ValidationError};

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed dataset document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid dataset: {0}")]
    Validation(#[from] ValidationError),
}

impl DatasetError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        DatasetError::Io { path: path.to_owned(), source }
    }
}

/// Parses and validates a dataset document.
pub fn parse(text: &str) -> Result<Dataset, DatasetError> {
    let ds: Dataset = serde_json::from_str(text)?;
    ds.validate()?;
    Ok(ds)
}

pub fn load(path: impl AsRef<Path>) -> Result<Dataset, DatasetError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| DatasetError::io(path, e))?;
    parse(&text)
}

/// The on-disk form: pretty-printed JSON with sorted keys.
pub fn to_document(ds: &Dataset) -> String {
    let value = serde_json::to_value(ds).expect("dataset serializes");
    let mut doc = serde_json::to_string_pretty(&value).expect("value serializes");
    doc.push('\n');
    doc
}

/// A fully written and synced temporary file next to its target, waiting to
/// be renamed into place. Dropping it without [`StagedSave::commit`] removes
/// the temporary file and leaves the target untouched.
#[derive(Debug)]
pub struct StagedSave {
    tmp: NamedTempFile,
    target: PathBuf,
}

impl StagedSave {
    pub fn temp_path(&self) -> &Path {
        self.tmp.path()
    }

    pub fn commit(self) -> Result<(), DatasetError> {
        let target = self.target;
        self.tmp.persist(&target).map_err(|e| DatasetError::io(&target, e.error))?;
        Ok(())
    }
}

pub fn stage(ds: &Dataset, path: impl AsRef<Path>) -> Result<StagedSave, DatasetError> {
    let target = path.as_ref().to_owned();
    let dir = match target.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_owned(),
        _ => PathBuf::from("."),
    };
    let prefix = format!(".{}.", target.file_name().and_then(|n| n.to_str()).unwrap_or("dataset"));
    let mut tmp = tempfile::Builder::new()
        .prefix(&prefix)
        .suffix(".tmp")
        .tempfile_in(&dir)
        .map_err(|e| DatasetError::io(&dir, e))?;
    let doc = to_document(ds);
    tmp.write_all(doc.as_bytes()).map_err(|e| DatasetError::io(tmp.path(), e))?;
    tmp.as_file().sync_all().map_err(|e| DatasetError::io(tmp.path(), e))?;
    Ok(StagedSave { tmp, target })
}

/// Writes `ds` to `path` via write-to-temp and rename, so readers only ever
/// see the old or the new document.
pub fn save(ds: &Dataset, path: impl AsRef<Path>) -> Result<(), DatasetError> {
    stage(ds, path)?.commit()
}
