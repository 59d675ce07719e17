//! Shared service state and the operations behind each endpoint.
//!
//! Readers take a cheap `Arc` clone of the latest committed snapshot. Policy
//! edits are serialized by a writer mutex, rescan and save a private copy of
//! the dataset, and only publish the new snapshot once the file is on disk.

use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use albumaudit_core::insights::album_detail;
use albumaudit_core::{
    build_level1, build_level2, color_for, io, scan, AlbumDetail, AlbumId, Dataset, DatasetError, InsightError,
    LayoutError, LayoutNode, Policy, PolicyKey, Rect, Rgb, ScanReport, ValidationError,
};
use serde::Serialize;
use serde_json::value::RawValue;

pub const DEFAULT_VIEWPORT: Rect = Rect::new(0.0, 0.0, 1000.0, 600.0);

/// Length of the fingerprint prefix embedded in group handles.
const HANDLE_PREFIX: usize = 16;

#[derive(Debug)]
pub enum ServiceError {
    Validation(ValidationError),
    BadRequest { code: &'static str, message: String },
    NotFound { what: &'static str, id: String },
    Io(String),
}

impl From<ValidationError> for ServiceError {
    fn from(e: ValidationError) -> Self {
        ServiceError::Validation(e)
    }
}

impl From<LayoutError> for ServiceError {
    fn from(e: LayoutError) -> Self {
        match e {
            LayoutError::UnknownGroup(id) => ServiceError::NotFound { what: "group", id },
            LayoutError::UnknownAlbum(id) => ServiceError::NotFound { what: "album", id },
            other => ServiceError::BadRequest { code: "invalid_layout", message: other.to_string() },
        }
    }
}

impl From<InsightError> for ServiceError {
    fn from(e: InsightError) -> Self {
        match e {
            InsightError::UnknownAlbum(id) => ServiceError::NotFound { what: "album", id },
            InsightError::Validation(v) => ServiceError::Validation(v),
        }
    }
}

/// One consistent view of the dataset and the report computed from it.
#[derive(Debug)]
pub struct Snapshot {
    pub dataset: Dataset,
    pub report: ScanReport,
}

impl Snapshot {
    fn handle(&self, key: &PolicyKey) -> String {
        format!("{}.{}", &self.report.fingerprint[..HANDLE_PREFIX], key)
    }
}

/// Level-1 payload. The report is embedded verbatim in its CLI wire form.
#[derive(Debug, Clone)]
pub struct ScanView {
    pub report: ScanReport,
    pub viewport: Rect,
    pub layout: Vec<LayoutNode>,
}

impl Serialize for ScanView {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            fingerprint: &'a str,
            viewport: &'a Rect,
            layout: &'a [LayoutNode],
            report: &'a RawValue,
        }
        let raw = RawValue::from_string(self.report.to_json()).map_err(serde::ser::Error::custom)?;
        Wire { fingerprint: &self.report.fingerprint, viewport: &self.viewport, layout: &self.layout, report: &raw }
            .serialize(serializer)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AlbumSummary {
    pub id: AlbumId,
    pub name: String,
    pub photo_count: usize,
}

/// Level-2 payload for one policy group.
#[derive(Debug, Clone, Serialize)]
pub struct GroupView {
    pub handle: String,
    pub key: PolicyKey,
    pub policy: Policy,
    pub summary: String,
    pub sensitivity: f64,
    pub color: Rgb,
    pub viewport: Rect,
    pub layout: Vec<LayoutNode>,
    pub albums: Vec<AlbumSummary>,
}

#[derive(Debug)]
pub struct AuditService {
    path: PathBuf,
    current: RwLock<Arc<Snapshot>>,
    writer: Mutex<()>,
}

impl AuditService {
    /// Loads, validates and scans the dataset at `path`.
    pub fn open(path: impl AsRef<Path>) -> Result<Self, DatasetError> {
        let path = path.as_ref().to_owned();
        let dataset = io::load(&path)?;
        let report = scan(&dataset)?;
        Ok(Self { path, current: RwLock::new(Arc::new(Snapshot { dataset, report })), writer: Mutex::new(()) })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn snapshot(&self) -> Arc<Snapshot> {
        self.current.read().expect("snapshot lock poisoned").clone()
    }

    pub fn get_scan(&self, viewport: Rect) -> Result<ScanView, ServiceError> {
        let snap = self.snapshot();
        scan_view(&snap, viewport)
    }

    /// `handle` is `<fingerprint prefix>.<policy key>` as returned by
    /// [`AuditService::get_scan`]; handles from an older report are not found.
    pub fn get_group(&self, handle: &str, viewport: Rect) -> Result<GroupView, ServiceError> {
        let snap = self.snapshot();
        let not_found = || ServiceError::NotFound { what: "group", id: handle.to_owned() };
        let (prefix, key) = handle.split_once('.').ok_or_else(not_found)?;
        if prefix != &snap.report.fingerprint[..HANDLE_PREFIX] {
            return Err(not_found());
        }
        let key = PolicyKey::from_raw(key);
        let group = snap.report.group(&key).ok_or_else(not_found)?;
        let layout = build_level2(&snap.report, &key, &snap.dataset, viewport)?;
        let albums = group
            .albums
            .iter()
            .filter_map(|id| snap.dataset.album(id))
            .map(|a| AlbumSummary { id: a.id.clone(), name: a.name.clone(), photo_count: a.photos.len() })
            .collect();
        Ok(GroupView {
            handle: handle.to_owned(),
            key: key.clone(),
            policy: group.policy.clone(),
            summary: group.policy.summary(),
            sensitivity: group.sensitivity,
            color: color_for(group.sensitivity)?,
            viewport,
            layout,
            albums,
        })
    }

    pub fn get_album(&self, id: &str) -> Result<AlbumDetail, ServiceError> {
        let snap = self.snapshot();
        Ok(album_detail(&snap.dataset, &snap.report, &AlbumId::new(id))?)
    }

    /// Replaces one album's policy, rescans, persists atomically and only
    /// then publishes the new state. Any failure leaves memory and disk as
    /// they were.
    pub fn put_album_policy(&self, id: &str, policy: Policy, viewport: Rect) -> Result<ScanView, ServiceError> {
        let _writer = self.writer.lock().expect("writer lock poisoned");
        let snap = self.snapshot();
        let mut dataset = snap.dataset.clone();
        let album = dataset
            .album_mut(&AlbumId::new(id))
            .ok_or_else(|| ServiceError::NotFound { what: "album", id: id.to_owned() })?;
        policy.validate(&snap.dataset)?;
        album.policy = policy;
        let report = scan(&dataset)?;
        io::save(&dataset, &self.path).map_err(|e| ServiceError::Io(e.to_string()))?;

        let next = Arc::new(Snapshot { dataset, report });
        *self.current.write().expect("snapshot lock poisoned") = next.clone();
        scan_view(&next, viewport)
    }
}

fn scan_view(snap: &Snapshot, viewport: Rect) -> Result<ScanView, ServiceError> {
    let mut layout = build_level1(&snap.report, viewport)?;
    for node in &mut layout {
        node.id = snap.handle(&PolicyKey::from_raw(node.id.clone()));
    }
    Ok(ScanView { report: snap.report.clone(), viewport, layout })
}
