//! Album summary content: top photos and albums with a similar audience.

use std::cmp::Reverse;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::audience::effective_audience;
use crate::ids::{AlbumId, PhotoId, UserId};
use crate::misconfig::{Misconfiguration, ScanReport};
use crate::model::{Album, Dataset, Policy, ValidationError};

/// Number of similar albums shown in an album summary.
pub const SIMILAR_ALBUMS: usize = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InsightError {
    #[error("unknown album {0:?}")]
    UnknownAlbum(String),
    #[error(transparent)]
    Validation(#[from] ValidationError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarAlbum {
    pub album: AlbumId,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlbumDetail {
    pub id: AlbumId,
    pub name: String,
    pub description: String,
    pub photo_count: usize,
    pub policy: Policy,
    pub misconfigurations: Vec<Misconfiguration>,
    pub sensitivity: f64,
    pub most_liked: Option<PhotoId>,
    pub most_commented: Option<PhotoId>,
    pub similar: Vec<SimilarAlbum>,
}

/// Most liked and most commented photo; ties go to the smallest photo id.
pub fn top_photos(album: &Album) -> (Option<PhotoId>, Option<PhotoId>) {
    let liked = album.photos.iter().min_by_key(|p| (Reverse(p.likes), &p.id)).map(|p| p.id.clone());
    let commented = album.photos.iter().min_by_key(|p| (Reverse(p.comments), &p.id)).map(|p| p.id.clone());
    (liked, commented)
}

fn jaccard(a: &BTreeSet<UserId>, b: &BTreeSet<UserId>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        return 1.0;
    }
    a.intersection(b).count() as f64 / union as f64
}

/// The `k` other albums whose effective audience overlaps most with this
/// album's (Jaccard index), best first, ties by album id.
pub fn similar_albums(id: &AlbumId, ds: &Dataset, k: usize) -> Result<Vec<SimilarAlbum>, InsightError> {
    let album = ds.album(id).ok_or_else(|| InsightError::UnknownAlbum(id.to_string()))?;
    let mine = effective_audience(&album.policy, ds)?;
    let mut scored = ds
        .albums
        .iter()
        .filter(|b| b.id != album.id)
        .map(|b| {
            let theirs = effective_audience(&b.policy, ds)?;
            Ok(SimilarAlbum { album: b.id.clone(), score: jaccard(&mine, &theirs) })
        })
        .collect::<Result<Vec<_>, InsightError>>()?;
    scored.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.album.cmp(&b.album)));
    scored.truncate(k);
    Ok(scored)
}

/// Everything the album summary view shows, with findings taken from the
/// album's group in `report`.
pub fn album_detail(ds: &Dataset, report: &ScanReport, id: &AlbumId) -> Result<AlbumDetail, InsightError> {
    let album = ds.album(id).ok_or_else(|| InsightError::UnknownAlbum(id.to_string()))?;
    let (most_liked, most_commented) = top_photos(album);
    let group = report.group_of(id);
    Ok(AlbumDetail {
        id: album.id.clone(),
        name: album.name.clone(),
        description: album.description.clone(),
        photo_count: album.photos.len(),
        policy: album.policy.clone(),
        misconfigurations: group.map(|g| g.misconfigurations.clone()).unwrap_or_default(),
        sensitivity: group.map_or(0.0, |g| g.sensitivity),
        most_liked,
        most_commented,
        similar: similar_albums(id, ds, SIMILAR_ALBUMS)?,
    })
}
