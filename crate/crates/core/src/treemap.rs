//! Squarified treemap layout of a scan report.
//!
//! Level 1 has one tile per policy group, sized by album count. Level 2
//! tiles the albums of one group, sized by photo count. Every tile takes the
//! color of its group's sensitivity.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grouping::PolicyKey;
use crate::misconfig::{GroupReport, ScanReport};
use crate::model::Dataset;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum LayoutError {
    #[error("container must have positive finite size, got {w}x{h}")]
    DegenerateContainer { w: f64, h: f64 },
    #[error("weight for {id:?} must be positive and finite, got {weight}")]
    InvalidWeight { id: String, weight: f64 },
    #[error("sensitivity {0} is outside {{0}} and [0.1, 1]")]
    SensitivityOutOfRange(f64),
    #[error("unknown group {0:?}")]
    UnknownGroup(String),
    #[error("unknown album {0:?}")]
    UnknownAlbum(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl Rect {
    pub const fn new(x: f64, y: f64, w: f64, h: f64) -> Self {
        Self { x, y, w, h }
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    /// Area shared by the interiors of two rectangles.
    pub fn overlap_area(&self, other: &Rect) -> f64 {
        let w = (self.x + self.w).min(other.x + other.w) - self.x.max(other.x);
        let h = (self.y + self.h).min(other.y + other.h) - self.y.max(other.y);
        w.max(0.0) * h.max(0.0)
    }

    fn check(&self) -> Result<(), LayoutError> {
        let ok = [self.x, self.y, self.w, self.h].iter().all(|v| v.is_finite()) && self.w > 0.0 && self.h > 0.0;
        if ok {
            Ok(())
        } else {
            Err(LayoutError::DegenerateContainer { w: self.w, h: self.h })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rgb(pub u8, pub u8, pub u8);

impl fmt::Display for Rgb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rgb({},{},{})", self.0, self.1, self.2)
    }
}

/// Color of groups with no findings. Deliberately off the yellow-red ramp.
pub const CLEAN_GRAY: Rgb = Rgb(158, 158, 158);

/// Maps a group sensitivity to a tile color: gray for 0, otherwise a linear
/// ramp from yellow (low) to red (1.0).
pub fn color_for(sensitivity: f64) -> Result<Rgb, LayoutError> {
    if sensitivity == 0.0 {
        return Ok(CLEAN_GRAY);
    }
    if !(0.1..=1.0).contains(&sensitivity) {
        return Err(LayoutError::SensitivityOutOfRange(sensitivity));
    }
    let green = (255.0 * (1.0 - sensitivity)).round() as u8;
    Ok(Rgb(255, green, 0))
}

/// Worst aspect ratio of a row of areas laid along a side of length `side`.
fn worst(sum: f64, largest: f64, smallest: f64, side: f64) -> f64 {
    let s2 = side * side;
    let sum2 = sum * sum;
    (s2 * largest / sum2).max(sum2 / (s2 * smallest))
}

/// Tiles `container` with one rectangle per item, each with area
/// proportional to its weight.
///
/// Items are placed largest first (ties by id) so the output does not depend
/// on input order. Rows run along the shorter side of the remaining space and
/// a row is closed as soon as adding the next item would make its worst
/// aspect ratio worse.
pub fn squarify<K>(container: Rect, items: &[(K, f64)]) -> Result<Vec<(K, Rect)>, LayoutError>
where
    K: Clone + Ord + fmt::Display,
{
    container.check()?;
    for (id, weight) in items {
        if !(weight.is_finite() && *weight > 0.0) {
            return Err(LayoutError::InvalidWeight { id: id.to_string(), weight: *weight });
        }
    }
    if items.is_empty() {
        return Ok(Vec::new());
    }

    let mut order: Vec<&(K, f64)> = items.iter().collect();
    order.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));

    let total: f64 = order.iter().map(|(_, w)| w).sum();
    let scale = container.area() / total;
    let areas: Vec<f64> = order.iter().map(|(_, w)| w * scale).collect();

    let mut out = Vec::with_capacity(order.len());
    let mut free = container;
    let mut start = 0;
    while start < areas.len() {
        let side = free.w.min(free.h);
        let mut end = start + 1;
        let mut sum = areas[start];
        while end < areas.len() {
            let current = worst(sum, areas[start], areas[end - 1], side);
            let next = worst(sum + areas[end], areas[start], areas[end], side);
            if next > current {
                break;
            }
            sum += areas[end];
            end += 1;
        }
        let last_row = end == areas.len();

        if free.w >= free.h {
            // Column against the left edge, filled top to bottom.
            let thickness = if last_row { free.w } else { (sum / free.h).min(free.w) };
            let mut y = free.y;
            for i in start..end {
                let len = if i + 1 == end { free.y + free.h - y } else { areas[i] / thickness };
                out.push((order[i].0.clone(), Rect::new(free.x, y, thickness, len.max(0.0))));
                y += len;
            }
            free = Rect::new(free.x + thickness, free.y, (free.w - thickness).max(0.0), free.h);
        } else {
            // Row against the top edge, filled left to right.
            let thickness = if last_row { free.h } else { (sum / free.w).min(free.h) };
            let mut x = free.x;
            for i in start..end {
                let len = if i + 1 == end { free.x + free.w - x } else { areas[i] / thickness };
                out.push((order[i].0.clone(), Rect::new(x, free.y, len.max(0.0), thickness)));
                x += len;
            }
            free = Rect::new(free.x, free.y + thickness, free.w, (free.h - thickness).max(0.0));
        }
        start = end;
    }
    Ok(out)
}

/// A positioned, colored tile. Level-1 nodes may carry their albums as
/// `children` (see [`build_tree`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutNode {
    pub id: String,
    pub label: String,
    pub rect: Rect,
    pub color: Rgb,
    pub weight: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<LayoutNode>,
}

/// One tile per policy group, sized by album count.
pub fn build_level1(report: &ScanReport, viewport: Rect) -> Result<Vec<LayoutNode>, LayoutError> {
    viewport.check()?;
    let items: Vec<(&str, f64)> = report.groups.iter().map(|g| (g.key.as_str(), g.albums.len() as f64)).collect();
    squarify(viewport, &items)?
        .into_iter()
        .map(|(key, rect)| {
            let group = report.groups.iter().find(|g| g.key.as_str() == key).expect("key from report");
            Ok(LayoutNode {
                id: key.to_owned(),
                label: group.policy.summary(),
                rect,
                color: color_for(group.sensitivity)?,
                weight: group.albums.len() as f64,
                children: Vec::new(),
            })
        })
        .collect()
}

/// One tile per album in the group, sized by photo count (at least 1).
pub fn build_level2(
    report: &ScanReport,
    key: &PolicyKey,
    ds: &Dataset,
    viewport: Rect,
) -> Result<Vec<LayoutNode>, LayoutError> {
    let group = report.group(key).ok_or_else(|| LayoutError::UnknownGroup(key.to_string()))?;
    album_tiles(group, ds, viewport)
}

fn album_tiles(group: &GroupReport, ds: &Dataset, viewport: Rect) -> Result<Vec<LayoutNode>, LayoutError> {
    viewport.check()?;
    let color = color_for(group.sensitivity)?;
    let albums = group
        .albums
        .iter()
        .map(|id| ds.album(id).ok_or_else(|| LayoutError::UnknownAlbum(id.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let items: Vec<(&str, f64)> = albums.iter().map(|a| (a.id.as_str(), a.photos.len().max(1) as f64)).collect();
    Ok(squarify(viewport, &items)?
        .into_iter()
        .map(|(id, rect)| {
            let album = albums.iter().find(|a| a.id.as_str() == id).expect("id from group");
            LayoutNode {
                id: id.to_owned(),
                label: album.name.clone(),
                rect,
                color,
                weight: album.photos.len().max(1) as f64,
                children: Vec::new(),
            }
        })
        .collect())
}

/// Level 1 with every group's albums nested inside its tile.
pub fn build_tree(report: &ScanReport, ds: &Dataset, viewport: Rect) -> Result<Vec<LayoutNode>, LayoutError> {
    let mut nodes = build_level1(report, viewport)?;
    for node in &mut nodes {
        let group = report.group(&PolicyKey::from_raw(node.id.clone())).expect("node from report");
        node.children = album_tiles(group, ds, node.rect)?;
    }
    Ok(nodes)
}
