//! Audit photo-album privacy policies for misconfigurations and lay the
//! results out as a two-level treemap.
//!
//! Albums are grouped by the policy the owner composed ([`grouping`]), each
//! group is checked against six misconfiguration rules ([`misconfig`]), and
//! the report is drawn as nested rectangles colored by sensitivity
//! ([`treemap`], [`svg`]).

pub mod audience;
pub mod generate;
pub mod grouping;
pub mod ids;
pub mod insights;
pub mod io;
pub mod misconfig;
pub mod model;
pub mod svg;
pub mod treemap;

pub use audience::{effective_audience, resolve_refs};
pub use grouping::{canonical_policy_key, group_albums, AlbumGroup, PolicyKey};
pub use ids::{AlbumId, ListId, NetworkId, PhotoId, UserId};
pub use misconfig::{scan, Evidence, GroupReport, MisconfigKind, Misconfiguration, ScanReport};
pub use model::{
    Album, AudienceRefs, Dataset, Field, FriendList, Network, Photo, Policy, Preset, User, ValidationCode,
    ValidationError,
};
pub use generate::{generate, GenerateError, GenerateParams};
pub use insights::{album_detail, similar_albums, top_photos, AlbumDetail, InsightError, SimilarAlbum};
pub use io::{load, save, DatasetError};
pub use svg::render_svg;
pub use treemap::{build_level1, build_level2, build_tree, color_for, squarify, LayoutError, LayoutNode, Rect, Rgb};
