//! JSON-over-HTTP service for the album policy audit: level-1 and level-2
//! treemaps, album details, and the fix-and-rescan loop.
//!
//! | method | path                         | body / result                     |
//! |--------|------------------------------|-----------------------------------|
//! | GET    | `/api/scan?w=&h=`            | report + level-1 layout           |
//! | GET    | `/api/groups/{handle}?w=&h=` | level-2 layout + album summaries  |
//! | GET    | `/api/albums/{id}`           | album detail                      |
//! | PUT    | `/api/albums/{id}/policy`    | policy object -> updated report   |
//!
//! Errors: 400 validation (`error` code plus offending `id`), 404 not found,
//! 500 I/O.

mod http;
mod state;

pub use http::{router, serve};
pub use state::{AlbumSummary, AuditService, GroupView, ScanView, ServiceError, Snapshot, DEFAULT_VIEWPORT};
