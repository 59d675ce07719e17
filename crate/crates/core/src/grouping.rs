//! Grouping albums by the policy the owner wrote.
//!
//! Identity is syntactic: two custom policies are the same group only when
//! they name the same friends and lists in the same fields. List membership
//! is not expanded.

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::ids::AlbumId;
use crate::model::{Dataset, Policy};

/// Printable, URL-safe identity of a policy.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PolicyKey(String);

impl PolicyKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Wraps a key received from a client. No check that it names a group.
    pub fn from_raw(s: impl Into<String>) -> Self {
        Self(s.into())
    }
}

impl fmt::Display for PolicyKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn canonical_policy_key(policy: &Policy) -> PolicyKey {
    match policy.preset() {
        Some(preset) => PolicyKey(preset.as_str().to_owned()),
        None => {
            // Set-typed fields serialize sorted, so field order in the source
            // document does not matter.
            let canonical = serde_json::to_string(policy).expect("policy serializes");
            let digest = Sha256::digest(canonical.as_bytes());
            PolicyKey(format!("custom-{}", hex::encode(&digest[..8])))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlbumGroup {
    pub key: PolicyKey,
    pub policy: Policy,
    pub albums: Vec<AlbumId>,
}

/// Partitions albums by policy key. Largest groups first, ties by key;
/// albums inside a group keep dataset order.
pub fn group_albums(ds: &Dataset) -> Vec<AlbumGroup> {
    let mut groups: Vec<AlbumGroup> = Vec::new();
    for album in &ds.albums {
        let key = canonical_policy_key(&album.policy);
        match groups.iter_mut().find(|g| g.key == key) {
            Some(g) => g.albums.push(album.id.clone()),
            None => groups.push(AlbumGroup {
                key,
                policy: album.policy.clone(),
                albums: vec![album.id.clone()],
            }),
        }
    }
    groups.sort_by(|a, b| b.albums.len().cmp(&a.albums.len()).then_with(|| a.key.cmp(&b.key)));
    groups
}
