//! Dataset model: the owner's users, friendships, friend lists, networks and
//! albums, plus the referential validation every other module relies on.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::ids::{AlbumId, ListId, NetworkId, PhotoId, UserId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct User {
    pub id: UserId,
    pub name: String,
}

/// A friend list. `smart` lists are maintained automatically by the network
/// (work, school, hometown) rather than by the owner.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FriendList {
    pub id: ListId,
    pub name: String,
    pub members: BTreeSet<UserId>,
    pub smart: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Network {
    pub id: NetworkId,
    pub name: String,
    pub members: BTreeSet<UserId>,
}

/// One side (allowed or denied) of a custom policy.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AudienceRefs {
    pub friends: BTreeSet<UserId>,
    pub lists: BTreeSet<ListId>,
}

impl AudienceRefs {
    pub fn is_empty(&self) -> bool {
        self.friends.is_empty() && self.lists.is_empty()
    }
}

/// Which field of a custom policy a reference appears in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    Allowed,
    Denied,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::Allowed => "allowed",
            Field::Denied => "denied",
        })
    }
}

/// Named visibility settings that carry no allow/deny fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Public,
    FriendsOfFriends,
    FriendsAndNetworks,
    Friends,
    OnlyMe,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::Public,
        Preset::FriendsOfFriends,
        Preset::FriendsAndNetworks,
        Preset::Friends,
        Preset::OnlyMe,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Preset::Public => "public",
            Preset::FriendsOfFriends => "friends_of_friends",
            Preset::FriendsAndNetworks => "friends_and_networks",
            Preset::Friends => "friends",
            Preset::OnlyMe => "only_me",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Preset::Public => "Public",
            Preset::FriendsOfFriends => "Friends of Friends",
            Preset::FriendsAndNetworks => "Friends and Networks",
            Preset::Friends => "Friends",
            Preset::OnlyMe => "Only Me",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An album's visibility setting.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Policy {
    Public,
    FriendsOfFriends,
    FriendsAndNetworks,
    Friends,
    OnlyMe,
    Custom {
        allowed: AudienceRefs,
        denied: AudienceRefs,
    },
}

impl From<Preset> for Policy {
    fn from(p: Preset) -> Self {
        match p {
            Preset::Public => Policy::Public,
            Preset::FriendsOfFriends => Policy::FriendsOfFriends,
            Preset::FriendsAndNetworks => Policy::FriendsAndNetworks,
            Preset::Friends => Policy::Friends,
            Preset::OnlyMe => Policy::OnlyMe,
        }
    }
}

impl Policy {
    pub fn custom(allowed: AudienceRefs, denied: AudienceRefs) -> Self {
        Policy::Custom { allowed, denied }
    }

    pub fn preset(&self) -> Option<Preset> {
        match self {
            Policy::Public => Some(Preset::Public),
            Policy::FriendsOfFriends => Some(Preset::FriendsOfFriends),
            Policy::FriendsAndNetworks => Some(Preset::FriendsAndNetworks),
            Policy::Friends => Some(Preset::Friends),
            Policy::OnlyMe => Some(Preset::OnlyMe),
            Policy::Custom { .. } => None,
        }
    }

    /// The allowed and denied fields of a custom policy.
    pub fn fields(&self) -> Option<(&AudienceRefs, &AudienceRefs)> {
        match self {
            Policy::Custom { allowed, denied } => Some((allowed, denied)),
            _ => None,
        }
    }

    /// Short human-readable summary, e.g. `Custom (+2 friends, +1 list, -1 friend)`.
    pub fn summary(&self) -> String {
        match self {
            Policy::Custom { allowed, denied } => {
                fn count(n: usize, one: &str, many: &str) -> String {
                    format!("{n} {}", if n == 1 { one } else { many })
                }
                let mut parts = Vec::new();
                for (sign, refs) in [('+', allowed), ('-', denied)] {
                    if !refs.friends.is_empty() {
                        parts.push(format!("{sign}{}", count(refs.friends.len(), "friend", "friends")));
                    }
                    if !refs.lists.is_empty() {
                        parts.push(format!("{sign}{}", count(refs.lists.len(), "list", "lists")));
                    }
                }
                if parts.is_empty() {
                    "Custom (empty)".to_owned()
                } else {
                    format!("Custom ({})", parts.join(", "))
                }
            }
            preset => preset.preset().map(Preset::title).unwrap_or_default().to_owned(),
        }
    }

    /// Checks every reference against `ds`. Presets are always valid.
    pub fn validate(&self, ds: &Dataset) -> Result<(), ValidationError> {
        let Some((allowed, denied)) = self.fields() else {
            return Ok(());
        };
        for refs in [allowed, denied] {
            for f in &refs.friends {
                if f.as_str().is_empty() {
                    return Err(ValidationError::new(ValidationCode::EmptyId, ""));
                }
                if !ds.friends.contains(f) {
                    return Err(ValidationError::new(ValidationCode::UnknownFriend, f.as_str()));
                }
            }
            for l in &refs.lists {
                if ds.list(l).is_none() {
                    return Err(ValidationError::new(ValidationCode::UnknownList, l.as_str()));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Photo {
    pub id: PhotoId,
    pub likes: u64,
    pub comments: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Album {
    pub id: AlbumId,
    pub name: String,
    pub description: String,
    pub photos: Vec<Photo>,
    pub policy: Policy,
}

/// The owner's social world as seen by the audit.
///
/// Values are plain data; call [`Dataset::validate`] before handing one to
/// the analysis functions (loading through [`crate::io::load`] does this).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dataset {
    pub owner: UserId,
    pub users: Vec<User>,
    /// The owner's friends.
    pub friends: BTreeSet<UserId>,
    /// Undirected friendships among all users.
    pub friend_edges: Vec<(UserId, UserId)>,
    pub friend_lists: Vec<FriendList>,
    pub networks: Vec<Network>,
    pub albums: Vec<Album>,
}

impl Dataset {
    pub fn list(&self, id: &ListId) -> Option<&FriendList> {
        self.friend_lists.iter().find(|l| &l.id == id)
    }

    pub fn album(&self, id: &AlbumId) -> Option<&Album> {
        self.albums.iter().find(|a| &a.id == id)
    }

    pub fn album_mut(&mut self, id: &AlbumId) -> Option<&mut Album> {
        self.albums.iter_mut().find(|a| &a.id == id)
    }

    pub fn user_ids(&self) -> impl Iterator<Item = &UserId> {
        self.users.iter().map(|u| &u.id)
    }

    pub fn user_name(&self, id: &UserId) -> Option<&str> {
        self.users.iter().find(|u| &u.id == id).map(|u| u.name.as_str())
    }

    /// Canonical JSON form: object keys sorted, integers only, no whitespace.
    pub fn canonical_json(&self) -> String {
        // serde_json::Value keeps object keys in a BTreeMap, so going through
        // it sorts every key.
        let value = serde_json::to_value(self).expect("dataset serializes");
        value.to_string()
    }

    /// SHA-256 of the canonical document, lowercase hex.
    pub fn fingerprint(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }

    /// Fail-fast referential validation; the error names the first
    /// offending id.
    pub fn validate(&self) -> Result<(), ValidationError> {
        use ValidationCode::*;
        let err = ValidationError::new;

        let mut users = HashSet::new();
        for u in &self.users {
            if u.id.as_str().is_empty() {
                return Err(err(EmptyId, ""));
            }
            if !users.insert(&u.id) {
                return Err(err(DuplicateUser, u.id.as_str()));
            }
        }
        let known = |id: &UserId| -> Result<(), ValidationError> {
            if id.as_str().is_empty() {
                Err(err(EmptyId, ""))
            } else if users.contains(id) {
                Ok(())
            } else {
                Err(err(UnknownUser, id.as_str()))
            }
        };

        known(&self.owner)?;
        for f in &self.friends {
            known(f)?;
            if f == &self.owner {
                return Err(err(OwnerAsFriend, f.as_str()));
            }
        }
        for (a, b) in &self.friend_edges {
            known(a)?;
            known(b)?;
            if a == b {
                return Err(err(SelfEdge, a.as_str()));
            }
        }

        let mut lists = HashSet::new();
        for l in &self.friend_lists {
            if l.id.as_str().is_empty() {
                return Err(err(EmptyId, ""));
            }
            if !lists.insert(&l.id) {
                return Err(err(DuplicateList, l.id.as_str()));
            }
            l.members.iter().try_for_each(&known)?;
        }

        let mut networks = HashSet::new();
        for n in &self.networks {
            if n.id.as_str().is_empty() {
                return Err(err(EmptyId, ""));
            }
            if !networks.insert(&n.id) {
                return Err(err(DuplicateNetwork, n.id.as_str()));
            }
            n.members.iter().try_for_each(&known)?;
        }

        let mut albums = HashSet::new();
        for a in &self.albums {
            if a.id.as_str().is_empty() {
                return Err(err(EmptyId, ""));
            }
            if !albums.insert(&a.id) {
                return Err(err(DuplicateAlbum, a.id.as_str()));
            }
            let mut photos = HashSet::new();
            for p in &a.photos {
                if p.id.as_str().is_empty() {
                    return Err(err(EmptyId, ""));
                }
                if !photos.insert(&p.id) {
                    return Err(err(DuplicatePhoto, p.id.as_str()));
                }
            }
            a.policy.validate(self)?;
        }
        Ok(())
    }
}

/// Machine-readable reason a dataset or policy failed validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValidationCode {
    EmptyId,
    DuplicateUser,
    DuplicateList,
    DuplicateNetwork,
    DuplicateAlbum,
    DuplicatePhoto,
    UnknownUser,
    UnknownFriend,
    UnknownList,
    OwnerAsFriend,
    SelfEdge,
}

impl ValidationCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ValidationCode::EmptyId => "empty_id",
            ValidationCode::DuplicateUser => "duplicate_user",
            ValidationCode::DuplicateList => "duplicate_list",
            ValidationCode::DuplicateNetwork => "duplicate_network",
            ValidationCode::DuplicateAlbum => "duplicate_album",
            ValidationCode::DuplicatePhoto => "duplicate_photo",
            ValidationCode::UnknownUser => "unknown_user",
            ValidationCode::UnknownFriend => "unknown_friend",
            ValidationCode::UnknownList => "unknown_list",
            ValidationCode::OwnerAsFriend => "owner_as_friend",
            ValidationCode::SelfEdge => "self_edge",
        }
    }
}

impl fmt::Display for ValidationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("{code}: {id:?}")]
pub struct ValidationError {
    pub code: ValidationCode,
    /// The offending identifier.
    pub id: String,
}

impl ValidationError {
    pub fn new(code: ValidationCode, id: &str) -> Self {
        Self { code, id: id.to_owned() }
    }
}
