//! The six album-policy misconfigurations and the scan that aggregates them
//! per policy group.
//!
//! | kind | rule                                                          | weight |
//! |------|---------------------------------------------------------------|--------|
//! | M1   | an empty friend list is allowed or denied                     | 0.1    |
//! | M2   | a friend ends up in both the allowed and the denied field     | 0.2    |
//! | M3   | two lists in the allowed field share members                  | 0.4    |
//! | M4   | a friend denied by name here is allowed in another album      | 0.6    |
//! | M5   | an automatically maintained (smart) list is used              | 0.8    |
//! | M6   | the album is visible outside the friend network               | 1.0    |
//!
//! M1, M2, M3 and M5 only look at custom policies; presets have no fields.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::audience::{effective_audience, resolve_known};
use crate::grouping::{group_albums, PolicyKey};
use crate::ids::{AlbumId, ListId, UserId};
use crate::model::{Album, Dataset, Field, Policy, Preset, ValidationError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MisconfigKind {
    M1,
    M2,
    M3,
    M4,
    M5,
    M6,
}

impl MisconfigKind {
    pub const ALL: [MisconfigKind; 6] = [
        MisconfigKind::M1,
        MisconfigKind::M2,
        MisconfigKind::M3,
        MisconfigKind::M4,
        MisconfigKind::M5,
        MisconfigKind::M6,
    ];

    /// Sensitivity of the privacy leak this kind can cause, in (0, 1].
    pub fn weight(self) -> f64 {
        match self {
            MisconfigKind::M1 => 0.1,
            MisconfigKind::M2 => 0.2,
            MisconfigKind::M3 => 0.4,
            MisconfigKind::M4 => 0.6,
            MisconfigKind::M5 => 0.8,
            MisconfigKind::M6 => 1.0,
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            MisconfigKind::M1 => "A friend list having no friends is allowed or denied",
            MisconfigKind::M2 => "One or more friends exist in both the allowed and denied fields",
            MisconfigKind::M3 => "There are common friends between friend lists",
            MisconfigKind::M4 => "A friend is denied explicitly in this album but allowed in other albums",
            MisconfigKind::M5 => "An automatically updated friend list has been used",
            MisconfigKind::M6 => "The album is visible to people outside the friend network",
        }
    }
}

impl fmt::Display for MisconfigKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl std::str::FromStr for MisconfigKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "m1" => Ok(MisconfigKind::M1),
            "m2" => Ok(MisconfigKind::M2),
            "m3" => Ok(MisconfigKind::M3),
            "m4" => Ok(MisconfigKind::M4),
            "m5" => Ok(MisconfigKind::M5),
            "m6" => Ok(MisconfigKind::M6),
            other => Err(format!("unknown misconfiguration kind {other:?} (expected m1..m6)")),
        }
    }
}

/// What triggered a finding. The variant determines the kind.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Evidence {
    EmptyList { list: ListId, field: Field },
    AllowDenyOverlap { users: BTreeSet<UserId> },
    ListOverlap { lists: (ListId, ListId), common: BTreeSet<UserId> },
    DeniedButAllowedElsewhere { friend: UserId, albums: Vec<AlbumId> },
    SmartList { list: ListId, field: Field },
    OutsideNetwork { preset: Preset },
}

impl Evidence {
    pub fn kind(&self) -> MisconfigKind {
        match self {
            Evidence::EmptyList { .. } => MisconfigKind::M1,
            Evidence::AllowDenyOverlap { .. } => MisconfigKind::M2,
            Evidence::ListOverlap { .. } => MisconfigKind::M3,
            Evidence::DeniedButAllowedElsewhere { .. } => MisconfigKind::M4,
            Evidence::SmartList { .. } => MisconfigKind::M5,
            Evidence::OutsideNetwork { .. } => MisconfigKind::M6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Misconfiguration {
    pub kind: MisconfigKind,
    pub weight: f64,
    pub evidence: Evidence,
}

impl Misconfiguration {
    pub fn new(evidence: Evidence) -> Self {
        let kind = evidence.kind();
        Self { kind, weight: kind.weight(), evidence }
    }
}

fn referenced_lists(policy: &Policy) -> impl Iterator<Item = (&ListId, Field)> {
    policy.fields().into_iter().flat_map(|(allowed, denied)| {
        allowed
            .lists
            .iter()
            .map(|l| (l, Field::Allowed))
            .chain(denied.lists.iter().map(|l| (l, Field::Denied)))
    })
}

/// M1: one finding per referenced list that has no members.
pub fn detect_m1(policy: &Policy, ds: &Dataset) -> Vec<Misconfiguration> {
    referenced_lists(policy)
        .filter(|(id, _)| ds.list(id).is_some_and(|l| l.members.is_empty()))
        .map(|(id, field)| Misconfiguration::new(Evidence::EmptyList { list: id.clone(), field }))
        .collect()
}

/// M2: the resolved allowed and denied sets intersect.
pub fn detect_m2(policy: &Policy, ds: &Dataset) -> Vec<Misconfiguration> {
    let Some((allowed, denied)) = policy.fields() else {
        return Vec::new();
    };
    let allowed = resolve_known(allowed, ds);
    let denied = resolve_known(denied, ds);
    let users: BTreeSet<UserId> = allowed.intersection(&denied).cloned().collect();
    if users.is_empty() {
        Vec::new()
    } else {
        vec![Misconfiguration::new(Evidence::AllowDenyOverlap { users })]
    }
}

/// M3: one finding per unordered pair of allowed lists with common members.
pub fn detect_m3(policy: &Policy, ds: &Dataset) -> Vec<Misconfiguration> {
    let Some((allowed, _)) = policy.fields() else {
        return Vec::new();
    };
    let lists: Vec<_> = allowed.lists.iter().filter_map(|id| ds.list(id)).collect();
    let mut out = Vec::new();
    for (i, a) in lists.iter().enumerate() {
        for b in &lists[i + 1..] {
            let common: BTreeSet<UserId> = a.members.intersection(&b.members).cloned().collect();
            if !common.is_empty() {
                out.push(Misconfiguration::new(Evidence::ListOverlap {
                    lists: (a.id.clone(), b.id.clone()),
                    common,
                }));
            }
        }
    }
    out
}

/// M4: friends denied by name in `album` who can see at least one other
/// album. Denials that only come through a list do not count.
pub fn detect_m4(album: &Album, ds: &Dataset) -> Vec<Misconfiguration> {
    let audiences: Vec<(&AlbumId, BTreeSet<UserId>)> = ds
        .albums
        .iter()
        .filter(|b| b.id != album.id)
        .filter_map(|b| effective_audience(&b.policy, ds).ok().map(|a| (&b.id, a)))
        .collect();
    detect_m4_with(album, audiences.iter().map(|(id, a)| (*id, a)))
}

fn detect_m4_with<'a>(
    album: &Album,
    others: impl Iterator<Item = (&'a AlbumId, &'a BTreeSet<UserId>)> + Clone,
) -> Vec<Misconfiguration> {
    let Some((_, denied)) = album.policy.fields() else {
        return Vec::new();
    };
    denied
        .friends
        .iter()
        .filter_map(|friend| {
            let albums: Vec<AlbumId> = others
                .clone()
                .filter(|(id, audience)| **id != album.id && audience.contains(friend))
                .map(|(id, _)| id.clone())
                .collect();
            (!albums.is_empty()).then(|| {
                Misconfiguration::new(Evidence::DeniedButAllowedElsewhere { friend: friend.clone(), albums })
            })
        })
        .collect()
}

/// M5: one finding per referenced smart list, in either field.
pub fn detect_m5(policy: &Policy, ds: &Dataset) -> Vec<Misconfiguration> {
    referenced_lists(policy)
        .filter(|(id, _)| ds.list(id).is_some_and(|l| l.smart))
        .map(|(id, field)| Misconfiguration::new(Evidence::SmartList { list: id.clone(), field }))
        .collect()
}

/// M6: presets that reach beyond the owner's friends.
pub fn detect_m6(policy: &Policy) -> Vec<Misconfiguration> {
    match policy.preset() {
        Some(preset @ (Preset::Public | Preset::FriendsOfFriends | Preset::FriendsAndNetworks)) => {
            vec![Misconfiguration::new(Evidence::OutsideNetwork { preset })]
        }
        _ => Vec::new(),
    }
}

/// Findings for one policy group; sensitivity is the heaviest finding, or 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupReport {
    pub key: PolicyKey,
    pub policy: Policy,
    pub albums: Vec<AlbumId>,
    pub misconfigurations: Vec<Misconfiguration>,
    pub sensitivity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub fingerprint: String,
    pub groups: Vec<GroupReport>,
}

impl ScanReport {
    pub fn group(&self, key: &PolicyKey) -> Option<&GroupReport> {
        self.groups.iter().find(|g| &g.key == key)
    }

    pub fn group_of(&self, album: &AlbumId) -> Option<&GroupReport> {
        self.groups.iter().find(|g| g.albums.contains(album))
    }

    /// The report's wire form, shared by the CLI and the HTTP service.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Max weight over `findings`, 0 when there are none.
pub fn sensitivity(findings: &[Misconfiguration]) -> f64 {
    findings.iter().map(|m| m.weight).fold(0.0, f64::max)
}

/// Validates `ds`, groups its albums and runs every detector per group.
pub fn scan(ds: &Dataset) -> Result<ScanReport, ValidationError> {
    ds.validate()?;

    let audiences: BTreeMap<&AlbumId, BTreeSet<UserId>> = ds
        .albums
        .iter()
        .map(|a| effective_audience(&a.policy, ds).map(|aud| (&a.id, aud)))
        .collect::<Result<_, _>>()?;

    let groups = group_albums(ds)
        .into_iter()
        .map(|group| {
            let mut findings = Vec::new();
            findings.extend(detect_m1(&group.policy, ds));
            findings.extend(detect_m2(&group.policy, ds));
            findings.extend(detect_m3(&group.policy, ds));
            // All members share the policy, so any representative gives the
            // same M4 result.
            if let Some(album) = group.albums.first().and_then(|id| ds.album(id)) {
                let others = ds
                    .albums
                    .iter()
                    .map(|b| (&b.id, &audiences[&b.id]))
                    .filter(|(id, _)| **id != album.id);
                findings.extend(detect_m4_with(album, others));
            }
            findings.extend(detect_m5(&group.policy, ds));
            findings.extend(detect_m6(&group.policy));
            findings.sort_by(|a, b| a.kind.cmp(&b.kind).then_with(|| a.evidence.cmp(&b.evidence)));

            GroupReport {
                sensitivity: sensitivity(&findings),
                key: group.key,
                policy: group.policy,
                albums: group.albums,
                misconfigurations: findings,
            }
        })
        .collect();

    Ok(ScanReport { fingerprint: ds.fingerprint(), groups })
}
