//! Audience resolution: who can actually see an album.
//!
//! Lists expand to their members, the allowed field is a union, and the
//! denied field always wins over the allowed field. The owner is an implicit
//! viewer of everything and is never part of a returned audience.

use std::collections::BTreeSet;

use crate::ids::UserId;
use crate::model::{AudienceRefs, Dataset, Policy, ValidationCode, ValidationError};

/// Directly named friends plus the members of every referenced list.
pub fn resolve_refs(refs: &AudienceRefs, ds: &Dataset) -> Result<BTreeSet<UserId>, ValidationError> {
    let mut out = BTreeSet::new();
    for f in &refs.friends {
        if !ds.friends.contains(f) {
            return Err(ValidationError::new(ValidationCode::UnknownFriend, f.as_str()));
        }
        out.insert(f.clone());
    }
    for id in &refs.lists {
        let list = ds
            .list(id)
            .ok_or_else(|| ValidationError::new(ValidationCode::UnknownList, id.as_str()))?;
        out.extend(list.members.iter().cloned());
    }
    Ok(out)
}

/// The set of users (owner excluded) able to view content under `policy`.
pub fn effective_audience(policy: &Policy, ds: &Dataset) -> Result<BTreeSet<UserId>, ValidationError> {
    let mut audience: BTreeSet<UserId> = match policy {
        Policy::Custom { allowed, denied } => {
            let allowed = resolve_refs(allowed, ds)?;
            let denied = resolve_refs(denied, ds)?;
            allowed.difference(&denied).cloned().collect()
        }
        Policy::OnlyMe => BTreeSet::new(),
        Policy::Friends => ds.friends.clone(),
        Policy::FriendsOfFriends => {
            let mut out = ds.friends.clone();
            for (a, b) in &ds.friend_edges {
                if ds.friends.contains(a) {
                    out.insert(b.clone());
                }
                if ds.friends.contains(b) {
                    out.insert(a.clone());
                }
            }
            out
        }
        Policy::FriendsAndNetworks => {
            let mut out = ds.friends.clone();
            for n in &ds.networks {
                out.extend(n.members.iter().cloned());
            }
            out
        }
        Policy::Public => ds.user_ids().cloned().collect(),
    };
    audience.remove(&ds.owner);
    Ok(audience)
}

/// Lenient variant for already-validated datasets: unknown references
/// contribute nothing.
pub(crate) fn resolve_known(refs: &AudienceRefs, ds: &Dataset) -> BTreeSet<UserId> {
    let mut out: BTreeSet<UserId> = refs.friends.iter().cloned().collect();
    for id in &refs.lists {
        if let Some(list) = ds.list(id) {
            out.extend(list.members.iter().cloned());
        }
    }
    out
}
