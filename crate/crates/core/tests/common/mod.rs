//! Random small datasets and first-principles oracles shared by the
//! property tests.
#![allow(dead_code)]

pub mod reference;

use std::collections::BTreeSet;

use albumaudit_core::{
    Album, AudienceRefs, Dataset, FriendList, Network, Photo, PhotoId, Policy, Preset, User, UserId,
};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn subset<T: Clone + Ord>(rng: &mut impl Rng, pool: &[T], p: f64) -> BTreeSet<T> {
    pool.iter().filter(|_| rng.random_bool(p)).cloned().collect()
}

fn random_policy(rng: &mut impl Rng, friends: &[UserId], lists: &[FriendList]) -> Policy {
    if rng.random_bool(0.3) {
        return Policy::from(*Preset::ALL.choose(rng).unwrap());
    }
    let list_ids: Vec<_> = lists.iter().map(|l| l.id.clone()).collect();
    let mut refs = || AudienceRefs { friends: subset(rng, friends, 0.35), lists: subset(rng, &list_ids, 0.35) };
    let allowed = refs();
    let denied = refs();
    Policy::custom(allowed, denied)
}

/// A valid dataset with at most 10 users and 4 friend lists. Albums draw
/// their policies from a small pool so groups of several albums are common.
pub fn random_dataset(seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_users = rng.random_range(1..=10usize);
    let users: Vec<User> =
        (0..n_users).map(|i| User { id: UserId::new(format!("u{i}")), name: format!("User {i}") }).collect();
    let ids: Vec<UserId> = users.iter().map(|u| u.id.clone()).collect();
    let owner = ids[0].clone();
    let friends: BTreeSet<UserId> = subset(&mut rng, &ids[1..], 0.6);
    let friend_vec: Vec<UserId> = friends.iter().cloned().collect();

    let mut friend_edges = Vec::new();
    if n_users >= 2 {
        for _ in 0..rng.random_range(0..=n_users) {
            let a = ids.choose(&mut rng).unwrap().clone();
            let b = ids.choose(&mut rng).unwrap().clone();
            if a != b {
                friend_edges.push((a, b));
            }
        }
    }
    let friend_lists: Vec<FriendList> = (0..rng.random_range(0..=4usize))
        .map(|i| FriendList {
            id: format!("l{i}").into(),
            name: format!("List {i}"),
            members: subset(&mut rng, &ids, 0.4),
            smart: rng.random_bool(0.3),
        })
        .collect();
    let networks: Vec<Network> = (0..rng.random_range(0..=2usize))
        .map(|i| Network { id: format!("n{i}").into(), name: format!("Net {i}"), members: subset(&mut rng, &ids, 0.3) })
        .collect();

    let pool: Vec<Policy> = (0..3).map(|_| random_policy(&mut rng, &friend_vec, &friend_lists)).collect();
    let albums = (0..rng.random_range(1..=6usize))
        .map(|i| {
            let policy = if rng.random_bool(0.7) {
                pool.choose(&mut rng).unwrap().clone()
            } else {
                random_policy(&mut rng, &friend_vec, &friend_lists)
            };
            Album {
                id: format!("a{i}").into(),
                name: format!("Album {i}"),
                description: String::new(),
                photos: (0..rng.random_range(0..4))
                    .map(|p| Photo { id: PhotoId::new(format!("a{i}p{p}")), likes: rng.random_range(0..9), comments: rng.random_range(0..9) })
                    .collect(),
                policy,
            }
        })
        .collect();

    let ds = Dataset { owner, users, friends, friend_edges, friend_lists, networks, albums };
    ds.validate().expect("random dataset is valid");
    ds
}

/// Decides from the raw document whether `refs` names `user`, directly or
/// through one of its lists.
fn named_by(ds: &Dataset, refs: &AudienceRefs, user: &UserId) -> bool {
    if refs.friends.iter().any(|f| f == user) {
        return true;
    }
    for list_id in &refs.lists {
        for list in &ds.friend_lists {
            if &list.id == list_id && list.members.iter().any(|m| m == user) {
                return true;
            }
        }
    }
    false
}

/// Can `user` view content under `policy`? Decided one user at a time
/// straight from the access rules.
pub fn oracle_can_view(ds: &Dataset, policy: &Policy, user: &UserId) -> bool {
    if user == &ds.owner {
        return false;
    }
    let is_friend = ds.friends.iter().any(|f| f == user);
    match policy {
        Policy::Public => true,
        Policy::OnlyMe => false,
        Policy::Friends => is_friend,
        Policy::FriendsOfFriends => {
            is_friend
                || ds.friend_edges.iter().any(|(a, b)| {
                    (a == user && ds.friends.iter().any(|f| f == b)) || (b == user && ds.friends.iter().any(|f| f == a))
                })
        }
        Policy::FriendsAndNetworks => is_friend || ds.networks.iter().any(|n| n.members.iter().any(|m| m == user)),
        Policy::Custom { allowed, denied } => named_by(ds, allowed, user) && !named_by(ds, denied, user),
    }
}

pub fn oracle_audience(ds: &Dataset, policy: &Policy) -> BTreeSet<UserId> {
    ds.users.iter().map(|u| u.id.clone()).filter(|u| oracle_can_view(ds, policy, u)).collect()
}

pub fn fixture_path(name: &str) -> std::path::PathBuf {
    // Resolves from any crate in the workspace.
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}
