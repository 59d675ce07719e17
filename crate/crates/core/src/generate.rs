//! Seeded synthetic datasets with planted misconfigurations.
//!
//! Every requested kind is planted in its own album; all other albums use
//! the Friends preset. Planted policies are built so that each triggers only
//! its own kind, which lets a scan of the output be checked exactly against
//! the requested mix.

use std::collections::BTreeSet;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::ids::{AlbumId, ListId, NetworkId, PhotoId, UserId};
use crate::misconfig::MisconfigKind;
use crate::model::{Album, AudienceRefs, Dataset, FriendList, Network, Photo, Policy, Preset, User};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("{0} must be at least 1")]
    ZeroCount(&'static str),
    #[error("infeasible request: {0}")]
    Infeasible(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerateParams {
    pub seed: u64,
    /// Users besides the owner.
    pub users: usize,
    pub lists: usize,
    pub albums: usize,
    pub mix: BTreeSet<MisconfigKind>,
}

const FIRST_NAMES: &[&str] = &[
    "Ada", "Bilal", "Chen", "Dana", "Emeka", "Farah", "Goran", "Hana", "Ivo", "Jun", "Kira", "Lior", "Mina", "Nils",
    "Oona", "Priya", "Quinn", "Rosa", "Sami", "Tariq", "Uma", "Vik", "Wren", "Yara", "Zeno",
];
const LIST_NAMES: &[&str] =
    &["Close Friends", "Family", "Coworkers", "Book Club", "Climbing", "Neighbors", "Old School", "Band"];
const SMART_LIST_NAMES: &[&str] = &["Acme Corp", "State University", "Hometown", "City Area"];
const ALBUM_NAMES: &[&str] = &[
    "Summer Trip", "Birthday", "Graduation", "Hiking", "Wedding", "Concert", "Road Trip", "Holidays", "Garden",
    "Pets", "Mobile Uploads", "Profile Pictures", "Beach Day", "Ski Weekend",
];

#[derive(Default)]
struct ListRoles {
    empty: Option<ListId>,
    manual_a: Option<ListId>,
    manual_b: Option<ListId>,
    smart: Option<ListId>,
}

fn check(params: &GenerateParams) -> Result<(), GenerateError> {
    use MisconfigKind::*;
    if params.users == 0 {
        return Err(GenerateError::ZeroCount("users"));
    }
    if params.lists == 0 {
        return Err(GenerateError::ZeroCount("lists"));
    }
    if params.albums == 0 {
        return Err(GenerateError::ZeroCount("albums"));
    }
    let mix = &params.mix;
    let needed_lists = usize::from(mix.contains(&M1))
        + if mix.contains(&M3) { 2 } else { usize::from(mix.contains(&M2)) }
        + usize::from(mix.contains(&M5));
    if params.lists < needed_lists {
        return Err(GenerateError::Infeasible(format!(
            "mix {} needs at least {needed_lists} friend lists, got {}",
            mix_label(mix),
            params.lists
        )));
    }
    // An M4 album needs some other album that shows the denied friend.
    let needed_albums = mix.len() + usize::from(mix.contains(&M4) && !mix.contains(&M6));
    if params.albums < needed_albums {
        return Err(GenerateError::Infeasible(format!(
            "mix {} needs at least {needed_albums} albums, got {}",
            mix_label(mix),
            params.albums
        )));
    }
    Ok(())
}

fn mix_label(mix: &BTreeSet<MisconfigKind>) -> String {
    if mix.is_empty() {
        return "{}".to_owned();
    }
    mix.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")
}

fn random_subset(rng: &mut ChaCha8Rng, pool: &[UserId], p: f64) -> BTreeSet<UserId> {
    pool.iter().filter(|_| rng.random_bool(p)).cloned().collect()
}

pub fn generate(params: &GenerateParams) -> Result<Dataset, GenerateError> {
    use MisconfigKind::*;
    check(params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mix = &params.mix;

    let owner = UserId::new("u0");
    let mut users = vec![User { id: owner.clone(), name: "Me".to_owned() }];
    for i in 1..=params.users {
        let first = FIRST_NAMES.choose(&mut rng).expect("non-empty");
        users.push(User { id: UserId::new(format!("u{i}")), name: format!("{first} {i}") });
    }
    let others: Vec<UserId> = users[1..].iter().map(|u| u.id.clone()).collect();

    // u1 is always a friend so every planted policy has someone to name.
    let mut friends: BTreeSet<UserId> = others.iter().skip(1).filter(|_| rng.random_bool(0.7)).cloned().collect();
    friends.insert(others[0].clone());
    let friend_vec: Vec<UserId> = friends.iter().cloned().collect();
    let anchor = others[0].clone();

    let mut friend_edges = Vec::new();
    let mut seen = BTreeSet::new();
    for _ in 0..params.users {
        if others.len() < 2 {
            break;
        }
        let a = others.choose(&mut rng).expect("non-empty").clone();
        let b = others.choose(&mut rng).expect("non-empty").clone();
        if a == b {
            continue;
        }
        let pair = if a < b { (a, b) } else { (b, a) };
        if seen.insert(pair.clone()) {
            friend_edges.push(pair);
        }
    }

    let networks = (1..=rng.random_range(1..=2usize))
        .map(|i| Network {
            id: NetworkId::new(format!("n{i}")),
            name: SMART_LIST_NAMES[i % SMART_LIST_NAMES.len()].to_owned(),
            members: random_subset(&mut rng, &others, 0.3),
        })
        .collect();

    let mut roles = ListRoles::default();
    let mut friend_lists = Vec::with_capacity(params.lists);
    for i in 1..=params.lists {
        let id = ListId::new(format!("l{i}"));
        let (members, smart) = if mix.contains(&M1) && roles.empty.is_none() {
            roles.empty = Some(id.clone());
            (BTreeSet::new(), false)
        } else if (mix.contains(&M2) || mix.contains(&M3)) && roles.manual_a.is_none() {
            roles.manual_a = Some(id.clone());
            let mut m = random_subset(&mut rng, &friend_vec, 0.4);
            m.insert(anchor.clone());
            (m, false)
        } else if mix.contains(&M3) && roles.manual_b.is_none() {
            roles.manual_b = Some(id.clone());
            let mut m = random_subset(&mut rng, &friend_vec, 0.4);
            m.insert(anchor.clone());
            (m, false)
        } else if mix.contains(&M5) && roles.smart.is_none() {
            roles.smart = Some(id.clone());
            let mut m = random_subset(&mut rng, &friend_vec, 0.4);
            m.insert(anchor.clone());
            (m, true)
        } else {
            // Unreferenced lists never trigger anything, whatever their shape.
            (random_subset(&mut rng, &friend_vec, 0.4), rng.random_bool(0.3))
        };
        let name = if smart { SMART_LIST_NAMES } else { LIST_NAMES }
            .choose(&mut rng)
            .expect("non-empty")
            .to_string();
        friend_lists.push(FriendList { id, name, members, smart });
    }

    let refs = |friends: BTreeSet<UserId>, lists: &[&Option<ListId>]| AudienceRefs {
        friends,
        lists: lists.iter().map(|l| (*l).clone().expect("role assigned")).collect(),
    };
    let none = BTreeSet::new;
    let mut planted: Vec<Policy> = Vec::new();
    for kind in mix {
        let policy = match kind {
            M1 => Policy::custom(refs(BTreeSet::from([anchor.clone()]), &[&roles.empty]), AudienceRefs::default()),
            // The overlap comes through the denied list, so nobody is denied by name.
            M2 => Policy::custom(refs(BTreeSet::from([anchor.clone()]), &[]), refs(none(), &[&roles.manual_a])),
            M3 => Policy::custom(refs(none(), &[&roles.manual_a, &roles.manual_b]), AudienceRefs::default()),
            M4 => {
                let denied = friend_vec.choose(&mut rng).expect("has friends").clone();
                let allowed: BTreeSet<UserId> =
                    friend_vec.iter().filter(|f| **f != denied && rng.random_bool(0.5)).cloned().collect();
                Policy::custom(refs(allowed, &[]), refs(BTreeSet::from([denied]), &[]))
            }
            M5 => Policy::custom(refs(none(), &[&roles.smart]), AudienceRefs::default()),
            M6 => Policy::from(
                *[Preset::Public, Preset::FriendsOfFriends, Preset::FriendsAndNetworks]
                    .choose(&mut rng)
                    .expect("non-empty"),
            ),
        };
        planted.push(policy);
    }
    // Without M6, `check` guarantees a clean Friends album that shows the
    // friend denied by the M4 album.
    let mut slots: Vec<usize> = (0..params.albums).collect();
    slots.shuffle(&mut rng);

    let mut policies = vec![Policy::Friends; params.albums];
    for (slot, policy) in slots.into_iter().zip(planted) {
        policies[slot] = policy;
    }

    let albums = policies
        .into_iter()
        .enumerate()
        .map(|(i, policy)| {
            let id = AlbumId::new(format!("a{}", i + 1));
            let name = format!("{} {}", ALBUM_NAMES.choose(&mut rng).expect("non-empty"), i + 1);
            let photos = (0..rng.random_range(0..=12usize))
                .map(|p| Photo {
                    id: PhotoId::new(format!("{id}-p{}", p + 1)),
                    likes: rng.random_range(0..=50),
                    comments: rng.random_range(0..=20),
                })
                .collect();
            Album { description: format!("Photos from {name}"), id, name, photos, policy }
        })
        .collect();

    Ok(Dataset { owner, users, friends, friend_edges, friend_lists, networks, albums })
}
