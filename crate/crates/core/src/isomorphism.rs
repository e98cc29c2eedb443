//! Equivalence of adequate sets under renumbering of the players.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::model::{color_of, AdequateSet, Signature};

/// Largest player count for canonicalization by a full `N!` scan.
pub const MAX_CANONICAL_PLAYERS: usize = 8;

/// Bijection on players `1..=N`; `mapping[i - 1]` is the image of player `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct PlayerPermutation {
    mapping: Vec<usize>,
}

impl PlayerPermutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n + 1];
        for &v in &mapping {
            if v == 0 || v > n || seen[v] {
                return Err(Error::Permutation(format!(
                    "{mapping:?} is not a bijection on 1..={n}"
                )));
            }
            seen[v] = true;
        }
        Ok(Self { mapping })
    }

    pub fn identity(n_players: usize) -> Self {
        Self {
            mapping: (1..=n_players).collect(),
        }
    }

    /// Transposition of players `a` and `b`.
    pub fn swap(n_players: usize, a: usize, b: usize) -> Result<Self> {
        let mut mapping: Vec<usize> = (1..=n_players).collect();
        if a == 0 || b == 0 || a > n_players || b > n_players {
            return Err(Error::Permutation(format!("cannot swap {a} and {b} among {n_players}")));
        }
        mapping.swap(a - 1, b - 1);
        Ok(Self { mapping })
    }

    /// All `N!` permutations in lexicographic order of their mappings.
    pub fn all(n_players: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (1..=n_players).collect();
        loop {
            out.push(Self {
                mapping: current.clone(),
            });
            // next lexicographic permutation
            let Some(i) = (1..current.len()).rev().find(|&i| current[i - 1] < current[i]) else {
                break;
            };
            let j = (i..current.len()).rev().find(|&j| current[j] > current[i - 1]).unwrap();
            current.swap(i - 1, j);
            current[i..].reverse();
        }
        out
    }

    pub fn n_players(&self) -> usize {
        self.mapping.len()
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn image(&self, player: usize) -> usize {
        self.mapping[player - 1]
    }

    pub fn inverse(&self) -> Self {
        let mut mapping = vec![0; self.mapping.len()];
        for (i, &v) in self.mapping.iter().enumerate() {
            mapping[v - 1] = i + 1;
        }
        Self { mapping }
    }

    /// `self` after `first`: player `i` goes to `self(first(i))`.
    pub fn after(&self, first: &Self) -> Self {
        Self {
            mapping: first.mapping.iter().map(|&v| self.mapping[v - 1]).collect(),
        }
    }

    /// Moves the bit of player `i` to the position of player `perm(i)`.
    pub fn apply_to_bits(&self, bits: u32) -> u32 {
        let n = self.mapping.len();
        let mut out = 0;
        for (i, &target) in self.mapping.iter().enumerate() {
            out |= (color_of(bits, n, i + 1) as u32) << (n - target);
        }
        out
    }
}

impl fmt::Display for PlayerPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.mapping.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

pub fn apply_permutation(set: &AdequateSet, perm: &PlayerPermutation) -> Result<AdequateSet> {
    if perm.n_players() != set.n_players() {
        return Err(Error::LengthMismatch {
            left: set.n_players(),
            right: perm.n_players(),
        });
    }
    let members: Vec<u32> = set.members().iter().map(|&m| perm.apply_to_bits(m)).collect();
    AdequateSet::new(set.n_players(), members)
}

fn check_canonical_players(n_players: usize) -> Result<()> {
    if n_players > MAX_CANONICAL_PLAYERS {
        return Err(Error::PlayerCount(n_players, "1..=8"));
    }
    Ok(())
}

/// Lexicographically smallest image of `set`, together with a permutation
/// producing it.
pub fn canonical_form_with_witness(set: &AdequateSet) -> Result<(AdequateSet, PlayerPermutation)> {
    check_canonical_players(set.n_players())?;
    let mut best: Option<(AdequateSet, PlayerPermutation)> = None;
    for perm in PlayerPermutation::all(set.n_players()) {
        let image = apply_permutation(set, &perm)?;
        if best.as_ref().is_none_or(|(b, _)| image < *b) {
            best = Some((image, perm));
        }
    }
    Ok(best.expect("at least the identity"))
}

pub fn canonical_form(set: &AdequateSet) -> Result<AdequateSet> {
    canonical_form_with_witness(set).map(|(c, _)| c)
}

/// Every distinct image of `set` under renumbering.
pub fn full_orbit(set: &AdequateSet) -> Result<BTreeSet<AdequateSet>> {
    check_canonical_players(set.n_players())?;
    PlayerPermutation::all(set.n_players())
        .iter()
        .map(|p| apply_permutation(set, p))
        .collect()
}

/// Permutations fixing `set`.
pub fn stabilizer(set: &AdequateSet) -> Result<Vec<PlayerPermutation>> {
    check_canonical_players(set.n_players())?;
    let mut out = Vec::new();
    for perm in PlayerPermutation::all(set.n_players()) {
        if apply_permutation(set, &perm)? == *set {
            out.push(perm);
        }
    }
    Ok(out)
}

/// One class of the partition: the input sets sharing a canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub canonical: AdequateSet,
    pub signature: Signature,
    /// Input sets in this orbit, each with a permutation taking it to
    /// `canonical`.
    pub members: Vec<(AdequateSet, PlayerPermutation)>,
}

impl Orbit {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// Permutation mapping member `from` onto member `to`.
    pub fn witness_between(&self, from: usize, to: usize) -> PlayerPermutation {
        let (_, a) = &self.members[from];
        let (_, b) = &self.members[to];
        b.inverse().after(a)
    }
}

/// Groups `sets` by canonical form, ordered by canonical form.
pub fn orbit_partition(sets: &[AdequateSet], exec: &Exec) -> Result<Vec<Orbit>> {
    let canon = exec.map(sets.to_vec(), |s| canonical_form_with_witness(&s).map(|c| (s, c)));
    let mut groups: BTreeMap<AdequateSet, Vec<(AdequateSet, PlayerPermutation)>> = BTreeMap::new();
    for item in canon {
        let (set, (canonical, perm)) = item?;
        groups.entry(canonical).or_default().push((set, perm));
    }
    Ok(groups
        .into_iter()
        .map(|(canonical, members)| Orbit {
            signature: canonical.signature(),
            canonical,
            members,
        })
        .collect())
}

#[derive(Serialize)]
struct WitnessJson<'a> {
    from: &'a [u32],
    perm: &'a PlayerPermutation,
}

#[derive(Serialize)]
struct OrbitJson<'a> {
    canonical: &'a [u32],
    signature: String,
    size: usize,
    witnesses: Vec<WitnessJson<'a>>,
}

/// `{"canonical":[...],"signature":"024001","size":n,"witnesses":[{"from":[...],"perm":[...]}]}`
pub fn orbit_to_json(orbit: &Orbit) -> String {
    let doc = OrbitJson {
        canonical: orbit.canonical.members(),
        signature: orbit.signature.to_string(),
        size: orbit.size(),
        witnesses: orbit
            .members
            .iter()
            .map(|(s, p)| WitnessJson {
                from: s.members(),
                perm: p,
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("orbit serializes")
}
