//! Adequate sets: validation, exhaustive enumeration, covering numbers and
//! the dominance-pruned search that certifies optimality of the minimum size.
//!
//! For two colors a set `A` is adequate when every configuration outside `A`
//! is at Hamming distance 1 from some member, i.e. `A` is a binary covering
//! code of radius 1 (a dominating set of the hypercube `Q_N`).
//!
//! Enumeration is a depth-first search that adds members in increasing
//! order, so sets come out in lexicographic order of their sorted member
//! lists. Two cuts keep it small:
//!
//! * the smallest still-uncovered configuration `x` can only be covered by a
//!   member of its closed neighbourhood, so no candidate above the largest
//!   neighbour of `x` is ever tried, and a branch is dead once all of `x`'s
//!   neighbours are behind the cursor;
//! * each member covers at most `N + 1` configurations, so a branch with more
//!   uncovered configurations than `(N + 1) ·` remaining slots is dead.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use crate::dominance::{self, Witness};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::model::{check_players, zeros_count, AdequateSet, Signature};

/// Closed Hamming-1 neighbourhoods of every configuration.
#[derive(Clone, Debug)]
pub struct NeighborhoodTable {
    n_players: usize,
    words: usize,
    closed_masks: Vec<u64>,
    neighbors: Vec<u32>,
}

impl NeighborhoodTable {
    pub fn new(n_players: usize) -> Result<Self> {
        check_players(n_players)?;
        let size = 1usize << n_players;
        let words = size.div_ceil(64);
        let mut closed_masks = vec![0u64; size * words];
        let mut neighbors = Vec::with_capacity(size * (n_players + 1));
        for x in 0..size {
            let mut hood: Vec<u32> = std::iter::once(x as u32)
                .chain((0..n_players).map(|b| (x ^ (1 << b)) as u32))
                .collect();
            hood.sort_unstable();
            for &y in &hood {
                closed_masks[x * words + y as usize / 64] |= 1 << (y % 64);
            }
            neighbors.extend(hood);
        }
        Ok(Self {
            n_players,
            words,
            closed_masks,
            neighbors,
        })
    }

    pub fn n_players(&self) -> usize {
        self.n_players
    }

    /// Number of configurations, `2^N`.
    pub fn size(&self) -> usize {
        1 << self.n_players
    }

    /// Bitmask over the configuration space: bit `y` is set iff `y` is `x` or
    /// adjacent to it.
    pub fn closed_mask(&self, x: u32) -> &[u64] {
        let start = x as usize * self.words;
        &self.closed_masks[start..start + self.words]
    }

    /// Closed neighbourhood of `x` in ascending order (`N + 1` entries).
    pub fn neighbors(&self, x: u32) -> &[u32] {
        let k = self.n_players + 1;
        &self.neighbors[x as usize * k..(x as usize + 1) * k]
    }

    pub fn max_neighbor(&self, x: u32) -> u32 {
        *self.neighbors(x).last().unwrap()
    }

    pub fn covers_all(&self, members: &[u32]) -> bool {
        let mut union = vec![0u64; self.words];
        for &m in members {
            for (u, w) in union.iter_mut().zip(self.closed_mask(m)) {
                *u |= w;
            }
        }
        let size = self.size();
        union.iter().enumerate().all(|(i, &w)| {
            let bits_here = (size - i * 64).min(64);
            let full = if bits_here == 64 {
                u64::MAX
            } else {
                (1u64 << bits_here) - 1
            };
            w == full
        })
    }
}

pub fn is_adequate(set: &AdequateSet) -> bool {
    NeighborhoodTable::new(set.n_players())
        .map(|t| t.covers_all(set.members()))
        .unwrap_or(false)
}

/// Validating variant for raw member lists.
pub fn is_adequate_members(n_players: usize, members: &[u32]) -> Result<bool> {
    let set = AdequateSet::new(n_players, members.iter().copied())?;
    Ok(is_adequate(&set))
}

/// Guard against accidental combinatorial explosions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// Maximum `C(2^N, das)` for a plain enumeration; also the node budget of
    /// a dominance-pruned search.
    pub max_candidates: u128,
    /// Largest `N` searched without an override.
    pub max_players: usize,
    pub allow_large: bool,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self {
            max_candidates: 100_000_000,
            max_players: 5,
            allow_large: false,
        }
    }
}

impl SearchLimits {
    pub fn unlimited() -> Self {
        Self {
            allow_large: true,
            ..Self::default()
        }
    }

    fn check_players(&self, n_players: usize) -> Result<()> {
        if !self.allow_large && n_players > self.max_players {
            return Err(Error::PlayerGuard {
                n_players,
                max: self.max_players,
            });
        }
        Ok(())
    }

    fn check_candidates(&self, n_players: usize, das: usize) -> Result<()> {
        self.check_players(n_players)?;
        let candidates = candidate_count(n_players, das);
        if !self.allow_large && candidates > self.max_candidates {
            return Err(Error::ResourceGuard {
                candidates,
                limit: self.max_candidates,
            });
        }
        Ok(())
    }

    fn node_budget(&self) -> Option<u64> {
        (!self.allow_large).then(|| self.max_candidates.min(u64::MAX as u128) as u64)
    }
}

/// `C(2^N, das)`, saturating.
pub fn candidate_count(n_players: usize, das: usize) -> u128 {
    let size = 1u128 << n_players.min(100);
    if das as u128 > size {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..das as u128 {
        acc = match acc.checked_mul(size - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

type PruneFn<'a> = dyn Fn(&[u32], usize) -> bool + Sync + 'a;

struct Budget {
    limit: Option<u64>,
    used: AtomicU64,
    exceeded: AtomicBool,
    /// Cap on collected sets, so a weak prune cannot exhaust memory.
    max_found: Option<u64>,
    found: AtomicU64,
    overflowed: AtomicBool,
    stop: AtomicBool,
}

/// Collected sets allowed per node of budget.
const RESULTS_PER_NODE: u64 = 100;

impl Budget {
    fn new(limit: Option<u64>) -> Self {
        Self {
            limit,
            used: AtomicU64::new(0),
            exceeded: AtomicBool::new(false),
            max_found: limit.map(|l| (l / RESULTS_PER_NODE).max(1)),
            found: AtomicU64::new(0),
            overflowed: AtomicBool::new(false),
            stop: AtomicBool::new(false),
        }
    }

    /// Count one collected set; returns true when the cap is exceeded.
    fn record(&self) -> bool {
        let total = self.found.fetch_add(1, Ordering::Relaxed) + 1;
        match self.max_found {
            Some(cap) if total > cap => {
                self.overflowed.store(true, Ordering::Relaxed);
                true
            }
            _ => false,
        }
    }

    /// Returns false once the search should stop.
    fn charge(&self, nodes: u64) -> bool {
        let total = self.used.fetch_add(nodes, Ordering::Relaxed) + nodes;
        if let Some(limit) = self.limit {
            if total > limit {
                self.exceeded.store(true, Ordering::Relaxed);
                self.stop.store(true, Ordering::Relaxed);
            }
        }
        !self.stop.load(Ordering::Relaxed)
    }
}

/// Search state for one subtree.
struct Walker<'a> {
    table: &'a NeighborhoodTable,
    min_len: usize,
    max_len: usize,
    prune: &'a PruneFn<'a>,
    budget: &'a Budget,
    cover: Vec<u16>,
    uncovered: usize,
    members: Vec<u32>,
    zero_counts: Vec<u32>,
    pending_nodes: u64,
}

const CHARGE_EVERY: u64 = 4096;

impl<'a> Walker<'a> {
    fn new(
        table: &'a NeighborhoodTable,
        min_len: usize,
        max_len: usize,
        prune: &'a PruneFn<'a>,
        budget: &'a Budget,
    ) -> Self {
        Self {
            table,
            min_len,
            max_len,
            prune,
            budget,
            cover: vec![0; table.size()],
            uncovered: table.size(),
            members: Vec::with_capacity(max_len),
            zero_counts: vec![0; table.n_players() + 1],
            pending_nodes: 0,
        }
    }

    fn push(&mut self, y: u32) {
        for &v in self.table.neighbors(y) {
            let c = &mut self.cover[v as usize];
            if *c == 0 {
                self.uncovered -= 1;
            }
            *c += 1;
        }
        self.zero_counts[zeros_count(y, self.table.n_players())] += 1;
        self.members.push(y);
    }

    fn pop(&mut self) {
        let y = self.members.pop().expect("pop on empty walker");
        self.zero_counts[zeros_count(y, self.table.n_players())] -= 1;
        for &v in self.table.neighbors(y) {
            let c = &mut self.cover[v as usize];
            *c -= 1;
            if *c == 0 {
                self.uncovered += 1;
            }
        }
    }

    fn smallest_uncovered(&self) -> Option<u32> {
        self.cover.iter().position(|&c| c == 0).map(|x| x as u32)
    }

    /// Inclusive range of candidates for the next member, or `None` if the
    /// branch is dead.
    fn child_range(&self, start: u32) -> Option<(u32, u32)> {
        let len = self.members.len();
        let slots = self.max_len - len;
        let size = self.table.size() as u32;
        let mut upper = size.checked_sub(1)?;
        if self.uncovered > 0 {
            if self.uncovered > slots * (self.table.n_players() + 1) {
                return None;
            }
            let x = self.smallest_uncovered()?;
            upper = upper.min(self.table.max_neighbor(x));
        }
        let needed = self.min_len.saturating_sub(len).max(1) as u32;
        upper = upper.min(size.checked_sub(needed)?);
        (start <= upper).then_some((start, upper))
    }

    /// Returns false when the search must stop.
    fn visit(&mut self, start: u32, emit: &mut dyn FnMut(&[u32]) -> bool) -> bool {
        self.pending_nodes += 1;
        if self.pending_nodes >= CHARGE_EVERY {
            let ok = self.budget.charge(self.pending_nodes);
            self.pending_nodes = 0;
            if !ok {
                return false;
            }
        }
        let len = self.members.len();
        if (self.prune)(&self.zero_counts, len) {
            return true;
        }
        if len >= self.min_len && self.uncovered == 0 && emit(&self.members) {
            self.budget.stop.store(true, Ordering::Relaxed);
            return false;
        }
        if len == self.max_len {
            return true;
        }
        let Some((lo, hi)) = self.child_range(start) else {
            return true;
        };
        for y in lo..=hi {
            self.push(y);
            let go_on = self.visit(y + 1, emit);
            self.pop();
            if !go_on {
                return false;
            }
        }
        true
    }

    /// Like `visit`, but stops at depth `split` and records those nodes as
    /// subtree roots for later (possibly parallel) processing.
    fn collect_roots(
        &mut self,
        start: u32,
        split: usize,
        roots: &mut Vec<Vec<u32>>,
        emit: &mut dyn FnMut(&[u32]) -> bool,
    ) {
        let len = self.members.len();
        if len == split {
            roots.push(self.members.clone());
            return;
        }
        if (self.prune)(&self.zero_counts, len) {
            return;
        }
        if len >= self.min_len && self.uncovered == 0 {
            emit(&self.members);
        }
        if len == self.max_len {
            return;
        }
        let Some((lo, hi)) = self.child_range(start) else {
            return;
        };
        for y in lo..=hi {
            self.push(y);
            self.collect_roots(y + 1, split, roots, emit);
            self.pop();
        }
    }

    fn finish(&mut self) {
        self.budget.charge(std::mem::take(&mut self.pending_nodes));
    }
}

struct SearchOutcome {
    sets: Vec<Vec<u32>>,
    nodes: u64,
}

/// Run the search over sizes `min_len..=max_len`, collecting every adequate
/// set the prune predicate does not cut.
fn run_search(
    table: &NeighborhoodTable,
    min_len: usize,
    max_len: usize,
    prune: &PruneFn<'_>,
    budget_limit: Option<u64>,
    exec: &Exec,
) -> Result<SearchOutcome> {
    let budget = Budget::new(budget_limit);
    let mut shallow: Vec<Vec<u32>> = Vec::new();
    let mut roots = Vec::new();
    let split = max_len.min(2);
    {
        let mut walker = Walker::new(table, min_len, max_len, prune, &budget);
        walker.collect_roots(0, split, &mut roots, &mut |m| {
            shallow.push(m.to_vec());
            budget.record()
        });
    }
    let per_root: Vec<Vec<Vec<u32>>> = exec.map(roots, |root| {
        let mut walker = Walker::new(table, min_len, max_len, prune, &budget);
        let start = root.last().map_or(0, |&y| y + 1);
        for &y in &root {
            walker.push(y);
        }
        let mut found = Vec::new();
        walker.visit(start, &mut |m| {
            found.push(m.to_vec());
            budget.record()
        });
        walker.finish();
        found
    });
    if budget.overflowed.load(Ordering::Relaxed) {
        return Err(Error::ResultGuard {
            limit: budget.max_found.unwrap_or(u64::MAX),
        });
    }
    if budget.exceeded.load(Ordering::Relaxed) {
        return Err(Error::ResourceGuard {
            candidates: budget.used.load(Ordering::Relaxed) as u128,
            limit: budget_limit.unwrap_or(u64::MAX) as u128,
        });
    }
    let mut sets = shallow;
    sets.extend(per_root.into_iter().flatten());
    sets.sort_unstable();
    Ok(SearchOutcome {
        sets,
        nodes: budget.used.load(Ordering::Relaxed),
    })
}

fn check_das(n_players: usize, das: usize) -> Result<()> {
    let max = 1usize << n_players;
    if das == 0 || das > max {
        return Err(Error::SetSize { das, max });
    }
    Ok(())
}

fn no_prune(_: &[u32], _: usize) -> bool {
    false
}

/// Every adequate set of exactly `das` members, in lexicographic order.
pub fn enumerate_adequate_sets(
    n_players: usize,
    das: usize,
    limits: &SearchLimits,
    exec: &Exec,
) -> Result<Vec<AdequateSet>> {
    check_players(n_players)?;
    check_das(n_players, das)?;
    limits.check_candidates(n_players, das)?;
    let table = NeighborhoodTable::new(n_players)?;
    let outcome = run_search(&table, das, das, &no_prune, None, exec)?;
    Ok(outcome
        .sets
        .into_iter()
        .map(|m| AdequateSet::from_sorted_unchecked(n_players, m))
        .collect())
}

/// Streaming, single-threaded enumeration. `visit` may return `true` to stop
/// early.
pub fn for_each_adequate_set(
    n_players: usize,
    das: usize,
    limits: &SearchLimits,
    mut visit: impl FnMut(AdequateSet) -> bool,
) -> Result<()> {
    check_players(n_players)?;
    check_das(n_players, das)?;
    limits.check_candidates(n_players, das)?;
    let table = NeighborhoodTable::new(n_players)?;
    let budget = Budget::new(None);
    let mut walker = Walker::new(&table, das, das, &no_prune, &budget);
    walker.visit(0, &mut |m| {
        visit(AdequateSet::from_sorted_unchecked(n_players, m.to_vec()))
    });
    Ok(())
}

pub fn count_adequate_sets(
    n_players: usize,
    das: usize,
    limits: &SearchLimits,
    exec: &Exec,
) -> Result<usize> {
    enumerate_adequate_sets(n_players, das, limits, exec).map(|v| v.len())
}

/// Whether an adequate set of exactly `das` members exists.
pub fn adequate_set_exists(n_players: usize, das: usize, limits: &SearchLimits) -> Result<bool> {
    let mut found = false;
    for_each_adequate_set(n_players, das, limits, |_| {
        found = true;
        true
    })?;
    Ok(found)
}

/// `K(N,1)` for N = 6..=9 from published covering-code tables; not searched.
pub const REFERENCE_COVERING_NUMBERS: [(usize, usize); 4] = [(6, 12), (7, 16), (8, 32), (9, 62)];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoveringNumber {
    pub n_players: usize,
    pub value: usize,
    /// False for stored reference values.
    pub verified: bool,
}

/// Smallest size of an adequate set (`K(N,1)`). Searched for `N ≤ 5`,
/// ascending from the sphere-covering bound `⌈2^N / (N + 1)⌉`.
pub fn covering_number(n_players: usize, limits: &SearchLimits) -> Result<CoveringNumber> {
    match n_players {
        2..=5 => {
            let size = 1usize << n_players;
            let lower = size.div_ceil(n_players + 1);
            for das in lower..=size {
                if adequate_set_exists(n_players, das, limits)? {
                    return Ok(CoveringNumber {
                        n_players,
                        value: das,
                        verified: true,
                    });
                }
            }
            unreachable!("the full configuration space is always adequate")
        }
        6..=9 => {
            let value = REFERENCE_COVERING_NUMBERS
                .iter()
                .find(|(n, _)| *n == n_players)
                .map(|(_, k)| *k)
                .unwrap();
            Ok(CoveringNumber {
                n_players,
                value,
                verified: false,
            })
        }
        n => Err(Error::PlayerCount(n, "2..=9")),
    }
}

/// Signatures admissible as domination witnesses: the frontier itself plus
/// every minimum-size class the frontier dominates on `(1/2, 1)`.
fn witness_pool(
    n_players: usize,
    frontier: &[Signature],
    limits: &SearchLimits,
    exec: &Exec,
) -> Result<(usize, Vec<Signature>, Vec<Witness>)> {
    let minimal = covering_number(n_players, limits)?.value;
    let sets = enumerate_adequate_sets(n_players, minimal, limits, exec)?;
    let classes: Vec<Signature> = sets
        .iter()
        .map(AdequateSet::signature)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let witnesses = dominance::frontier_closure(frontier, &classes)?;
    Ok((minimal, classes, witnesses))
}

fn shifted_prune(witnesses: &[Witness]) -> impl Fn(&[u32], usize) -> bool + Sync + '_ {
    let prepared: Vec<(usize, Vec<u64>)> = witnesses
        .iter()
        .map(|w| (w.signature.das(), w.signature.prefix_sums()))
        .collect();
    move |counts: &[u32], len: usize| {
        prepared.iter().any(|(das, prefix)| {
            len >= *das && dominance::shifted_dominates_counts(prefix, *das, counts, len)
        })
    }
}

/// Adequate sets of size `das` that escape e-shifted domination by every
/// admissible witness. An empty result certifies that the frontier is at
/// least as good as every adequate set of that size on `(1/2, 1)`.
///
/// Witnesses are the frontier plus the minimum-size classes it dominates
/// (directly or through a chain of dominance edges). A subtree is cut as
/// soon as its partial set is dominated, since adding members never
/// escapes e-shifted domination.
pub fn dominance_pruned_scan(
    n_players: usize,
    das: usize,
    frontier: &[Signature],
    limits: &SearchLimits,
    exec: &Exec,
) -> Result<Vec<AdequateSet>> {
    check_players(n_players)?;
    check_das(n_players, das)?;
    limits.check_players(n_players)?;
    if let Some(bad) = frontier.iter().find(|s| s.n_players() != n_players) {
        return Err(Error::LengthMismatch {
            left: bad.n_players(),
            right: n_players,
        });
    }
    let (minimal, _, witnesses) = witness_pool(n_players, frontier, limits, exec)?;
    if das < minimal {
        return Ok(Vec::new());
    }
    let budget = if witnesses.is_empty() {
        limits.check_candidates(n_players, das)?;
        None
    } else {
        limits.node_budget()
    };
    let table = NeighborhoodTable::new(n_players)?;
    let prune = shifted_prune(&witnesses);
    let outcome = run_search(&table, das, das, &prune, budget, exec)?;
    Ok(outcome
        .sets
        .into_iter()
        .map(|m| AdequateSet::from_sorted_unchecked(n_players, m))
        .collect())
}

/// Outcome of the optimality search over all sizes above the minimum.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub n_players: usize,
    pub frontier: Vec<Signature>,
    pub minimal_das: usize,
    pub minimal_classes: Vec<Signature>,
    pub witnesses: Vec<Witness>,
    /// Minimum-size classes the frontier fails to dominate.
    pub undominated_classes: Vec<Signature>,
    pub das_max: usize,
    /// Adequate sets with `minimal_das < das ≤ das_max` escaping domination.
    pub escapes: Vec<AdequateSet>,
    pub nodes_visited: u64,
}

impl Certificate {
    pub fn holds(&self) -> bool {
        self.undominated_classes.is_empty() && self.escapes.is_empty()
    }

    /// Number of escaping sets for each size in `minimal_das + 1..=das_max`.
    pub fn escapes_by_das(&self) -> Vec<(usize, usize)> {
        (self.minimal_das + 1..=self.das_max)
            .map(|d| (d, self.escapes.iter().filter(|s| s.das() == d).count()))
            .collect()
    }
}

/// Search every size from `K(N,1) + 1` to `das_max` at once for adequate sets
/// that escape the frontier's domination on `(1/2, 1)`. The color-swapped
/// half `(0, 1/2)` follows by complementing every set.
pub fn certify(
    n_players: usize,
    frontier: &[Signature],
    das_max: usize,
    limits: &SearchLimits,
    exec: &Exec,
) -> Result<Certificate> {
    check_players(n_players)?;
    check_das(n_players, das_max)?;
    limits.check_players(n_players)?;
    let (minimal, classes, witnesses) = witness_pool(n_players, frontier, limits, exec)?;
    let admitted: BTreeSet<&Signature> = witnesses.iter().map(|w| &w.signature).collect();
    let undominated_classes = classes
        .iter()
        .filter(|c| !admitted.contains(c))
        .cloned()
        .collect();
    let (escapes, nodes) = if das_max > minimal {
        let table = NeighborhoodTable::new(n_players)?;
        let prune = shifted_prune(&witnesses);
        let budget = if witnesses.is_empty() {
            limits.check_candidates(n_players, das_max)?;
            None
        } else {
            limits.node_budget()
        };
        let outcome = run_search(&table, minimal + 1, das_max, &prune, budget, exec)?;
        let mut sets: Vec<AdequateSet> = outcome
            .sets
            .into_iter()
            .map(|m| AdequateSet::from_sorted_unchecked(n_players, m))
            .collect();
        sets.sort_by(|a, b| a.das().cmp(&b.das()).then_with(|| a.cmp(b)));
        (sets, outcome.nodes)
    } else {
        (Vec::new(), 0)
    };
    Ok(Certificate {
        n_players,
        frontier: frontier.to_vec(),
        minimal_das: minimal,
        minimal_classes: classes,
        witnesses,
        undominated_classes,
        das_max,
        escapes,
        nodes_visited: nodes,
    })
}
