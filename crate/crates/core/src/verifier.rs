//! Direct evaluation of decision matrices over all `2^N` configurations, and
//! a brute-force search of the whole strategy space for tiny `N`.

use crate::error::{Error, Result};
use crate::exact::QSqrt2;
use crate::exec::Exec;
use crate::model::{
    check_players, color_of, s_code, zeros_count, Action, ColorDistribution, DecisionMatrix,
};

/// Largest number of Star cells accepted by [`strict_win_probability`].
pub const MAX_STRICT_STARS: usize = 8;

/// Largest player count accepted by [`exhaustive_best_strategy`].
pub const MAX_EXHAUSTIVE_PLAYERS: usize = 3;

/// The team wins on `bits` when someone guesses and nobody guesses wrong.
/// Star cells play as Pass.
pub fn wins(m: &DecisionMatrix, bits: u32) -> bool {
    let n = m.n_players();
    let mut guessed = false;
    for player in 1..=n {
        if let Some(c) = m.get(player, s_code(bits, n, player)).guessed_color() {
            if c != color_of(bits, n, player) {
                return false;
            }
            guessed = true;
        }
    }
    guessed
}

/// Configurations on which `m` loses, ascending.
pub fn losing_set(m: &DecisionMatrix) -> Vec<u32> {
    (0..1u32 << m.n_players()).filter(|&b| !wins(m, b)).collect()
}

pub fn exact_win_probability(m: &DecisionMatrix, dist: &ColorDistribution) -> QSqrt2 {
    let n = m.n_players();
    let mut counts = vec![0i64; n + 1];
    for bits in 0..1u32 << n {
        if wins(m, bits) {
            counts[zeros_count(bits, n)] += 1;
        }
    }
    weigh(&counts, dist, n)
}

fn weigh(counts: &[i64], dist: &ColorDistribution, n: usize) -> QSqrt2 {
    dist.weights(n)
        .iter()
        .zip(counts)
        .fold(QSqrt2::zero(), |acc, (w, &c)| &acc + &(w * &QSqrt2::integer(c)))
}

/// Result of evaluating every completion of the Star cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictReport {
    /// Probability with Stars played as Pass.
    pub probability: QSqrt2,
    pub stars: usize,
    pub completions: usize,
    /// Completions whose probability differs from `probability`.
    pub deviating: Vec<DecisionMatrix>,
}

impl StrictReport {
    pub fn star_safe(&self) -> bool {
        self.deviating.is_empty()
    }
}

/// Replaces each Star by Guess0, Guess1 or Pass in all `3^stars` ways and
/// evaluates every completion.
pub fn strict_win_probability(
    m: &DecisionMatrix,
    dist: &ColorDistribution,
    exec: &Exec,
) -> Result<StrictReport> {
    let stars = m.star_positions();
    if stars.len() > MAX_STRICT_STARS {
        return Err(Error::TooManyStars {
            stars: stars.len(),
            max: MAX_STRICT_STARS,
        });
    }
    let probability = exact_win_probability(m, dist);
    let completions = 3usize.pow(stars.len() as u32);
    const CHOICES: [Action; 3] = [Action::Guess0, Action::Guess1, Action::Pass];
    let results = exec.map_range(completions, |mut k| {
        let mut filled = m.clone();
        for &(player, scode) in &stars {
            filled.set(player, scode, CHOICES[k % 3]);
            k /= 3;
        }
        let value = exact_win_probability(&filled, dist);
        (filled, value)
    });
    let deviating = results
        .into_iter()
        .filter(|(_, v)| v != &probability)
        .map(|(f, _)| f)
        .collect();
    Ok(StrictReport {
        probability,
        stars: stars.len(),
        completions,
        deviating,
    })
}

/// Digit order inside one row: 0 = Pass, 1 = Guess0, 2 = Guess1.
const ROW_ALPHABET: [Action; 3] = [Action::Pass, Action::Guess0, Action::Guess1];

fn decode_row(mut index: usize, width: usize) -> Vec<Action> {
    // Cell 0 is the most significant digit.
    let mut row = vec![Action::Pass; width];
    for cell in (0..width).rev() {
        row[cell] = ROW_ALPHABET[index % 3];
        index /= 3;
    }
    row
}

/// Bitmasks over configurations: where a row guesses right and where wrong.
fn row_masks(n: usize, player: usize, row: &[Action]) -> (u64, u64) {
    let (mut right, mut wrong) = (0u64, 0u64);
    for bits in 0..1u32 << n {
        if let Some(c) = row[s_code(bits, n, player) as usize].guessed_color() {
            if c == color_of(bits, n, player) {
                right |= 1 << bits;
            } else {
                wrong |= 1 << bits;
            }
        }
    }
    (right, wrong)
}

/// Scans all `3^(N·2^(N−1))` strategy tables in mixed-radix order (player 1's
/// row most significant) and returns the first maximizer with its exact
/// winning probability.
pub fn exhaustive_best_strategy(
    n_players: usize,
    dist: &ColorDistribution,
    exec: &Exec,
) -> Result<(DecisionMatrix, QSqrt2)> {
    check_players(n_players)?;
    if n_players > MAX_EXHAUSTIVE_PLAYERS {
        return Err(Error::PlayerCount(n_players, "1..=3"));
    }
    let n = n_players;
    let width = 1usize << (n - 1);
    let rows_per_player = 3usize.pow(width as u32);
    let masks: Vec<Vec<(u64, u64)>> = (1..=n)
        .map(|player| {
            (0..rows_per_player)
                .map(|r| row_masks(n, player, &decode_row(r, width)))
                .collect()
        })
        .collect();
    let zero_masks: Vec<u64> = (0..=n)
        .map(|z| {
            (0..1u32 << n)
                .filter(|&b| zeros_count(b, n) == z)
                .fold(0u64, |acc, b| acc | 1 << b)
        })
        .collect();
    let weights = dist.weights(n);
    let total_rest = rows_per_player.pow(n as u32 - 1);

    // Each partition fixes player 1's row and keeps, per distinct vector of
    // winning counts, the first strategy index reaching it.
    let partitions = exec.map_range(rows_per_player, |r1| {
        let mut firsts: Vec<(Vec<i64>, usize)> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let (right1, wrong1) = masks[0][r1];
        for rest in 0..total_rest {
            let (mut right, mut wrong) = (right1, wrong1);
            let mut k = rest;
            for player in (1..n).rev() {
                let (r, w) = masks[player][k % rows_per_player];
                right |= r;
                wrong |= w;
                k /= rows_per_player;
            }
            let win = right & !wrong;
            let counts: Vec<i64> = zero_masks
                .iter()
                .map(|zm| (win & zm).count_ones() as i64)
                .collect();
            if seen.insert(counts.clone()) {
                firsts.push((counts, r1 * total_rest + rest));
            }
        }
        let mut best: Option<(QSqrt2, usize)> = None;
        for (counts, index) in firsts {
            let value = weights
                .iter()
                .zip(&counts)
                .fold(QSqrt2::zero(), |acc, (w, &c)| &acc + &(w * &QSqrt2::integer(c)));
            let better = match &best {
                None => true,
                Some((v, i)) => value > *v || (value == *v && index < *i),
            };
            if better {
                best = Some((value, index));
            }
        }
        best.expect("every partition is non-empty")
    });
    let (value, index) = partitions
        .into_iter()
        .reduce(|a, b| if b.0 > a.0 { b } else { a })
        .expect("at least one partition");

    let mut rows = Vec::with_capacity(n);
    let mut k = index;
    let mut digits = vec![0usize; n];
    for player in (0..n).rev() {
        digits[player] = k % rows_per_player;
        k /= rows_per_player;
    }
    for d in digits {
        rows.push(decode_row(d, width));
    }
    Ok((DecisionMatrix::from_rows(rows)?, value))
}
