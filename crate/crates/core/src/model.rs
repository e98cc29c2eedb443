//! Shared domain types for the two-color hat game.
//!
//! Conventions used throughout the crate:
//!
//! * A configuration of `N` hats is an integer whose binary digits are
//!   `b_1 b_2 … b_N`, with player 1 in the **most significant** bit. So the
//!   configuration `11110` (players 1–4 wear color 1, player 5 wears color 0)
//!   is the integer 30.
//! * `p` is the probability of color **0** and `q = 1 − p` that of color 1.
//!   A configuration with `z` zero bits has probability `p^z · q^(N−z)`.
//! * A [`Signature`] counts members by number of zero bits; digit `i` of the
//!   signature contributes `p^i q^(N−i)` to the losing probability.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::QSqrt2;

/// Largest supported player count. Tables of size `2^N` are allocated freely
/// below this bound.
pub const MAX_PLAYERS: usize = 16;

pub(crate) fn check_players(n_players: usize) -> Result<()> {
    if (1..=MAX_PLAYERS).contains(&n_players) {
        Ok(())
    } else {
        Err(Error::PlayerCount(n_players, "1..=16"))
    }
}

/// One assignment of colors to `n_players` players.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HatConfiguration {
    n_players: usize,
    bits: u32,
}

impl HatConfiguration {
    pub fn new(n_players: usize, bits: u32) -> Result<Self> {
        check_players(n_players)?;
        if (bits as u64) >> n_players != 0 {
            return Err(Error::ConfigurationOutOfRange {
                value: bits as u64,
                n_players,
            });
        }
        Ok(Self { n_players, bits })
    }

    pub fn n_players(&self) -> usize {
        self.n_players
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Color of `player` (1-based).
    pub fn color(&self, player: usize) -> u8 {
        color_of(self.bits, self.n_players, player)
    }

    pub fn zeros_count(&self) -> usize {
        zeros_count(self.bits, self.n_players)
    }

    pub fn s_codes(&self) -> Vec<SCode> {
        (1..=self.n_players)
            .map(|player| SCode {
                player,
                value: s_code(self.bits, self.n_players, player),
            })
            .collect()
    }
}

/// What one player observes: the configuration with their own bit removed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SCode {
    pub player: usize,
    pub value: u32,
}

#[inline]
pub fn zeros_count(bits: u32, n_players: usize) -> usize {
    n_players - bits.count_ones() as usize
}

#[inline]
pub fn color_of(bits: u32, n_players: usize, player: usize) -> u8 {
    ((bits >> (n_players - player)) & 1) as u8
}

/// S-code of `player` (1-based): delete the player's bit and pack the rest,
/// keeping their order.
#[inline]
pub fn s_code(bits: u32, n_players: usize, player: usize) -> u32 {
    let shift = n_players - player;
    let low = bits & ((1u32 << shift) - 1);
    let high = bits >> (shift + 1);
    (high << shift) | low
}

/// Inverse of [`s_code`]: re-insert `color` at `player`'s position.
#[inline]
pub fn insert_bit(scode: u32, n_players: usize, player: usize, color: u8) -> u32 {
    let shift = n_players - player;
    let low = scode & ((1u32 << shift) - 1);
    let high = scode >> shift;
    (high << (shift + 1)) | ((color as u32) << shift) | low
}

/// Probability law of the two colors. `p` is the probability of color 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorDistribution {
    p: QSqrt2,
    q: QSqrt2,
}

impl ColorDistribution {
    pub fn new(p: QSqrt2) -> Result<Self> {
        if p < QSqrt2::zero() || p > QSqrt2::one() {
            return Err(Error::ProbabilityRange(p.to_string()));
        }
        let q = p.complement();
        Ok(Self { p, q })
    }

    pub fn ratio(numer: i64, denom: i64) -> Result<Self> {
        Self::new(QSqrt2::ratio(numer, denom))
    }

    pub fn symmetric() -> Self {
        Self::new(QSqrt2::half()).expect("1/2 is a probability")
    }

    pub fn p(&self) -> &QSqrt2 {
        &self.p
    }

    pub fn q(&self) -> &QSqrt2 {
        &self.q
    }

    /// Same distribution with the two colors swapped.
    pub fn mirrored(&self) -> Self {
        Self {
            p: self.q.clone(),
            q: self.p.clone(),
        }
    }

    /// `weights()[z] = p^z · q^(N−z)`, the probability of one configuration
    /// with `z` zero bits.
    pub fn weights(&self, n_players: usize) -> Vec<QSqrt2> {
        (0..=n_players)
            .map(|z| &self.p.pow(z as u32) * &self.q.pow((n_players - z) as u32))
            .collect()
    }
}

/// A set of configurations, kept sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AdequateSet {
    n_players: usize,
    members: Vec<u32>,
}

impl AdequateSet {
    pub fn new(n_players: usize, members: impl IntoIterator<Item = u32>) -> Result<Self> {
        check_players(n_players)?;
        let mut members: Vec<u32> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&m| (m as u64) >> n_players != 0) {
            return Err(Error::ConfigurationOutOfRange {
                value: bad as u64,
                n_players,
            });
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self { n_players, members })
    }

    /// Caller guarantees sorted, distinct, in-range members.
    pub(crate) fn from_sorted_unchecked(n_players: usize, members: Vec<u32>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Self { n_players, members }
    }

    pub fn full(n_players: usize) -> Result<Self> {
        check_players(n_players)?;
        Ok(Self::from_sorted_unchecked(
            n_players,
            (0..1u32 << n_players).collect(),
        ))
    }

    pub fn n_players(&self) -> usize {
        self.n_players
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn das(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, config: u32) -> bool {
        self.members.binary_search(&config).is_ok()
    }

    pub fn signature(&self) -> Signature {
        Signature::of_members(self.n_players, &self.members)
    }

    /// Flip every bit of every member (swap the two colors).
    pub fn complemented(&self) -> Self {
        let mask = (1u32 << self.n_players) - 1;
        let mut members: Vec<u32> = self.members.iter().map(|m| m ^ mask).collect();
        members.sort_unstable();
        Self::from_sorted_unchecked(self.n_players, members)
    }

    /// Comma-separated members, e.g. `0,7,11,19,28,29,30`.
    pub fn to_csv_string(&self) -> String {
        self.members
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parse the comma-separated form.
    pub fn parse(n_players: usize, text: &str) -> Result<Self> {
        let members = text
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<u32>().map_err(|_| Error::Parse {
                    input: text.to_string(),
                    reason: format!("'{t}' is not a configuration number"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n_players, members)
    }
}

impl fmt::Display for AdequateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_csv_string())
    }
}

/// `counts[i]` = number of members with exactly `i` zero bits.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signature {
    counts: Vec<u32>,
}

impl Signature {
    pub fn new(counts: Vec<u32>) -> Self {
        Self { counts }
    }

    pub fn of_members(n_players: usize, members: &[u32]) -> Self {
        let mut counts = vec![0u32; n_players + 1];
        for &m in members {
            counts[zeros_count(m, n_players)] += 1;
        }
        Self { counts }
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn n_players(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn das(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    pub fn prefix_sums(&self) -> Vec<u64> {
        self.counts
            .iter()
            .scan(0u64, |acc, &c| {
                *acc += c as u64;
                Some(*acc)
            })
            .collect()
    }

    /// Signature of the color-swapped set: counts reversed.
    pub fn mirrored(&self) -> Self {
        Self {
            counts: self.counts.iter().rev().copied().collect(),
        }
    }

    /// Digit-string form (`024001`); `None` if some count exceeds 9.
    pub fn digits(&self) -> Option<String> {
        self.counts
            .iter()
            .map(|&c| char::from_digit(c, 10))
            .collect()
    }
}

/// Digit string when every count is a single digit, otherwise a bracketed list.
impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.digits() {
            Some(d) => f.write_str(&d),
            None => {
                let parts: Vec<String> = self.counts.iter().map(u32::to_string).collect();
                write!(f, "[{}]", parts.join(","))
            }
        }
    }
}

impl FromStr for Signature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let err = |reason: &str| Error::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let counts: Vec<u32> = if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            inner
                .split(',')
                .map(|t| t.trim().parse::<u32>().map_err(|_| err("expected integers")))
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).ok_or_else(|| err("expected decimal digits")))
                .collect::<Result<_>>()?
        };
        if counts.len() < 2 {
            return Err(err("a signature needs at least two entries"));
        }
        Ok(Self { counts })
    }
}

/// Losing-probability polynomial `Σ coeffs[i] · p^i · q^(N−i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BadPolynomial {
    coeffs: Vec<u64>,
}

impl BadPolynomial {
    pub fn new(coeffs: Vec<u64>) -> Self {
        Self { coeffs }
    }

    pub fn from_signature(signature: &Signature) -> Self {
        Self {
            coeffs: signature.counts().iter().map(|&c| c as u64).collect(),
        }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn n_players(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn evaluate(&self, dist: &ColorDistribution) -> QSqrt2 {
        let weights = dist.weights(self.n_players());
        self.coeffs
            .iter()
            .zip(&weights)
            .filter(|(c, _)| **c != 0)
            .fold(QSqrt2::zero(), |acc, (&c, w)| {
                &acc + &w.scale(&BigRational::from_integer(c.into()))
            })
    }

    /// Expanded as an integer polynomial in `p` alone (`q = 1 − p`).
    pub fn to_poly(&self) -> crate::poly::Poly {
        crate::poly::Poly::from_pq_terms(&self.coeffs)
    }
}

/// Human-readable `2pq^4+4p^2q^3+p^5`.
impl fmt::Display for BadPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n_players();
        let power = |var: char, e: usize| match e {
            0 => String::new(),
            1 => var.to_string(),
            e => format!("{var}^{e}"),
        };
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            let mono = format!("{}{}", power('p', i), power('q', n - i));
            match (c, mono.is_empty()) {
                (c, true) => write!(f, "{c}")?,
                (1, false) => f.write_str(&mono)?,
                (c, false) => write!(f, "{c}{mono}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// One cell of a decision matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Action {
    Guess0,
    Guess1,
    Pass,
    /// Both colors are bad: any choice gives the same result.
    Star,
}

impl Action {
    pub fn guess(color: u8) -> Self {
        if color == 0 {
            Action::Guess0
        } else {
            Action::Guess1
        }
    }

    /// Guessed color, with Star played as Pass.
    pub fn guessed_color(self) -> Option<u8> {
        match self {
            Action::Guess0 => Some(0),
            Action::Guess1 => Some(1),
            Action::Pass | Action::Star => None,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Action::Guess0 => "0",
            Action::Guess1 => "1",
            Action::Pass => "",
            Action::Star => "*",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        match s.trim() {
            "0" => Some(Action::Guess0),
            "1" => Some(Action::Guess1),
            "" => Some(Action::Pass),
            "*" | "⋆" => Some(Action::Star),
            _ => None,
        }
    }
}

/// `rows[i][j]`: action of player `i + 1` on observing S-code `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DecisionMatrix {
    n_players: usize,
    rows: Vec<Vec<Action>>,
}

impl DecisionMatrix {
    pub fn filled(n_players: usize, action: Action) -> Result<Self> {
        check_players(n_players)?;
        let width = 1usize << (n_players - 1);
        Ok(Self {
            n_players,
            rows: vec![vec![action; width]; n_players],
        })
    }

    pub fn from_rows(rows: Vec<Vec<Action>>) -> Result<Self> {
        let n_players = rows.len();
        check_players(n_players)?;
        let width = 1usize << (n_players - 1);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(Error::MatrixSchema {
                    row: i + 1,
                    column: row.len().min(width) + 1,
                    reason: format!("expected {width} columns, found {}", row.len()),
                });
            }
        }
        Ok(Self { n_players, rows })
    }

    pub fn n_players(&self) -> usize {
        self.n_players
    }

    pub fn width(&self) -> usize {
        1usize << (self.n_players - 1)
    }

    pub fn rows(&self) -> &[Vec<Action>] {
        &self.rows
    }

    /// Row of `player` (1-based).
    pub fn row(&self, player: usize) -> &[Action] {
        &self.rows[player - 1]
    }

    pub fn get(&self, player: usize, scode: u32) -> Action {
        self.rows[player - 1][scode as usize]
    }

    pub fn set(&mut self, player: usize, scode: u32, action: Action) {
        self.rows[player - 1][scode as usize] = action;
    }

    /// `(player, scode)` of every Star cell, row-major.
    pub fn star_positions(&self) -> Vec<(usize, u32)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, a)| **a == Action::Star)
                    .map(move |(j, _)| (i + 1, j as u32))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zeros_count_examples() {
        assert_eq!(zeros_count(0, 5), 5);
        assert_eq!(zeros_count(30, 5), 1);
        assert_eq!(zeros_count(7, 5), 2);
    }

    #[test]
    fn s_code_examples() {
        let codes = |bits, n| {
            HatConfiguration::new(n, bits)
                .unwrap()
                .s_codes()
                .iter()
                .map(|s| s.value)
                .collect::<Vec<_>>()
        };
        assert_eq!(codes(0, 2), vec![0, 0]);
        assert_eq!(codes(3, 2), vec![1, 1]);
        let c30 = codes(30, 5);
        assert_eq!(c30[0], 14);
        assert_eq!(c30[4], 15);
    }

    #[test]
    fn s_code_matches_weighted_sum() {
        // s_i = Σ_{k<i} b_k 2^(N−k−1) + Σ_{k>i} b_k 2^(N−k)
        for n in 1..=6usize {
            for bits in 0..(1u32 << n) {
                for i in 1..=n {
                    let b = |k: usize| color_of(bits, n, k) as u32;
                    let expected: u32 = (1..i).map(|k| b(k) << (n - k - 1)).sum::<u32>()
                        + (i + 1..=n).map(|k| b(k) << (n - k)).sum::<u32>();
                    assert_eq!(s_code(bits, n, i), expected, "n={n} bits={bits} i={i}");
                }
            }
        }
    }

    #[test]
    fn configuration_range_is_checked() {
        assert!(HatConfiguration::new(5, 31).is_ok());
        assert!(HatConfiguration::new(5, 32).is_err());
        assert!(HatConfiguration::new(0, 0).is_err());
        assert!(AdequateSet::new(5, [0, 40]).is_err());
    }

    #[test]
    fn set_display_and_parse() {
        let s = AdequateSet::parse(5, "30, 0,7,11,19,28,29").unwrap();
        assert_eq!(s.members(), &[0, 7, 11, 19, 28, 29, 30]);
        assert_eq!(s.to_csv_string(), "0,7,11,19,28,29,30");
        assert_eq!(s.signature().to_string(), "024001");
        assert!(AdequateSet::parse(5, "1,x").is_err());
    }

    #[test]
    fn signature_forms() {
        let s: Signature = "024001".parse().unwrap();
        assert_eq!(s.counts(), &[0, 2, 4, 0, 0, 1]);
        assert_eq!(s.das(), 7);
        assert_eq!(s.prefix_sums(), vec![0, 2, 6, 6, 6, 7]);
        let wide = Signature::new(vec![12, 0, 3]);
        assert_eq!(wide.to_string(), "[12,0,3]");
        assert_eq!(wide.to_string().parse::<Signature>().unwrap(), wide);
        assert!("02a".parse::<Signature>().is_err());
    }

    #[test]
    fn bad_polynomial_display() {
        let poly = BadPolynomial::new(vec![0, 2, 4, 0, 0, 1]);
        assert_eq!(poly.to_string(), "2pq^4+4p^2q^3+p^5");
        let poly = BadPolynomial::new(vec![1, 0, 0, 4, 2, 0]);
        assert_eq!(poly.to_string(), "q^5+4p^3q^2+2p^4q");
        assert_eq!(BadPolynomial::new(vec![0, 0]).to_string(), "0");
    }

    #[test]
    fn distribution_bounds() {
        assert!(ColorDistribution::ratio(3, 2).is_err());
        assert!(ColorDistribution::ratio(-1, 2).is_err());
        let d = ColorDistribution::ratio(1, 3).unwrap();
        assert_eq!(d.q(), &QSqrt2::ratio(2, 3));
        assert_eq!(d.mirrored().p(), &QSqrt2::ratio(2, 3));
    }

    proptest! {
        #[test]
        fn reinserting_a_bit_reconstructs(n in 1usize..=10, raw in any::<u32>(), player_raw in any::<usize>()) {
            let bits = raw & ((1u32 << n) - 1);
            let player = player_raw % n + 1;
            let code = s_code(bits, n, player);
            prop_assert!(code < 1u32 << (n - 1));
            let original = color_of(bits, n, player);
            prop_assert_eq!(insert_bit(code, n, player, original), bits);
            let flipped = insert_bit(code, n, player, 1 - original);
            prop_assert_eq!((flipped ^ bits).count_ones(), 1);
        }

        #[test]
        fn zeros_plus_ones_is_n(n in 1usize..=16, raw in any::<u32>()) {
            let bits = raw & ((1u32 << n) - 1);
            prop_assert_eq!(zeros_count(bits, n) + bits.count_ones() as usize, n);
        }

        #[test]
        fn signature_reverses_under_complement(members in proptest::collection::vec(0u32..32, 0..12)) {
            let set = AdequateSet::new(5, members).unwrap();
            prop_assert_eq!(set.complemented().signature(), set.signature().mirrored());
        }
    }
}
