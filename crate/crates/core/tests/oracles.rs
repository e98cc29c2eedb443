//! Cross-checks against deliberately naive reimplementations.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use hatgame::adequacy::{self, SearchLimits};
use hatgame::dmg::build_decision_matrix;
use hatgame::dominance::{self, Interval};
use hatgame::probability::{self, psi_closed_form};
use hatgame::verifier::{exact_win_probability, losing_set};
use hatgame::{Action, AdequateSet, ColorDistribution, DecisionMatrix, Exec, QSqrt2, Signature};

fn limits() -> SearchLimits {
    SearchLimits::default()
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn hamming(a: u32, b: u32) -> u32 {
    (a ^ b).count_ones()
}

/// Adequacy straight from the definition, with no lookup tables.
fn naive_adequate(n: usize, members: &[u32]) -> bool {
    (0..1u32 << n).all(|x| members.contains(&x) || members.iter().any(|&m| hamming(x, m) == 1))
}

fn naive_sets(n: usize, das: usize) -> Vec<Vec<u32>> {
    let size = 1u32 << n;
    let mut out: Vec<Vec<u32>> = (0u64..1 << size)
        .filter(|mask| mask.count_ones() as usize == das)
        .map(|mask| (0..size).filter(|i| mask >> i & 1 == 1).collect::<Vec<u32>>())
        .filter(|m| naive_adequate(n, m))
        .collect();
    out.sort();
    out
}

#[test]
fn enumeration_matches_naive_checker_up_to_three_players() {
    for n in 1..=3 {
        for das in 1..=(1usize << n) {
            let fast: Vec<Vec<u32>> =
                adequacy::enumerate_adequate_sets(n, das, &limits(), &Exec::sequential())
                    .unwrap()
                    .iter()
                    .map(|s| s.members().to_vec())
                    .collect();
            assert_eq!(fast, naive_sets(n, das), "N={n}, das={das}");
        }
    }
}

/// Gosper's hack over all `k`-subsets of 32 configurations.
fn count_five_player_sets(k: u32) -> usize {
    let closed: Vec<u32> = (0..32u32)
        .map(|x| (0..5).fold(1u32 << x, |acc, i| acc | 1 << (x ^ (1 << i))))
        .collect();
    let mut count = 0;
    let mut set: u64 = (1 << k) - 1;
    while set < 1 << 32 {
        let mut covered = 0u32;
        let mut rest = set;
        while rest != 0 {
            covered |= closed[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        if covered == u32::MAX {
            count += 1;
        }
        let c = set & set.wrapping_neg();
        let r = set + c;
        set = (((r ^ set) >> 2) / c) | r;
    }
    count
}

#[test]
fn five_player_counts_by_brute_force() {
    assert_eq!(count_five_player_sets(6), 0);
    assert_eq!(count_five_player_sets(7), 320);
    let lib = adequacy::count_adequate_sets(5, 7, &limits(), &Exec::sequential()).unwrap();
    assert_eq!(lib, 320);
}

#[test]
fn four_player_sets_match_naive_checker() {
    for das in 3..=5 {
        let fast = adequacy::count_adequate_sets(4, das, &limits(), &Exec::sequential()).unwrap();
        let naive = (0u32..1 << 16)
            .filter(|m| m.count_ones() as usize == das)
            .filter(|m| {
                let members: Vec<u32> = (0..16).filter(|i| m >> i & 1 == 1).collect();
                naive_adequate(4, &members)
            })
            .count();
        assert_eq!(fast, naive, "das={das}");
    }
}

/// The game rule evaluated literally: every player reads the other hats,
/// looks up their cell and acts.
fn simulate(m: &DecisionMatrix, p: &BigRational) -> BigRational {
    let n = m.n_players();
    let q = rat(1, 1) - p;
    let mut total = rat(0, 1);
    for config in 0..1u32 << n {
        let hats: Vec<u32> = (0..n).map(|i| config >> (n - 1 - i) & 1).collect();
        let mut someone_right = false;
        let mut someone_wrong = false;
        for player in 0..n {
            let seen: u32 = hats
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != player)
                .fold(0, |acc, (_, h)| acc << 1 | h);
            match m.get(player + 1, seen) {
                Action::Guess0 if hats[player] == 0 => someone_right = true,
                Action::Guess1 if hats[player] == 1 => someone_right = true,
                Action::Guess0 | Action::Guess1 => someone_wrong = true,
                Action::Pass | Action::Star => {}
            }
        }
        if someone_right && !someone_wrong {
            let mut w = rat(1, 1);
            for h in &hats {
                w *= if *h == 0 { p } else { &q };
            }
            total += w;
        }
    }
    total
}

#[test]
fn thirty_two_cases_of_the_listed_optimum() {
    let s = AdequateSet::parse(5, "0,7,11,19,28,29,30").unwrap();
    let m = build_decision_matrix(&s).unwrap();
    let p = rat(11, 20);
    let expected = simulate(&m, &p);
    assert_eq!(expected, rat(2_541_771, 3_200_000));
    let d = ColorDistribution::ratio(11, 20).unwrap();
    assert_eq!(exact_win_probability(&m, &d), QSqrt2::from_rational(expected.clone()));
    assert_eq!(psi_closed_form(d.p()).unwrap(), QSqrt2::from_rational(expected));
}

fn action() -> impl Strategy<Value = Action> {
    prop_oneof![
        Just(Action::Guess0),
        Just(Action::Guess1),
        Just(Action::Pass),
        Just(Action::Star)
    ]
}

fn matrix(n: usize) -> impl Strategy<Value = DecisionMatrix> {
    proptest::collection::vec(proptest::collection::vec(action(), 1 << (n - 1)), n)
        .prop_map(|rows| DecisionMatrix::from_rows(rows).unwrap())
}

/// Extend `members` to an adequate set by adding each uncovered
/// configuration in turn.
fn make_adequate(n: usize, mut members: Vec<u32>) -> Vec<u32> {
    for x in 0..1u32 << n {
        if !members.contains(&x) && !members.iter().any(|&m| hamming(x, m) == 1) {
            members.push(x);
        }
    }
    members
}

proptest! {
    #![proptest_config(ProptestConfig {
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn verifier_agrees_with_literal_simulation(
        m in (1usize..=4).prop_flat_map(matrix),
        num in 0i64..=12,
    ) {
        let p = rat(num, 12);
        let d = ColorDistribution::new(QSqrt2::from_rational(p.clone())).unwrap();
        prop_assert_eq!(exact_win_probability(&m, &d), QSqrt2::from_rational(simulate(&m, &p)));
    }

    #[test]
    fn generated_matrices_never_guess_wrong_outside_the_set(
        members in proptest::collection::vec(0u32..16, 0..6),
    ) {
        let s = AdequateSet::new(4, make_adequate(4, members)).unwrap();
        prop_assert!(adequacy::is_adequate(&s));
        let m = build_decision_matrix(&s).unwrap();
        prop_assert_eq!(losing_set(&m), s.members().to_vec());
    }
}

#[test]
fn complemented_sets_swap_the_colors() {
    let sets = adequacy::enumerate_adequate_sets(5, 7, &limits(), &Exec::sequential()).unwrap();
    let all: BTreeSet<&AdequateSet> = sets.iter().collect();
    let d = ColorDistribution::ratio(3, 7).unwrap();
    for s in &sets {
        let c = s.complemented();
        assert!(all.contains(&c));
        assert_eq!(
            probability::win_probability(&c, &d),
            probability::win_probability(s, &d.mirrored())
        );
    }
}

#[test]
fn closed_form_bounds_every_minimum_set() {
    let sets = adequacy::enumerate_adequate_sets(5, 7, &limits(), &Exec::sequential()).unwrap();
    for k in 1..40 {
        let d = ColorDistribution::ratio(k, 40).unwrap();
        let psi = psi_closed_form(d.p()).unwrap();
        let optimal: BTreeSet<AdequateSet> =
            probability::optimal_among(&sets, &d, &Exec::sequential()).into_iter().collect();
        for s in &sets {
            let w = probability::win_probability(s, &d);
            assert!(w <= psi);
            assert_eq!(w == psi, optimal.contains(s), "p={k}/40, {s}");
        }
    }
}

#[test]
fn closed_form_minimum_is_at_one_half() {
    let min = QSqrt2::ratio(25, 32);
    for k in 0..=200 {
        let v = psi_closed_form(&QSqrt2::ratio(k, 200)).unwrap();
        assert!(v >= min);
        assert_eq!(v == min, k == 100);
    }
}

#[test]
fn larger_sets_lose_at_least_as_much_as_the_frontier() {
    // Direct semantic check of the size-8 part of the certificate.
    let sets = adequacy::enumerate_adequate_sets(5, 8, &limits(), &Exec::sequential()).unwrap();
    assert_eq!(sets.len(), 24_340);
    let signatures: BTreeSet<Signature> = sets.iter().map(AdequateSet::signature).collect();
    let a: Signature = "024001".parse().unwrap();
    let b: Signature = "022210".parse().unwrap();
    for k in 1..20 {
        let d = ColorDistribution::ratio(k, 20).unwrap();
        let best = hatgame::BadPolynomial::from_signature(&a)
            .evaluate(&d)
            .min(hatgame::BadPolynomial::from_signature(&b).evaluate(&d));
        let best = best.min(
            hatgame::BadPolynomial::from_signature(&a.mirrored())
                .evaluate(&d)
                .min(hatgame::BadPolynomial::from_signature(&b.mirrored()).evaluate(&d)),
        );
        for s in &signatures {
            assert!(hatgame::BadPolynomial::from_signature(s).evaluate(&d) > best);
        }
    }
}

#[test]
fn dominance_on_the_two_sub_intervals() {
    let sets = adequacy::enumerate_adequate_sets(5, 7, &limits(), &Exec::sequential()).unwrap();
    let sigs: Vec<Signature> = probability::classify_by_signature(&sets).into_keys().collect();
    let cut = QSqrt2::two_minus_sqrt2();
    for (interval, winner) in [
        (Interval::new(QSqrt2::half(), cut.clone()).unwrap(), "024001"),
        (Interval::new(cut, QSqrt2::one()).unwrap(), "022210"),
    ] {
        let edges = dominance::dominance_graph(&sigs, &interval, &Exec::sequential()).unwrap();
        let top = dominance::maximal_classes(&sigs, &edges, &interval);
        assert_eq!(top, vec![winner.parse::<Signature>().unwrap()], "{interval}");
    }
    let single = dominance::dominance_graph(&sigs[..1], &Interval::upper_half(), &Exec::sequential())
        .unwrap();
    assert!(single.is_empty());
}

#[test]
fn prefix_dominance_is_sound_and_transitive() {
    let sets = adequacy::enumerate_adequate_sets(5, 7, &limits(), &Exec::sequential()).unwrap();
    let sigs: Vec<Signature> = probability::classify_by_signature(&sets).into_keys().collect();
    let dom = |b: &Signature, a: &Signature| dominance::dominates_prefix(b, a).unwrap();
    for a in &sigs {
        for b in &sigs {
            if !dom(b, a) {
                continue;
            }
            for k in 11..20 {
                let d = ColorDistribution::ratio(k, 20).unwrap();
                assert!(
                    hatgame::BadPolynomial::from_signature(b).evaluate(&d)
                        <= hatgame::BadPolynomial::from_signature(a).evaluate(&d)
                );
            }
            for c in &sigs {
                if dom(a, c) {
                    assert!(dom(b, c), "{b} ≥ {a} ≥ {c}");
                }
            }
        }
    }
}
