//! Dominance between signature classes.
//!
//! Signature `b` dominates `a` on an interval when the losing probability of
//! `b` is nowhere larger than that of `a`. With `p > q` a member with fewer
//! zero bits is cheaper, so the combinatorial sufficient condition is that
//! every prefix sum of `b`'s counts is at least the matching prefix sum of
//! `a`'s. For sets of different size, `a` first loses its `e = das(a) −
//! das(b)` cheapest members, which lowers each prefix sum by at most `e`.
//!
//! Pairs not settled by the prefix rule are decided by the exact sign of
//! `poly(b) − poly(a)`, see [`sign`].

pub mod sign;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

pub use sign::{sign_on_interval, sign_on_mirrored_interval, Boundary, Interval, Sign, SignClass};

use crate::error::{Error, Result};
use crate::exact::QSqrt2;
use crate::exec::Exec;
use crate::model::{BadPolynomial, Signature};
use crate::poly::Poly;

fn check_lengths(b: &Signature, a: &Signature) -> Result<()> {
    if b.n_players() != a.n_players() {
        return Err(Error::LengthMismatch {
            left: b.n_players(),
            right: a.n_players(),
        });
    }
    Ok(())
}

/// Prefix-sum dominance for signatures of equal size. The final prefix
/// (the total) is equal by precondition and not compared.
pub fn dominates_prefix(b: &Signature, a: &Signature) -> Result<bool> {
    check_lengths(b, a)?;
    if b.das() != a.das() {
        return Err(Error::DasMismatch {
            left: b.das(),
            right: a.das(),
        });
    }
    dominates_shifted(b, a)
}

/// E-shifted dominance: `b` may be smaller than `a` by `e = das(a) − das(b)`.
pub fn dominates_shifted(b: &Signature, a: &Signature) -> Result<bool> {
    check_lengths(b, a)?;
    if a.das() < b.das() {
        return Err(Error::DasMismatch {
            left: b.das(),
            right: a.das(),
        });
    }
    Ok(shifted_dominates_counts(
        &b.prefix_sums(),
        b.das(),
        a.counts(),
        a.das(),
    ))
}

/// Core of [`dominates_shifted`] on raw data, used in the search hot loop.
/// Requires `das_a ≥ das_b`.
#[inline]
pub(crate) fn shifted_dominates_counts(
    prefix_b: &[u64],
    das_b: usize,
    counts_a: &[u32],
    das_a: usize,
) -> bool {
    let e = (das_a - das_b) as u64;
    let mut acc = 0u64;
    for (pb, &ca) in prefix_b.iter().zip(counts_a) {
        acc += ca as u64;
        if pb + e < acc {
            return false;
        }
    }
    true
}

/// Losing probability of a signature class as a polynomial in `p`.
pub fn loss_poly(signature: &Signature) -> Poly {
    BadPolynomial::from_signature(signature).to_poly()
}

/// `loss(winner) − loss(loser)`; `≤ 0` where `winner` is at least as good.
pub fn loss_difference(winner: &Signature, loser: &Signature) -> Poly {
    &loss_poly(winner) - &loss_poly(loser)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    /// Settled by the (e-shifted) prefix-sum rule.
    PrefixShift,
    /// Settled by the exact sign of the loss difference.
    PolynomialSign,
}

impl EdgeKind {
    pub fn label(self) -> &'static str {
        match self {
            EdgeKind::PrefixShift => "S",
            EdgeKind::PolynomialSign => "P",
        }
    }
}

/// `winner` is at least as good as `loser` on every span of `validity`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominanceEdge {
    pub winner: Signature,
    pub loser: Signature,
    pub kind: EdgeKind,
    pub validity: Vec<(Boundary, Boundary)>,
}

impl DominanceEdge {
    /// Valid on the whole interval.
    pub fn is_global(&self, interval: &Interval) -> bool {
        matches!(
            self.validity.as_slice(),
            [(Boundary::Exact(lo), Boundary::Exact(hi))] if *lo == interval.lo && *hi == interval.hi
        )
    }

    pub fn validity_text(&self) -> String {
        self.validity
            .iter()
            .map(|(lo, hi)| format!("({lo}, {hi})"))
            .collect::<Vec<_>>()
            .join(" ∪ ")
    }
}

fn check_upper_half(interval: &Interval) -> Result<()> {
    if interval.lo < QSqrt2::half() {
        return Err(Error::Interval {
            lo: interval.lo.to_string(),
            hi: interval.hi.to_string(),
            within: "[1/2, 1]",
        });
    }
    Ok(())
}

/// Decide whether `b` dominates `a` somewhere on `interval ⊆ [1/2, 1]`.
pub fn classify_pair(b: &Signature, a: &Signature, interval: &Interval) -> Result<Option<DominanceEdge>> {
    check_upper_half(interval)?;
    check_lengths(b, a)?;
    let whole = || {
        vec![(
            Boundary::Exact(interval.lo.clone()),
            Boundary::Exact(interval.hi.clone()),
        )]
    };
    if b.das() <= a.das() && dominates_shifted(b, a)? {
        return Ok(Some(DominanceEdge {
            winner: b.clone(),
            loser: a.clone(),
            kind: EdgeKind::PrefixShift,
            validity: whole(),
        }));
    }
    let class = sign_on_interval(&loss_difference(b, a), &interval.lo, &interval.hi)?;
    let validity = class.nonpositive_spans(interval);
    Ok((!validity.is_empty()).then(|| DominanceEdge {
        winner: b.clone(),
        loser: a.clone(),
        kind: EdgeKind::PolynomialSign,
        validity,
    }))
}

/// Every dominance edge between distinct signatures on `interval`.
pub fn dominance_graph(
    signatures: &[Signature],
    interval: &Interval,
    exec: &Exec,
) -> Result<Vec<DominanceEdge>> {
    check_upper_half(interval)?;
    let pairs: Vec<(usize, usize)> = (0..signatures.len())
        .flat_map(|i| (0..signatures.len()).map(move |j| (i, j)))
        .filter(|(i, j)| i != j && signatures[*i] != signatures[*j])
        .collect();
    let edges = exec.map(pairs, |(i, j)| {
        classify_pair(&signatures[i], &signatures[j], interval)
    });
    edges.into_iter().filter_map(Result::transpose).collect()
}

/// Signatures that no global edge beats.
pub fn maximal_classes(
    signatures: &[Signature],
    edges: &[DominanceEdge],
    interval: &Interval,
) -> Vec<Signature> {
    let beaten: BTreeSet<&Signature> = edges
        .iter()
        .filter(|e| e.is_global(interval))
        .map(|e| &e.loser)
        .collect();
    signatures
        .iter()
        .filter(|s| !beaten.contains(s))
        .cloned()
        .collect()
}

/// Drop every global edge implied by two other global edges. Edges valid
/// only on part of the interval are kept unchanged.
pub fn transitive_reduction(edges: &[DominanceEdge], interval: &Interval) -> Vec<DominanceEdge> {
    let global: BTreeSet<(&Signature, &Signature)> = edges
        .iter()
        .filter(|e| e.is_global(interval))
        .map(|e| (&e.winner, &e.loser))
        .collect();
    let mut successors: BTreeMap<&Signature, Vec<&Signature>> = BTreeMap::new();
    for (w, l) in &global {
        successors.entry(w).or_default().push(l);
    }
    edges
        .iter()
        .filter(|e| {
            if !e.is_global(interval) {
                return true;
            }
            let via = successors.get(&e.winner).map(Vec::as_slice).unwrap_or(&[]);
            !via.iter()
                .any(|mid| *mid != &e.loser && global.contains(&(*mid, &e.loser)))
        })
        .cloned()
        .collect()
}

/// Graphviz DOT rendering: nodes are signatures, edges point from winner to
/// loser and carry the kind (`S` prefix/shift, `P` polynomial sign) and the
/// validity when it is not the whole interval.
pub fn to_dot(signatures: &[Signature], edges: &[DominanceEdge], interval: &Interval) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph dominance {{");
    let _ = writeln!(out, "  // interval {interval}");
    for s in signatures {
        let _ = writeln!(out, "  \"{s}\";");
    }
    for e in edges {
        let label = if e.is_global(interval) {
            e.kind.label().to_string()
        } else {
            format!("{} {}", e.kind.label(), e.validity_text())
        };
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"{}\"];",
            e.winner, e.loser, label
        );
    }
    out.push_str("}\n");
    out
}

/// A signature the frontier dominates on `(1/2, 1)`, with the signature that
/// was shown to beat it (`None` for frontier members).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub signature: Signature,
    pub via: Option<(Signature, EdgeKind)>,
}

/// Close `frontier` under global dominance on `(1/2, 1)`: a candidate is
/// admitted once some already admitted signature dominates it on the whole
/// interval. Admitted signatures are therefore never better than the
/// pointwise best frontier member.
pub fn frontier_closure(frontier: &[Signature], candidates: &[Signature]) -> Result<Vec<Witness>> {
    let interval = Interval::upper_half();
    let mut admitted: Vec<Witness> = Vec::new();
    for f in frontier {
        if !admitted.iter().any(|w| &w.signature == f) {
            admitted.push(Witness {
                signature: f.clone(),
                via: None,
            });
        }
    }
    let mut pending: Vec<&Signature> = candidates
        .iter()
        .filter(|c| !admitted.iter().any(|w| &w.signature == *c))
        .collect();
    loop {
        let mut progress = false;
        let mut still = Vec::new();
        for c in pending {
            let mut via = None;
            for w in &admitted {
                if let Some(edge) = classify_pair(&w.signature, c, &interval)? {
                    if edge.is_global(&interval) {
                        via = Some((w.signature.clone(), edge.kind));
                        break;
                    }
                }
            }
            match via {
                Some(via) => {
                    admitted.push(Witness {
                        signature: c.clone(),
                        via: Some(via),
                    });
                    progress = true;
                }
                None => still.push(c),
            }
        }
        pending = still;
        if !progress || pending.is_empty() {
            break;
        }
    }
    Ok(admitted)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(s: &str) -> Signature {
        s.parse().unwrap()
    }

    #[test]
    fn prefix_examples() {
        assert!(dominates_prefix(&sig("013210"), &sig("012310")).unwrap());
        assert!(!dominates_prefix(&sig("024001"), &sig("022210")).unwrap());
        assert!(dominates_prefix(&sig("022210"), &sig("022210")).unwrap());
        assert!(matches!(
            dominates_prefix(&sig("024001"), &sig("034001")),
            Err(Error::DasMismatch { .. })
        ));
    }

    #[test]
    fn shifted_examples() {
        assert!(dominates_shifted(&sig("024001"), &sig("034001")).unwrap());
        assert_eq!(
            dominates_shifted(&sig("013210"), &sig("012310")).unwrap(),
            dominates_prefix(&sig("013210"), &sig("012310")).unwrap()
        );
        assert!(dominates_shifted(&sig("034001"), &sig("024001")).is_err());
        assert!(dominates_shifted(&sig("0240"), &sig("024001")).is_err());
    }

    #[test]
    fn arrow_a_is_negative() {
        let d = loss_difference(&sig("022210"), &sig("111310"));
        // −q²(p − q)² = −(p − 1)²(2p − 1)²
        let expected = -&(&(&Poly::from_integers(&[-1, 1]) * &Poly::from_integers(&[-1, 1]))
            * &(&Poly::from_integers(&[-1, 2]) * &Poly::from_integers(&[-1, 2])));
        assert_eq!(d, expected);
        let class = sign_on_interval(&d, &QSqrt2::half(), &QSqrt2::one()).unwrap();
        assert_eq!(class, SignClass::Negative);
    }

    #[test]
    fn arrow_d_changes_sign_at_two_minus_sqrt2() {
        let d = loss_difference(&sig("024001"), &sig("022210"));
        let class = sign_on_interval(&d, &QSqrt2::half(), &QSqrt2::one()).unwrap();
        assert_eq!(
            class,
            SignClass::Mixed {
                roots: vec![Boundary::Exact(QSqrt2::two_minus_sqrt2())],
                signs: vec![Sign::Negative, Sign::Positive],
            }
        );
    }

    #[test]
    fn graph_rejects_lower_half() {
        let err = dominance_graph(&[sig("024001")], &Interval::lower_half(), &Exec::sequential());
        assert!(err.is_err());
    }

    #[test]
    fn single_class_has_no_edges() {
        let edges =
            dominance_graph(&[sig("024001")], &Interval::upper_half(), &Exec::sequential()).unwrap();
        assert!(edges.is_empty());
    }

    #[test]
    fn reduction_drops_implied_edges() {
        let sigs = vec![sig("013210"), sig("012310"), sig("012220")];
        let interval = Interval::upper_half();
        let edges = dominance_graph(&sigs, &interval, &Exec::sequential()).unwrap();
        let reduced = transitive_reduction(&edges, &interval);
        assert!(reduced.len() <= edges.len());
        // 013210 ≻ 012310 ≻ 012220 makes the direct 013210 → 012220 edge redundant
        let has = |es: &[DominanceEdge], w: &str, l: &str| {
            es.iter().any(|e| e.winner == sig(w) && e.loser == sig(l))
        };
        assert!(has(&edges, "013210", "012220"));
        assert!(has(&reduced, "013210", "012310"));
        assert!(has(&reduced, "012310", "012220"));
        assert!(!has(&reduced, "013210", "012220"));
    }

    #[test]
    fn dot_output_mentions_every_node() {
        let sigs = vec![sig("024001"), sig("022210")];
        let interval = Interval::upper_half();
        let edges = dominance_graph(&sigs, &interval, &Exec::sequential()).unwrap();
        let dot = to_dot(&sigs, &edges, &interval);
        assert!(dot.starts_with("digraph dominance {"));
        assert!(dot.contains("\"024001\" -> \"022210\""));
        assert!(dot.contains("2-sqrt2"));
    }

    #[test]
    fn closure_of_empty_frontier_is_empty() {
        let w = frontier_closure(&[], &[sig("024001"), sig("022210")]).unwrap();
        assert!(w.is_empty());
    }
}
