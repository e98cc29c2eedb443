//! Losing/winning probabilities of adequate sets, the five-player closed
//! form `Ψ(5, p)`, and selection of the optimal minimum-size sets.

use std::collections::BTreeMap;

use crate::adequacy::{self, SearchLimits};
use crate::error::{Error, Result};
use crate::exact::QSqrt2;
use crate::exec::Exec;
use crate::model::{AdequateSet, BadPolynomial, ColorDistribution, Signature};
use crate::poly::Poly;

pub fn bad_polynomial(set: &AdequateSet) -> BadPolynomial {
    BadPolynomial::from_signature(&set.signature())
}

/// Probability that the strategy built from `set` wins: `1 − loss(set)`.
pub fn win_probability(set: &AdequateSet, dist: &ColorDistribution) -> QSqrt2 {
    &QSqrt2::one() - &bad_polynomial(set).evaluate(dist)
}

/// One piece of the closed form: on `[lo, hi]` the maximal winning
/// probability is `poly(p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiBranch {
    pub lo: QSqrt2,
    pub hi: QSqrt2,
    pub poly: Poly,
}

/// The four branches of `Ψ(5, p)`, left to right.
pub fn psi_branches() -> Vec<PsiBranch> {
    let zero = QSqrt2::zero();
    let left = QSqrt2::sqrt2_minus_one();
    let half = QSqrt2::half();
    let right = QSqrt2::two_minus_sqrt2();
    let one = QSqrt2::one();
    vec![
        PsiBranch {
            lo: zero,
            hi: left.clone(),
            poly: Poly::from_integers(&[1, -1, 2, -2, 0, 1]),
        },
        PsiBranch {
            lo: left,
            hi: half.clone(),
            poly: Poly::from_integers(&[0, 5, -10, 6, 1, -1]),
        },
        PsiBranch {
            lo: half,
            hi: right.clone(),
            poly: Poly::from_integers(&[1, -2, 4, 0, -4, 1]),
        },
        PsiBranch {
            lo: right,
            hi: one,
            poly: Poly::from_integers(&[1, -2, 6, -8, 5, -1]),
        },
    ]
}

/// Maximal five-player winning probability at `p`. At a breakpoint every
/// branch touching it is evaluated and they must agree exactly.
pub fn psi_closed_form(p: &QSqrt2) -> Result<QSqrt2> {
    if p < &QSqrt2::zero() || p > &QSqrt2::one() {
        return Err(Error::ProbabilityRange(p.to_string()));
    }
    let values: Vec<QSqrt2> = psi_branches()
        .iter()
        .filter(|b| &b.lo <= p && p <= &b.hi)
        .map(|b| b.poly.eval(p))
        .collect();
    let first = values[0].clone();
    if values.iter().any(|v| v != &first) {
        return Err(Error::BreakpointMismatch(p.to_string()));
    }
    Ok(first)
}

/// `(p, Ψ(5, p))` at `steps + 1` evenly spaced rational points of `[0, 1]`.
pub fn psi_curve(steps: u32) -> Result<Vec<(QSqrt2, QSqrt2)>> {
    (0..=steps)
        .map(|k| {
            let p = QSqrt2::ratio(k as i64, steps.max(1) as i64);
            psi_closed_form(&p).map(|v| (p, v))
        })
        .collect()
}

/// Sets of `sets` with the smallest losing probability at `dist`; ties are
/// decided exactly. Input order is kept.
pub fn optimal_among(sets: &[AdequateSet], dist: &ColorDistribution, exec: &Exec) -> Vec<AdequateSet> {
    // Losing probability only depends on the signature.
    let classes = classify_by_signature(sets);
    let signatures: Vec<Signature> = classes.keys().cloned().collect();
    let losses = exec.map(signatures.clone(), |s| {
        BadPolynomial::from_signature(&s).evaluate(dist)
    });
    let Some(best) = losses.iter().min() else {
        return Vec::new();
    };
    let winners: Vec<&Signature> = signatures
        .iter()
        .zip(&losses)
        .filter(|(_, l)| *l == best)
        .map(|(s, _)| s)
        .collect();
    sets.iter()
        .filter(|s| winners.contains(&&s.signature()))
        .cloned()
        .collect()
}

/// Optimal five-player adequate sets at `dist`: the minimum-size sets with
/// the smallest losing probability. Sizes above the minimum never do better
/// (see [`adequacy::certify`]).
pub fn optimal_sets(
    n_players: usize,
    dist: &ColorDistribution,
    limits: &SearchLimits,
    exec: &Exec,
) -> Result<Vec<AdequateSet>> {
    if n_players != 5 {
        return Err(Error::PlayerCount(n_players, "5"));
    }
    let das = adequacy::covering_number(n_players, limits)?.value;
    let sets = adequacy::enumerate_adequate_sets(n_players, das, limits, exec)?;
    Ok(optimal_among(&sets, dist, exec))
}

pub fn classify_by_signature(sets: &[AdequateSet]) -> BTreeMap<Signature, Vec<AdequateSet>> {
    let mut classes: BTreeMap<Signature, Vec<AdequateSet>> = BTreeMap::new();
    for s in sets {
        classes.entry(s.signature()).or_default().push(s.clone());
    }
    classes
}

/// Best symmetric winning probability `1 − K(N,1) / 2^N`.
pub fn symmetric_psi(n_players: usize, limits: &SearchLimits) -> Result<QSqrt2> {
    let k = adequacy::covering_number(n_players, limits)?.value;
    Ok(&QSqrt2::one() - &QSqrt2::ratio(k as i64, 1i64 << n_players))
}

/// One row of the class table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassRow {
    pub signature: Signature,
    pub polynomial: BadPolynomial,
    pub size: usize,
    /// Winning probability at the requested distribution, if any.
    pub win_probability: Option<QSqrt2>,
}

/// Rows ordered by losing probability at `dist` (best first), or by
/// signature when no distribution is given.
pub fn class_table(sets: &[AdequateSet], dist: Option<&ColorDistribution>) -> Vec<ClassRow> {
    let mut rows: Vec<ClassRow> = classify_by_signature(sets)
        .into_iter()
        .map(|(signature, members)| {
            let polynomial = BadPolynomial::from_signature(&signature);
            let win_probability =
                dist.map(|d| &QSqrt2::one() - &polynomial.evaluate(d));
            ClassRow {
                signature,
                polynomial,
                size: members.len(),
                win_probability,
            }
        })
        .collect();
    if dist.is_some() {
        rows.sort_by(|a, b| {
            b.win_probability
                .cmp(&a.win_probability)
                .then_with(|| a.signature.cmp(&b.signature))
        });
    }
    rows
}

/// CSV with columns `signature,polynomial,class_size,probability,decimal`.
pub fn class_table_csv(rows: &[ClassRow]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Parse {
        input: "class table".into(),
        reason: e.to_string(),
    };
    writer
        .write_record(["signature", "polynomial", "class_size", "probability", "decimal"])
        .map_err(io)?;
    for row in rows {
        let (exact, decimal) = match &row.win_probability {
            Some(p) => (p.to_string(), p.to_decimal(10)),
            None => (String::new(), String::new()),
        };
        writer
            .write_record([
                row.signature.to_string(),
                row.polynomial.to_string(),
                row.size.to_string(),
                exact,
                decimal,
            ])
            .map_err(io)?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::Parse {
        input: "class table".into(),
        reason: e.to_string(),
    })?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
