//! Exact sign of an integer polynomial on an interval.
//!
//! Roots that lie in Q(√2) (all rational roots, and irrational ones whose
//! minimal polynomial is an integer quadratic with discriminant `2m²`) are
//! found exactly and reported as [`Boundary::Exact`]. Every other real root is
//! isolated by Sturm-sequence bisection with endpoints in Q(√2) and reported
//! as [`Boundary::Isolated`]. No floating point is involved.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::QSqrt2;
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl From<Ordering> for Sign {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }
}

/// A real point: exact when it lies in Q(√2), otherwise an open isolating
/// interval containing exactly one root of the analysed polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Boundary {
    Exact(QSqrt2),
    Isolated { lo: QSqrt2, hi: QSqrt2 },
}

impl Boundary {
    pub fn lower(&self) -> &QSqrt2 {
        match self {
            Boundary::Exact(x) => x,
            Boundary::Isolated { lo, .. } => lo,
        }
    }

    pub fn upper(&self) -> &QSqrt2 {
        match self {
            Boundary::Exact(x) => x,
            Boundary::Isolated { hi, .. } => hi,
        }
    }

    pub fn exact(&self) -> Option<&QSqrt2> {
        match self {
            Boundary::Exact(x) => Some(x),
            Boundary::Isolated { .. } => None,
        }
    }

    pub fn approx(&self) -> f64 {
        match self {
            Boundary::Exact(x) => x.to_f64(),
            Boundary::Isolated { lo, hi } => lo.midpoint(hi).to_f64(),
        }
    }

    fn mirrored(&self) -> Self {
        match self {
            Boundary::Exact(x) => Boundary::Exact(x.complement()),
            Boundary::Isolated { lo, hi } => Boundary::Isolated {
                lo: hi.complement(),
                hi: lo.complement(),
            },
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::Exact(x) => write!(f, "{x}"),
            Boundary::Isolated { lo, hi } => {
                write!(f, "root in ({}, {})", lo.to_decimal(8), hi.to_decimal(8))
            }
        }
    }
}

/// Open interval `(lo, hi)` with exact endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: QSqrt2,
    pub hi: QSqrt2,
}

impl Interval {
    pub fn new(lo: QSqrt2, hi: QSqrt2) -> Result<Self> {
        if lo >= hi || lo < QSqrt2::zero() || hi > QSqrt2::one() {
            return Err(Error::Interval {
                lo: lo.to_string(),
                hi: hi.to_string(),
                within: "[0, 1]",
            });
        }
        Ok(Self { lo, hi })
    }

    /// `(1/2, 1)`: color 0 is the likelier color.
    pub fn upper_half() -> Self {
        Self {
            lo: QSqrt2::half(),
            hi: QSqrt2::one(),
        }
    }

    pub fn lower_half() -> Self {
        Self {
            lo: QSqrt2::zero(),
            hi: QSqrt2::half(),
        }
    }

    pub fn contains(&self, x: &QSqrt2) -> bool {
        &self.lo < x && x < &self.hi
    }

    pub fn mirrored(&self) -> Self {
        Self {
            lo: self.hi.complement(),
            hi: self.lo.complement(),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// Sign classification of a polynomial on an open interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SignClass {
    Negative,
    Zero,
    Positive,
    /// Distinct interior roots in increasing order, and the (nonzero) sign on
    /// each of the `roots.len() + 1` open cells between them.
    Mixed { roots: Vec<Boundary>, signs: Vec<Sign> },
}

impl SignClass {
    /// `≤ 0` everywhere on the interval.
    pub fn is_nonpositive(&self) -> bool {
        match self {
            SignClass::Negative | SignClass::Zero => true,
            SignClass::Positive => false,
            SignClass::Mixed { signs, .. } => signs.iter().all(|s| *s == Sign::Negative),
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        match self {
            SignClass::Positive | SignClass::Zero => true,
            SignClass::Negative => false,
            SignClass::Mixed { signs, .. } => signs.iter().all(|s| *s == Sign::Positive),
        }
    }

    /// Maximal sub-intervals where the polynomial is `≤ 0`, as
    /// `(left, right)` boundary pairs. Cells separated only by a root at
    /// which the sign does not change are merged.
    pub fn nonpositive_spans(&self, interval: &Interval) -> Vec<(Boundary, Boundary)> {
        let whole = || {
            vec![(
                Boundary::Exact(interval.lo.clone()),
                Boundary::Exact(interval.hi.clone()),
            )]
        };
        match self {
            SignClass::Negative | SignClass::Zero => whole(),
            SignClass::Positive => Vec::new(),
            SignClass::Mixed { roots, signs } => {
                let edge = |k: usize| -> Boundary {
                    if k == 0 {
                        Boundary::Exact(interval.lo.clone())
                    } else if k == signs.len() {
                        Boundary::Exact(interval.hi.clone())
                    } else {
                        roots[k - 1].clone()
                    }
                };
                let mut spans = Vec::new();
                let mut k = 0;
                while k < signs.len() {
                    if signs[k] != Sign::Negative {
                        k += 1;
                        continue;
                    }
                    let start = k;
                    while k + 1 < signs.len() && signs[k + 1] == Sign::Negative {
                        k += 1;
                    }
                    spans.push((edge(start), edge(k + 1)));
                    k += 1;
                }
                spans
            }
        }
    }
}

fn sturm_chain(f: &Poly) -> Vec<Poly> {
    let mut chain = vec![f.clone(), f.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let (_, rem) = chain[n - 2].div_rem(&chain[n - 1]);
        if rem.is_zero() {
            break;
        }
        chain.push(-&rem);
    }
    chain
}

fn sign_variations(chain: &[Poly], x: &QSqrt2) -> usize {
    let signs: Vec<Ordering> = chain
        .iter()
        .map(|p| p.eval(x).signum())
        .filter(|s| *s != Ordering::Equal)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Distinct roots in `(a, b)`; neither endpoint may be a root.
fn count_roots(chain: &[Poly], a: &QSqrt2, b: &QSqrt2) -> usize {
    sign_variations(chain, a) - sign_variations(chain, b)
}

const DIVISOR_LIMIT: u64 = 1_000_000_000_000;

fn positive_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > DIVISOR_LIMIT {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small.into_iter().map(BigInt::from).collect())
}

fn signed(divisors: &[BigInt]) -> impl Iterator<Item = BigInt> + '_ {
    divisors.iter().flat_map(|d| [d.clone(), -d])
}

/// Roots of `c2 x² + c1 x + c0` when they lie in Q(√2) and are irrational.
fn quadratic_surd_roots(c2: &BigInt, c1: &BigInt, c0: &BigInt) -> Option<[QSqrt2; 2]> {
    let disc = c1 * c1 - BigInt::from(4) * c2 * c0;
    if !disc.is_positive() || disc.is_odd() {
        return None;
    }
    let half: BigInt = &disc / 2;
    let m = half.sqrt();
    if &m * &m != half {
        return None;
    }
    let denom = BigInt::from(2) * c2;
    let a = BigRational::new(-c1.clone(), denom.clone());
    let b = BigRational::new(m, denom);
    Some([
        QSqrt2::new(a.clone(), -b.clone()),
        QSqrt2::new(a, b),
    ])
}

/// Minimal polynomial over Q of a point of Q(√2).
fn minimal_poly(x: &QSqrt2) -> Poly {
    match x.as_rational() {
        Some(r) => Poly::linear_root(r),
        None => {
            let a = x.rational_part();
            let b = x.surd_part();
            let two = BigRational::from_integer(2.into());
            Poly::new(vec![
                a * a - &two * b * b,
                -(&two * a),
                BigRational::one(),
            ])
        }
    }
}

/// Split a square-free polynomial into its roots in Q(√2) and the remaining
/// factor (which has no roots in Q(√2), up to the divisor-size limit).
fn split_exact_roots(sf: &Poly) -> (Vec<QSqrt2>, Poly) {
    let mut roots = Vec::new();
    let mut rest = sf.clone();

    // Rational roots u/v with u | a0, v | an.
    if rest.coeffs().first().is_some_and(Zero::is_zero) {
        roots.push(QSqrt2::zero());
        rest = rest.div_rem(&Poly::from_integers(&[0, 1])).0;
    }
    if rest.degree().unwrap_or(0) >= 1 {
        let ints = rest.primitive_integers();
        let (a0, an) = (ints[0].clone(), ints.last().unwrap().clone());
        if let (Some(us), Some(vs)) = (positive_divisors(&a0), positive_divisors(&an)) {
            let mut candidates: Vec<BigRational> = Vec::new();
            for u in signed(&us) {
                for v in &vs {
                    candidates.push(BigRational::new(u.clone(), v.clone()));
                }
            }
            candidates.sort();
            candidates.dedup();
            for r in candidates {
                if rest.degree().unwrap_or(0) == 0 {
                    break;
                }
                if rest.eval_rational(&r).is_zero() {
                    rest = rest.div_rem(&Poly::linear_root(&r)).0;
                    roots.push(QSqrt2::from_rational(r));
                }
            }
        }
    }

    // Integer quadratic factors with discriminant 2m², found by matching
    // g(0) | f(0), lead(g) | lead(f) and g(1) | f(1).
    'search: loop {
        let deg = rest.degree().unwrap_or(0);
        if deg < 2 {
            break;
        }
        let ints = rest.primitive_integers();
        if deg == 2 {
            if let Some(pair) = quadratic_surd_roots(&ints[2], &ints[1], &ints[0]) {
                roots.extend(pair);
                rest = Poly::constant(BigRational::one());
            }
            break;
        }
        let f1: BigInt = ints.iter().sum();
        let (Some(leads), Some(consts), Some(at_one)) = (
            positive_divisors(ints.last().unwrap()),
            positive_divisors(&ints[0]),
            positive_divisors(&f1),
        ) else {
            break;
        };
        for c2 in &leads {
            for c0 in signed(&consts) {
                for d in signed(&at_one) {
                    let c1 = &d - c2 - &c0;
                    let Some(pair) = quadratic_surd_roots(c2, &c1, &c0) else {
                        continue;
                    };
                    let g = Poly::from_big_integers(vec![c0.clone(), c1, c2.clone()]);
                    let (q, r) = rest.div_rem(&g);
                    if r.is_zero() {
                        roots.extend(pair);
                        rest = q;
                        continue 'search;
                    }
                }
            }
        }
        break;
    }
    roots.sort();
    (roots, rest)
}

fn isolate(chain: &[Poly], rest: &Poly, a: QSqrt2, b: QSqrt2, out: &mut Vec<(QSqrt2, QSqrt2)>) {
    match count_roots(chain, &a, &b) {
        0 => {}
        1 => out.push((a, b)),
        _ => {
            let mut m = a.midpoint(&b);
            if rest.eval(&m).is_zero() {
                // Only reachable when the exact-root split gave up on size.
                m = a.midpoint(&m);
            }
            isolate(chain, rest, a, m.clone(), out);
            isolate(chain, rest, m, b, out);
        }
    }
}

/// Shrink `(a, b)` (one root of `rest` inside) until it excludes every point
/// in `avoid` and is narrower than `width`.
fn refine(
    chain: &[Poly],
    mut a: QSqrt2,
    mut b: QSqrt2,
    avoid: &[QSqrt2],
    width: &QSqrt2,
) -> (QSqrt2, QSqrt2) {
    loop {
        let narrow = &(&b - &a) < width;
        let clear = avoid.iter().all(|x| x < &a || x > &b);
        if narrow && clear {
            return (a, b);
        }
        let m = a.midpoint(&b);
        if count_roots(chain, &a, &m) == 1 {
            b = m;
        } else {
            a = m;
        }
    }
}

/// Exact sign of `poly` on the open interval `(lo, hi) ⊆ [0, 1]`.
pub fn sign_on_interval(poly: &Poly, lo: &QSqrt2, hi: &QSqrt2) -> Result<SignClass> {
    let interval = Interval::new(lo.clone(), hi.clone())?;
    if poly.is_zero() {
        return Ok(SignClass::Zero);
    }
    let sf = poly.squarefree();
    let (exact, mut rest) = split_exact_roots(&sf);
    let mut exact = exact;
    for end in [&interval.lo, &interval.hi] {
        if rest.degree().unwrap_or(0) > 0 && rest.eval(end).is_zero() {
            rest = rest.div_rem(&minimal_poly(end)).0;
            exact.push(end.clone());
        }
    }
    let exact_inside: Vec<QSqrt2> = exact
        .iter()
        .filter(|x| interval.contains(x))
        .cloned()
        .collect();

    let mut roots: Vec<Boundary> = exact_inside
        .iter()
        .cloned()
        .map(Boundary::Exact)
        .collect();
    if rest.degree().unwrap_or(0) > 0 {
        let chain = sturm_chain(&rest);
        let mut isolated = Vec::new();
        isolate(&chain, &rest, interval.lo.clone(), interval.hi.clone(), &mut isolated);
        let width = QSqrt2::ratio(1, 1 << 20);
        for (a, b) in isolated {
            let (a, b) = refine(&chain, a, b, &exact_inside, &width);
            roots.push(Boundary::Isolated { lo: a, hi: b });
        }
    }
    roots.sort_by(|x, y| x.lower().cmp(y.lower()));

    let mut signs = Vec::with_capacity(roots.len() + 1);
    for k in 0..=roots.len() {
        let left = if k == 0 { &interval.lo } else { roots[k - 1].upper() };
        let right = if k == roots.len() { &interval.hi } else { roots[k].lower() };
        let sample = left.midpoint(right);
        let sign = Sign::from(poly.eval(&sample).signum());
        debug_assert_ne!(sign, Sign::Zero, "sample point landed on a root");
        signs.push(sign);
    }
    Ok(if roots.is_empty() {
        match signs[0] {
            Sign::Negative => SignClass::Negative,
            Sign::Positive => SignClass::Positive,
            Sign::Zero => SignClass::Zero,
        }
    } else {
        SignClass::Mixed { roots, signs }
    })
}

/// Same classification, computed on the color-swapped side: `poly` is
/// rewritten with `p ↦ 1 − p` and analysed on the mirrored interval, and the
/// result is mapped back. Intended for intervals inside `(0, 1/2)`.
pub fn sign_on_mirrored_interval(poly: &Poly, lo: &QSqrt2, hi: &QSqrt2) -> Result<SignClass> {
    let interval = Interval::new(lo.clone(), hi.clone())?.mirrored();
    let class = sign_on_interval(&poly.mirrored(), &interval.lo, &interval.hi)?;
    Ok(match class {
        SignClass::Mixed { roots, signs } => SignClass::Mixed {
            roots: roots.iter().rev().map(Boundary::mirrored).collect(),
            signs: signs.into_iter().rev().collect(),
        },
        other => other,
    })
}
