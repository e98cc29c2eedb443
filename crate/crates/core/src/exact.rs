//! Exact arithmetic in the quadratic field Q(√2).
//!
//! Every probability the toolkit handles is either rational or one of the
//! breakpoints `√2 − 1` and `2 − √2` of the five-player closed form, so all
//! values live in `{a + b√2 : a, b ∈ Q}`. Comparisons are decided exactly from
//! the signs of `a`, `b` and of `a² − 2b²`; floating point is used only when
//! formatting decimals for display.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An element `rational + surd·√2` of Q(√2).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSqrt2 {
    rational: BigRational,
    surd: BigRational,
}

impl QSqrt2 {
    pub fn new(rational: BigRational, surd: BigRational) -> Self {
        Self { rational, surd }
    }

    pub fn from_rational(rational: BigRational) -> Self {
        Self {
            rational,
            surd: BigRational::zero(),
        }
    }

    pub fn ratio(numer: i64, denom: i64) -> Self {
        Self::from_rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn integer(value: i64) -> Self {
        Self::ratio(value, 1)
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    pub fn half() -> Self {
        Self::ratio(1, 2)
    }

    /// `√2 − 1`, the left breakpoint of the closed form.
    pub fn sqrt2_minus_one() -> Self {
        Self::new(BigRational::from_integer((-1).into()), BigRational::one())
    }

    /// `2 − √2`, the right breakpoint of the closed form.
    pub fn two_minus_sqrt2() -> Self {
        Self::new(BigRational::from_integer(2.into()), -BigRational::one())
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.surd
    }

    pub fn is_rational(&self) -> bool {
        self.surd.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.rational)
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.surd.is_zero()
    }

    /// Exact sign of the value.
    pub fn signum(&self) -> Ordering {
        let a = self.rational.cmp(&BigRational::zero());
        let b = self.surd.cmp(&BigRational::zero());
        match (a, b) {
            (a, Ordering::Equal) => a,
            (Ordering::Equal, b) => b,
            (a, b) if a == b => a,
            (a, b) => {
                // Opposite signs: the larger magnitude wins. a² = 2b² has no
                // nonzero rational solutions.
                let lhs = &self.rational * &self.rational;
                let rhs = &self.surd * &self.surd * BigRational::from_integer(2.into());
                if lhs > rhs {
                    a
                } else {
                    b
                }
            }
        }
    }

    /// Algebraic conjugate `a − b√2`.
    pub fn conjugate(&self) -> Self {
        Self::new(self.rational.clone(), -self.surd.clone())
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self::new(&self.rational * factor, &self.surd * factor)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn midpoint(&self, other: &Self) -> Self {
        (self + other).scale(&BigRational::new(1.into(), 2.into()))
    }

    /// `1 − self`.
    pub fn complement(&self) -> Self {
        &Self::one() - self
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.rational.to_f64().unwrap_or(f64::NAN);
        let b = self.surd.to_f64().unwrap_or(f64::NAN);
        a + b * std::f64::consts::SQRT_2
    }

    /// Decimal expansion rounded to `digits` places (half away from zero),
    /// with trailing zeros removed.
    pub fn to_decimal(&self, digits: u32) -> String {
        let value = if self.is_rational() {
            self.rational.clone()
        } else {
            // Approximate b√2 with 20 guard digits; display only.
            let guard = BigInt::from(10u32).pow(digits + 20);
            let b = &self.surd;
            let radicand = BigInt::from(2) * b.numer() * b.numer() * &guard * &guard;
            let root = radicand.sqrt();
            let root = if b.is_negative() { -root } else { root };
            let approx = BigRational::new(root, b.denom() * &guard);
            &self.rational + approx
        };
        format_rational(&value, digits)
    }
}

fn format_rational(value: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = value * BigRational::from_integer(scale.clone());
    let negative = scaled.is_negative();
    let magnitude = scaled.abs();
    let (quot, rem) = magnitude.numer().div_rem(magnitude.denom());
    let rounded = if rem * 2 >= *magnitude.denom() {
        quot + 1
    } else {
        quot
    };
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let mut frac = format!("{:0>width$}", frac_part, width = digits as usize);
    while frac.ends_with('0') {
        frac.pop();
    }
    let sign = if negative && !rounded.is_zero() { "-" } else { "" };
    if frac.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    }
}

impl PartialOrd for QSqrt2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QSqrt2 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl From<BigRational> for QSqrt2 {
    fn from(value: BigRational) -> Self {
        Self::from_rational(value)
    }
}

impl From<i64> for QSqrt2 {
    fn from(value: i64) -> Self {
        Self::integer(value)
    }
}

impl Add for &QSqrt2 {
    type Output = QSqrt2;
    fn add(self, rhs: &QSqrt2) -> QSqrt2 {
        QSqrt2::new(&self.rational + &rhs.rational, &self.surd + &rhs.surd)
    }
}

impl Sub for &QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, rhs: &QSqrt2) -> QSqrt2 {
        QSqrt2::new(&self.rational - &rhs.rational, &self.surd - &rhs.surd)
    }
}

impl Mul for &QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, rhs: &QSqrt2) -> QSqrt2 {
        let two = BigRational::from_integer(2.into());
        QSqrt2::new(
            &self.rational * &rhs.rational + &self.surd * &rhs.surd * two,
            &self.rational * &rhs.surd + &self.surd * &rhs.rational,
        )
    }
}

impl Neg for &QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2::new(-self.rational.clone(), -self.surd.clone())
    }
}

macro_rules! forward_owned {
    ($($trait:ident $method:ident),*) => {$(
        impl $trait for QSqrt2 {
            type Output = QSqrt2;
            fn $method(self, rhs: QSqrt2) -> QSqrt2 {
                (&self).$method(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        -&self
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// ASCII form compatible with [`FromStr`]: `11/20`, `2-sqrt2`, `-1+sqrt2`,
/// `1/2-3/4*sqrt2`.
impl fmt::Display for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.surd.is_zero() {
            return write_rational(f, &self.rational);
        }
        let has_rational = !self.rational.is_zero();
        if has_rational {
            write_rational(f, &self.rational)?;
        }
        let magnitude = self.surd.abs();
        if self.surd.is_negative() {
            f.write_str("-")?;
        } else if has_rational {
            f.write_str("+")?;
        }
        if !magnitude.is_one() {
            write_rational(f, &magnitude)?;
            f.write_str("*")?;
        }
        f.write_str("sqrt2")
    }
}

fn parse_rational(token: &str, input: &str) -> Result<BigRational> {
    let err = |reason: &str| Error::Parse {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    if token.contains('.') || token.contains('e') || token.contains('E') {
        return Err(err(
            "decimal input is not accepted; write an exact fraction such as 11/20",
        ));
    }
    let (numer, denom) = match token.split_once('/') {
        Some((n, d)) => (n, d),
        None => (token, "1"),
    };
    let numer: BigInt = numer
        .trim()
        .parse()
        .map_err(|_| err("expected an integer or a fraction"))?;
    let denom: BigInt = denom
        .trim()
        .parse()
        .map_err(|_| err("expected an integer or a fraction"))?;
    if denom.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(BigRational::new(numer, denom))
}

impl FromStr for QSqrt2 {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let cleaned: String = input
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect::<String>()
            .replace('√', "sqrt");
        if cleaned.is_empty() {
            return Err(Error::Parse {
                input: input.to_string(),
                reason: "empty value".into(),
            });
        }
        // Split into signed terms at every '+'/'-' that is not leading.
        let mut terms: Vec<String> = Vec::new();
        let mut current = String::new();
        for (i, c) in cleaned.chars().enumerate() {
            if (c == '+' || c == '-') && i > 0 && !current.is_empty() {
                terms.push(std::mem::take(&mut current));
            }
            current.push(c);
        }
        terms.push(current);

        let mut rational = BigRational::zero();
        let mut surd = BigRational::zero();
        for term in terms {
            let (negative, body) = match term.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, term.strip_prefix('+').unwrap_or(&term)),
            };
            let sign = if negative {
                -BigRational::one()
            } else {
                BigRational::one()
            };
            if let Some(coeff) = body.strip_suffix("sqrt2") {
                let coeff = coeff.strip_suffix('*').unwrap_or(coeff);
                let value = if coeff.is_empty() {
                    BigRational::one()
                } else {
                    parse_rational(coeff, input)?
                };
                surd += sign * value;
            } else {
                rational += sign * parse_rational(body, input)?;
            }
        }
        Ok(Self::new(rational, surd))
    }
}
