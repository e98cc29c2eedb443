//! Dense univariate polynomials in `p` with rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exact::QSqrt2;

/// Coefficients in ascending order of degree; never has trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// `x − root` for rational `root`.
    pub fn linear_root(root: &BigRational) -> Self {
        Self::new(vec![-root.clone(), BigRational::one()])
    }

    /// Expand `Σ terms[i] · p^i · (1 − p)^(N−i)` with `N = terms.len() − 1`.
    pub fn from_pq_terms(terms: &[u64]) -> Self {
        let n = terms.len() as u64 - 1;
        let mut out = vec![BigInt::zero(); terms.len()];
        for (i, &c) in terms.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let i = i as u64;
            // p^i (1−p)^(n−i) = Σ_j C(n−i, j) (−1)^j p^(i+j)
            for j in 0..=(n - i) {
                let mut term = binomial(n - i, j) * c;
                if j % 2 == 1 {
                    term = -term;
                }
                out[(i + j) as usize] += term;
            }
        }
        Self::new(out.into_iter().map(BigRational::from_integer).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &QSqrt2) -> QSqrt2 {
        self.coeffs.iter().rev().fold(QSqrt2::zero(), |acc, c| {
            &(&acc * x) + &QSqrt2::from_rational(c.clone())
        })
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(i.into()))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let d_deg = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d_deg {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - d_deg];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + d_deg] / lead;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(d_deg);
        (Self::new(quot), Self::new(rem))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lead) => self.scale(&lead.recip()),
            None => Self::zero(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors (monic).
    pub fn squarefree(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Substitute `p ↦ 1 − p`.
    pub fn mirrored(&self) -> Self {
        let one_minus = Self::from_integers(&[1, -1]);
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| {
            &(&acc * &one_minus) + &Self::constant(c.clone())
        })
    }

    /// Scale to coprime integer coefficients with a positive leading term.
    pub fn primitive_integers(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().unwrap().is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        ints.into_iter().map(|c| c / &g * &sign).collect()
    }

    pub fn from_big_integers(coeffs: Vec<BigInt>) -> Self {
        Self::new(coeffs.into_iter().map(BigRational::from_integer).collect())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigRational::zero();
        Poly::new(
            (0..len)
                .map(|i| {
                    self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero)
                })
                .collect(),
        )
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

/// Descending powers of `p`, e.g. `p^5 - 4p^4 + 4p^2 - 2p + 1`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            match (first, negative) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let coeff = if mag.is_integer() {
                mag.numer().to_string()
            } else {
                format!("({}/{})", mag.numer(), mag.denom())
            };
            match i {
                0 => f.write_str(&coeff)?,
                _ => {
                    if !mag.is_one() {
                        f.write_str(&coeff)?;
                    }
                    f.write_str("p")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn expands_pq_terms() {
        // 1 − (2pq^4 + 4p^2q^3 + p^5) = 1 − 2p + 4p^2 − 4p^4 + p^5
        let bad = Poly::from_pq_terms(&[0, 2, 4, 0, 0, 1]);
        let win = &Poly::from_integers(&[1]) - &bad;
        assert_eq!(win, Poly::from_integers(&[1, -2, 4, 0, -4, 1]));
        // q^N + ... + p^N over all 2^N configurations sums to 1
        let all = Poly::from_pq_terms(&[1, 5, 10, 10, 5, 1]);
        assert_eq!(all, Poly::from_integers(&[1]));
    }

    #[test]
    fn division_and_gcd() {
        // (p − 1)^2 (2p − 1)
        let f = &(&Poly::from_integers(&[-1, 1]) * &Poly::from_integers(&[-1, 1]))
            * &Poly::from_integers(&[-1, 2]);
        let (q, rem) = f.div_rem(&Poly::from_integers(&[-1, 1]));
        assert!(rem.is_zero());
        assert_eq!(q.degree(), Some(2));
        assert_eq!(f.gcd(&f.derivative()), Poly::from_integers(&[-1, 1]));
        assert_eq!(f.squarefree(), Poly::new(vec![r(1, 2), r(-3, 2), r(1, 1)]));
    }

    #[test]
    fn display() {
        let p = Poly::from_integers(&[1, -2, 4, 0, -4, 1]);
        assert_eq!(p.to_string(), "p^5 - 4p^4 + 4p^2 - 2p + 1");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(Poly::new(vec![r(-1, 2)]).to_string(), "-(1/2)");
    }

    #[test]
    fn primitive_form() {
        let p = Poly::new(vec![r(1, 2), r(-3, 2), r(-1, 1)]);
        let ints: Vec<i64> = p
            .primitive_integers()
            .iter()
            .map(|c| c.try_into().unwrap())
            .collect();
        assert_eq!(ints, vec![-1, 3, 2]);
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        proptest::collection::vec(-9i64..10, 0..6).prop_map(|c| Poly::from_integers(&c))
    }

    proptest! {
        #[test]
        fn div_rem_reconstructs(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            let (q, rem) = a.div_rem(&b);
            prop_assert_eq!(&(&q * &b) + &rem, a);
            prop_assert!(rem.degree().is_none_or(|d| d < b.degree().unwrap()));
        }

        #[test]
        fn mirror_is_involution(a in arb_poly(), x in -20i64..20) {
            prop_assert_eq!(a.mirrored().mirrored(), a.clone());
            let x = r(x, 7);
            prop_assert_eq!(a.mirrored().eval_rational(&x), a.eval_rational(&(r(1, 1) - &x)));
        }

        #[test]
        fn eval_agrees_with_rational_eval(a in arb_poly(), x in -20i64..20) {
            let x = r(x, 3);
            prop_assert_eq!(a.eval(&QSqrt2::from_rational(x.clone())), QSqrt2::from_rational(a.eval_rational(&x)));
        }
    }
}
