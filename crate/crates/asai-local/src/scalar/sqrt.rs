//! Arithmetic in `Q(sqrt(l))` for a fixed prime `l`.
//!
//! Elements are stored as `rat + surd * sqrt(l)`; products are renormalised
//! using `sqrt(l)^2 = l`. Since `l` is prime, `sqrt(l)` is irrational and the
//! representation is unique, so equality is coefficientwise.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub};

use super::{int, rat};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SqrtScalar {
    pub rat_part: BigRational,
    pub surd_part: BigRational,
    pub prime: u32,
}

impl SqrtScalar {
    pub fn new(prime: u32, rat_part: BigRational, surd_part: BigRational) -> Self {
        Self { rat_part, surd_part, prime }
    }

    pub fn from_rational(prime: u32, q: BigRational) -> Self {
        Self::new(prime, q, BigRational::zero())
    }

    pub fn from_int(prime: u32, n: i64) -> Self {
        Self::from_rational(prime, int(n))
    }

    pub fn from_frac(prime: u32, n: i64, d: i64) -> Self {
        Self::from_rational(prime, rat(n, d))
    }

    /// `sqrt(l)` itself.
    pub fn sqrt_ell(prime: u32) -> Self {
        Self::new(prime, BigRational::zero(), BigRational::one())
    }

    pub fn zero(prime: u32) -> Self {
        Self::from_rational(prime, BigRational::zero())
    }

    pub fn one(prime: u32) -> Self {
        Self::from_rational(prime, BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.rat_part.is_zero() && self.surd_part.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.surd_part.is_zero()
    }

    /// The rational part, failing when a genuine surd is present.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.rat_part)
    }

    /// `l^(k/2)` for an integer `k` of either sign: even exponents are
    /// rational, odd ones carry one factor of `sqrt(l)`.
    pub fn ell_half_power(prime: u32, half_exponent: i64) -> Self {
        let ell = int(prime as i64);
        let whole = half_exponent.div_euclid(2);
        let rem = half_exponent.rem_euclid(2);
        let base = rational_pow(&ell, whole);
        if rem == 1 {
            Self::new(prime, BigRational::zero(), base)
        } else {
            Self::new(prime, base, BigRational::zero())
        }
    }

    /// `l^k` as a scalar.
    pub fn ell_power(prime: u32, exponent: i64) -> Self {
        Self::from_rational(prime, rational_pow(&int(prime as i64), exponent))
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(self.prime);
        for _ in 0..exp {
            acc = acc.clone() * self.clone();
        }
        acc
    }

    /// Field norm `a^2 - l b^2` down to `Q`.
    pub fn norm(&self) -> BigRational {
        &self.rat_part * &self.rat_part
            - int(self.prime as i64) * &self.surd_part * &self.surd_part
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero in Q(sqrt(l))");
        let n = self.norm();
        assert!(!n.is_zero(), "norm vanishes for nonzero element; prime not squarefree?");
        Self::new(self.prime, &self.rat_part / &n, -(&self.surd_part / &n))
    }

    fn assert_same_prime(&self, other: &Self) {
        assert_eq!(self.prime, other.prime, "mixed primes in SqrtScalar arithmetic");
    }
}

/// `q^k` for integer `k` of either sign.
pub(crate) fn rational_pow(q: &BigRational, k: i64) -> BigRational {
    if k >= 0 {
        num_traits::pow::pow(q.clone(), k as usize)
    } else {
        num_traits::pow::pow(q.clone(), (-k) as usize).recip()
    }
}

impl Add for SqrtScalar {
    type Output = SqrtScalar;
    fn add(self, rhs: SqrtScalar) -> SqrtScalar {
        self.assert_same_prime(&rhs);
        SqrtScalar::new(self.prime, self.rat_part + rhs.rat_part, self.surd_part + rhs.surd_part)
    }
}

impl AddAssign for SqrtScalar {
    fn add_assign(&mut self, rhs: SqrtScalar) {
        *self = self.clone() + rhs;
    }
}

impl Sub for SqrtScalar {
    type Output = SqrtScalar;
    fn sub(self, rhs: SqrtScalar) -> SqrtScalar {
        self + (-rhs)
    }
}

impl Neg for SqrtScalar {
    type Output = SqrtScalar;
    fn neg(self) -> SqrtScalar {
        SqrtScalar::new(self.prime, -self.rat_part, -self.surd_part)
    }
}

impl Mul for SqrtScalar {
    type Output = SqrtScalar;
    fn mul(self, rhs: SqrtScalar) -> SqrtScalar {
        self.assert_same_prime(&rhs);
        let ell = int(self.prime as i64);
        let rat_part = &self.rat_part * &rhs.rat_part + &ell * &self.surd_part * &rhs.surd_part;
        let surd_part = &self.rat_part * &rhs.surd_part + &self.surd_part * &rhs.rat_part;
        SqrtScalar::new(self.prime, rat_part, surd_part)
    }
}

impl MulAssign for SqrtScalar {
    fn mul_assign(&mut self, rhs: SqrtScalar) {
        *self = self.clone() * rhs;
    }
}

impl Div for SqrtScalar {
    type Output = SqrtScalar;
    fn div(self, rhs: SqrtScalar) -> SqrtScalar {
        let inv = rhs.inv();
        self * inv
    }
}

impl fmt::Debug for SqrtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SqrtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.surd_part.is_zero() {
            return write!(f, "{}", self.rat_part);
        }
        if self.rat_part.is_zero() {
            return write!(f, "{}*sqrt({})", self.surd_part, self.prime);
        }
        if self.surd_part.is_negative() {
            write!(f, "{} - {}*sqrt({})", self.rat_part, -self.surd_part.clone(), self.prime)
        } else {
            write!(f, "{} + {}*sqrt({})", self.rat_part, self.surd_part, self.prime)
        }
    }
}

impl From<SqrtScalar> for super::CycloScalar {
    fn from(v: SqrtScalar) -> super::CycloScalar {
        super::CycloScalar::from_sqrt(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surd_squares_to_prime() {
        for ell in [2u32, 3, 5, 7] {
            let s = SqrtScalar::sqrt_ell(ell);
            let sq = s.clone() * s;
            assert_eq!(sq, SqrtScalar::from_int(ell, ell as i64));
        }
    }

    #[test]
    fn inverse_of_mixed_element() {
        let x = SqrtScalar::new(3, rat(1, 2), rat(-2, 5));
        let y = x.inv();
        assert_eq!(x * y, SqrtScalar::one(3));
    }

    #[test]
    fn half_powers() {
        // l^(3/2) = l * sqrt(l)
        let v = SqrtScalar::ell_half_power(5, 3);
        assert_eq!(v, SqrtScalar::new(5, int(0), int(5)));
        // l^(-1/2) = sqrt(l)/l
        let v = SqrtScalar::ell_half_power(5, -1);
        assert_eq!(v, SqrtScalar::new(5, int(0), rat(1, 5)));
        // l^(-1) rational
        let v = SqrtScalar::ell_half_power(5, -2);
        assert_eq!(v, SqrtScalar::from_frac(5, 1, 5));
    }
}
