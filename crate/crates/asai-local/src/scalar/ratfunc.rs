//! Reduced rational functions in one variable `X` over the cyclotomic
//! scalar tower, with Laurent support (`X` stands for `l^(-s)`, so factors
//! like `l^(s+1)` become `l * X^(-1)`).
//!
//! The canonical form is `X^shift * num(X) / den(X)` with `num(0) != 0` (or
//! `num = 0`), `den(0) = 1`, and `gcd(num, den) = 1`. Reduction is idempotent
//! and all ring operations re-canonicalise.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use thiserror::Error;

use super::{CycloScalar, SqrtScalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("series expansion requested at a pole at the origin")]
    PoleAtOrigin,
    #[error("evaluation at a pole of the reduced fraction")]
    PoleAtPoint,
}

/// Dense polynomial over the cyclotomic tower; coefficient `i` multiplies `X^i`.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    pub prime: u32,
    pub coeffs: Vec<CycloScalar>,
}

impl LaurentPoly {
    pub fn zero(prime: u32) -> Self {
        Self { prime, coeffs: vec![CycloScalar::zero(prime)] }
    }

    pub fn one(prime: u32) -> Self {
        Self { prime, coeffs: vec![CycloScalar::one(prime)] }
    }

    pub fn constant(c: CycloScalar) -> Self {
        Self { prime: c.prime, coeffs: vec![c] }
    }

    pub fn from_coeffs(prime: u32, coeffs: Vec<CycloScalar>) -> Self {
        let mut p = Self { prime, coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.coeffs.push(CycloScalar::zero(self.prime));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &CycloScalar) -> CycloScalar {
        let mut acc = CycloScalar::zero(self.prime);
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    fn add_poly(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![CycloScalar::zero(self.prime); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] = out[i].clone() + c.clone();
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] = out[i].clone() + c.clone();
        }
        Self::from_coeffs(self.prime, out)
    }

    fn mul_poly(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.prime);
        }
        let mut out =
            vec![CycloScalar::zero(self.prime); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::from_coeffs(self.prime, out)
    }

    fn neg_poly(&self) -> Self {
        Self::from_coeffs(self.prime, self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    fn scale(&self, c: &CycloScalar) -> Self {
        Self::from_coeffs(self.prime, self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Euclidean division; panics if `rhs` is zero.
    fn divmod(&self, rhs: &Self) -> (Self, Self) {
        assert!(!rhs.is_zero(), "polynomial division by zero");
        let mut rem = self.clone();
        let mut quo = vec![CycloScalar::zero(self.prime); self.coeffs.len()];
        let lead_inv = rhs.coeffs.last().unwrap().inv();
        while !rem.is_zero() && rem.degree() >= rhs.degree() {
            let shift = rem.degree() - rhs.degree();
            let c = rem.coeffs.last().unwrap().clone() * lead_inv.clone();
            quo[shift] = quo[shift].clone() + c.clone();
            let mut sub = vec![CycloScalar::zero(self.prime); shift];
            sub.extend(rhs.coeffs.iter().map(|b| b.clone() * c.clone()));
            rem = rem.add_poly(&Self::from_coeffs(self.prime, sub).neg_poly());
            if shift == 0 {
                break;
            }
        }
        (Self::from_coeffs(self.prime, quo), rem)
    }

    fn gcd(&self, rhs: &Self) -> Self {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            // Normalise monic for determinism.
            let inv = a.coeffs.last().unwrap().inv();
            a.scale(&inv)
        }
    }

    /// Number of trailing zero coefficients, i.e. the order of vanishing at 0.
    fn trailing_zeros(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    /// Order of vanishing at `X = 1`, together with the cofactor after
    /// dividing out `(X - 1)^order`.
    fn order_at_one(&self) -> (usize, Self) {
        if self.is_zero() {
            return (0, self.clone());
        }
        let one = CycloScalar::one(self.prime);
        let x_minus_1 = Self::from_coeffs(
            self.prime,
            vec![-CycloScalar::one(self.prime), CycloScalar::one(self.prime)],
        );
        let mut p = self.clone();
        let mut ord = 0;
        while p.eval(&one).is_zero() && !p.is_zero() {
            let (q, r) = p.divmod(&x_minus_1);
            debug_assert!(r.is_zero());
            p = q;
            ord += 1;
        }
        (ord, p)
    }
}

/// A reduced rational function `X^shift * num / den`.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFuncX {
    pub prime: u32,
    pub shift: i64,
    pub num: LaurentPoly,
    pub den: LaurentPoly,
}

/// Outcome of `limit_product`: exact value at `X = 1` plus the pole/zero
/// orders at `X = 1` of both factors (positive = zero, negative = pole).
#[derive(Debug, Clone)]
pub struct LimitReport {
    pub value: CycloScalar,
    pub order_a: i64,
    pub order_b: i64,
}

impl RatFuncX {
    pub fn zero(prime: u32) -> Self {
        Self { prime, shift: 0, num: LaurentPoly::zero(prime), den: LaurentPoly::one(prime) }
    }

    pub fn one(prime: u32) -> Self {
        Self::from_poly(LaurentPoly::one(prime))
    }

    pub fn constant(c: CycloScalar) -> Self {
        Self::from_poly(LaurentPoly::constant(c))
    }

    pub fn from_sqrt(c: SqrtScalar) -> Self {
        Self::constant(CycloScalar::from_sqrt(c))
    }

    /// `c * X^k`.
    pub fn monomial(c: CycloScalar, k: i64) -> Self {
        let mut f = Self::constant(c);
        f.shift = k;
        f.normalise()
    }

    pub fn x(prime: u32) -> Self {
        Self::monomial(CycloScalar::one(prime), 1)
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        let prime = p.prime;
        Self { prime, shift: 0, num: p, den: LaurentPoly::one(prime) }.normalise()
    }

    /// Polynomial `c0 + c1 X + ...` from base-field coefficients.
    pub fn poly_from_sqrt(prime: u32, coeffs: Vec<SqrtScalar>) -> Self {
        Self::from_poly(LaurentPoly::from_coeffs(
            prime,
            coeffs.into_iter().map(CycloScalar::from_sqrt).collect(),
        ))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalise(mut self) -> Self {
        if self.num.is_zero() {
            return Self::zero(self.prime);
        }
        // Move trailing X powers into the shift.
        let tn = self.num.trailing_zeros();
        if tn > 0 {
            self.num.coeffs.drain(..tn);
            self.shift += tn as i64;
        }
        let td = self.den.trailing_zeros();
        if td > 0 {
            self.den.coeffs.drain(..td);
            self.shift -= td as i64;
        }
        // Remove the gcd.
        let g = self.num.gcd(&self.den);
        if g.degree() > 0 {
            let (qn, rn) = self.num.divmod(&g);
            let (qd, rd) = self.den.divmod(&g);
            debug_assert!(rn.is_zero() && rd.is_zero());
            self.num = qn;
            self.den = qd;
        }
        // den(0) = 1.
        let c = self.den.coeffs[0].inv();
        self.num = self.num.scale(&c);
        self.den = self.den.scale(&c);
        self
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverting the zero rational function");
        Self {
            prime: self.prime,
            shift: -self.shift,
            num: self.den.clone(),
            den: self.num.clone(),
        }
        .normalise()
    }

    /// Exact Taylor coefficients at `X = 0`, orders `0..=order`.
    pub fn series_expand(&self, order: usize) -> Result<Vec<CycloScalar>, ScalarError> {
        if self.is_zero() {
            return Ok(vec![CycloScalar::zero(self.prime); order + 1]);
        }
        if self.shift < 0 {
            return Err(ScalarError::PoleAtOrigin);
        }
        let mut out = vec![CycloScalar::zero(self.prime); order + 1];
        // Divide num by den as power series: den(0) = 1 by normalisation.
        let mut cur = vec![CycloScalar::zero(self.prime); order + 1];
        for k in 0..=order {
            let mut c = if k < self.num.coeffs.len() {
                self.num.coeffs[k].clone()
            } else {
                CycloScalar::zero(self.prime)
            };
            for j in 1..=k.min(self.den.coeffs.len() - 1) {
                c = c - self.den.coeffs[j].clone() * cur[k - j].clone();
            }
            cur[k] = c;
        }
        for k in 0..=order {
            let src = k as i64 - self.shift;
            if src >= 0 && (src as usize) <= order {
                out[k] = cur[src as usize].clone();
            }
        }
        Ok(out)
    }

    /// Exact value of the reduced fraction at a base-field point.
    pub fn eval_at(&self, x0: &SqrtScalar) -> Result<CycloScalar, ScalarError> {
        let x = CycloScalar::from_sqrt(x0.clone());
        if self.is_zero() {
            return Ok(CycloScalar::zero(self.prime));
        }
        if x.is_zero() && self.shift < 0 {
            return Err(ScalarError::PoleAtPoint);
        }
        let d = self.den.eval(&x);
        if d.is_zero() {
            return Err(ScalarError::PoleAtPoint);
        }
        let n = self.num.eval(&x);
        let mut v = n * d.inv();
        if self.shift != 0 {
            if x.is_zero() {
                // shift > 0 at x = 0
                return Ok(CycloScalar::zero(self.prime));
            }
            let xp = if self.shift > 0 { x.clone() } else { x.inv() };
            for _ in 0..self.shift.unsigned_abs() {
                v = v * xp.clone();
            }
        }
        Ok(v)
    }

    /// Order of vanishing at `X = 1` (negative for a pole).
    pub fn order_at_one(&self) -> i64 {
        if self.is_zero() {
            return 0;
        }
        let (zn, _) = self.num.order_at_one();
        let (zd, _) = self.den.order_at_one();
        zn as i64 - zd as i64
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.prime);
        for _ in 0..k {
            acc = acc * self.clone();
        }
        acc
    }
}

/// Limit of the product `a * b` as `X -> 1`: the product is reduced first,
/// an exact evaluation at `X = 1` follows, and the pole/zero orders of both
/// factors are reported.
pub fn limit_product(a: &RatFuncX, b: &RatFuncX) -> Result<LimitReport, ScalarError> {
    let prod = a.clone() * b.clone();
    let one = SqrtScalar::one(a.prime);
    let value = prod.eval_at(&one)?;
    Ok(LimitReport { value, order_a: a.order_at_one(), order_b: b.order_at_one() })
}

impl Add for RatFuncX {
    type Output = RatFuncX;
    fn add(self, rhs: RatFuncX) -> RatFuncX {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        // Align shifts: value = X^s1 n1/d1 + X^s2 n2/d2.
        let s = self.shift.min(rhs.shift);
        let pow1 = (self.shift - s) as usize;
        let pow2 = (rhs.shift - s) as usize;
        let mut n1 = vec![CycloScalar::zero(self.prime); pow1];
        n1.extend(self.num.coeffs.iter().cloned());
        let mut n2 = vec![CycloScalar::zero(self.prime); pow2];
        n2.extend(rhs.num.coeffs.iter().cloned());
        let n1 = LaurentPoly::from_coeffs(self.prime, n1);
        let n2 = LaurentPoly::from_coeffs(self.prime, n2);
        let num = n1.mul_poly(&rhs.den).add_poly(&n2.mul_poly(&self.den));
        let den = self.den.mul_poly(&rhs.den);
        RatFuncX { prime: self.prime, shift: s, num, den }.normalise()
    }
}

impl Sub for RatFuncX {
    type Output = RatFuncX;
    fn sub(self, rhs: RatFuncX) -> RatFuncX {
        self + (-rhs)
    }
}

impl Neg for RatFuncX {
    type Output = RatFuncX;
    fn neg(self) -> RatFuncX {
        RatFuncX { prime: self.prime, shift: self.shift, num: self.num.neg_poly(), den: self.den }
    }
}

impl Mul for RatFuncX {
    type Output = RatFuncX;
    fn mul(self, rhs: RatFuncX) -> RatFuncX {
        RatFuncX {
            prime: self.prime,
            shift: self.shift + rhs.shift,
            num: self.num.mul_poly(&rhs.num),
            den: self.den.mul_poly(&rhs.den),
        }
        .normalise()
    }
}

impl Div for RatFuncX {
    type Output = RatFuncX;
    fn div(self, rhs: RatFuncX) -> RatFuncX {
        self * rhs.inv()
    }
}

impl fmt::Debug for RatFuncX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RatFuncX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let poly = |p: &LaurentPoly, f: &mut fmt::Formatter<'_>| -> fmt::Result {
            let mut first = true;
            for (i, c) in p.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                if i == 0 {
                    write!(f, "({c})")?;
                } else if i == 1 {
                    write!(f, "({c})*X")?;
                } else {
                    write!(f, "({c})*X^{i}")?;
                }
            }
            if first {
                write!(f, "0")?;
            }
            Ok(())
        };
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.shift != 0 {
            write!(f, "X^{} * ", self.shift)?;
        }
        write!(f, "[")?;
        poly(&self.num, f)?;
        write!(f, "]")?;
        if self.den.degree() > 0 {
            write!(f, " / [")?;
            poly(&self.den, f)?;
            write!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::{int, rat};
    use super::*;

    fn c(prime: u32, n: i64) -> CycloScalar {
        CycloScalar::from_rational(prime, int(n))
    }

    fn geometric(prime: u32, cnum: i64, cden: i64) -> RatFuncX {
        // 1 / (1 - (cnum/cden) X)
        let den = LaurentPoly::from_coeffs(
            prime,
            vec![CycloScalar::one(prime), CycloScalar::from_rational(prime, -rat(cnum, cden))],
        );
        RatFuncX { prime, shift: 0, num: LaurentPoly::one(prime), den }.normalise()
    }

    #[test]
    fn geometric_series() {
        let f = geometric(5, 3, 1);
        let s = f.series_expand(3).unwrap();
        assert_eq!(s, vec![c(5, 1), c(5, 3), c(5, 9), c(5, 27)]);
    }

    #[test]
    fn polynomial_series_pads_with_zeros() {
        // 1 - X^2 to order 4 -> [1, 0, -1, 0, 0]
        let f = RatFuncX::from_poly(LaurentPoly::from_coeffs(
            5,
            vec![c(5, 1), c(5, 0), c(5, -1)],
        ));
        let s = f.series_expand(4).unwrap();
        assert_eq!(s, vec![c(5, 1), c(5, 0), c(5, -1), c(5, 0), c(5, 0)]);
    }

    #[test]
    fn product_of_two_geometrics() {
        // 1/((1-2X)(1-3X)), order 2 -> [1, 5, 19]
        let f = geometric(7, 2, 1) * geometric(7, 3, 1);
        let s = f.series_expand(2).unwrap();
        assert_eq!(s, vec![c(7, 1), c(7, 5), c(7, 19)]);
    }

    #[test]
    fn pole_at_origin_detected() {
        let f = RatFuncX::monomial(CycloScalar::one(3), -1);
        assert_eq!(f.series_expand(2), Err(ScalarError::PoleAtOrigin));
    }

    #[test]
    fn eval_cancels_removable_singularity() {
        // (1 - X^2)/(1 - X) = 1 + X, value 2 at X = 1.
        let num = LaurentPoly::from_coeffs(3, vec![c(3, 1), c(3, 0), c(3, -1)]);
        let den = LaurentPoly::from_coeffs(3, vec![c(3, 1), c(3, -1)]);
        let f = RatFuncX { prime: 3, shift: 0, num, den }.normalise();
        assert_eq!(f.eval_at(&SqrtScalar::one(3)).unwrap(), c(3, 2));
    }

    #[test]
    fn eval_simple_substitution() {
        // 1 - 5X^2 at X = 1/5 -> 4/5
        let f = RatFuncX::from_poly(LaurentPoly::from_coeffs(5, vec![c(5, 1), c(5, 0), c(5, -5)]));
        let v = f.eval_at(&SqrtScalar::from_frac(5, 1, 5)).unwrap();
        assert_eq!(v, CycloScalar::from_rational(5, rat(4, 5)));
    }

    #[test]
    fn eval_true_pole_errors() {
        let f = geometric(3, 1, 1);
        assert_eq!(f.eval_at(&SqrtScalar::one(3)), Err(ScalarError::PoleAtPoint));
    }

    #[test]
    fn limit_exact_cancellation() {
        // a = 1/(1-X), b = 5(1-X) -> 5
        let a = geometric(3, 1, 1);
        let b = RatFuncX::from_poly(LaurentPoly::from_coeffs(3, vec![c(3, 5), c(3, -5)]));
        let rep = limit_product(&a, &b).unwrap();
        assert_eq!(rep.value, c(3, 5));
        assert_eq!(rep.order_a, -1);
        assert_eq!(rep.order_b, 1);
    }

    #[test]
    fn limit_surviving_zero() {
        let a = RatFuncX::one(3);
        let b = RatFuncX::from_poly(LaurentPoly::from_coeffs(3, vec![c(3, 1), c(3, 0), c(3, -1)]));
        let rep = limit_product(&a, &b).unwrap();
        assert!(rep.value.is_zero());
    }

    #[test]
    fn limit_degenerate_double_cancellation() {
        // a = 1/(1 - l^{-1} c X^2) with c = l, i.e. 1/(1-X^2); b = 1 - X^2.
        let ell = 3u32;
        let a = RatFuncX::from_poly(LaurentPoly::from_coeffs(
            ell,
            vec![c(ell, 1), c(ell, 0), c(ell, -1)],
        ))
        .inv();
        let b = RatFuncX::from_poly(LaurentPoly::from_coeffs(
            ell,
            vec![c(ell, 1), c(ell, 0), c(ell, -1)],
        ));
        let rep = limit_product(&a, &b).unwrap();
        assert_eq!(rep.value, CycloScalar::one(ell));
    }

    #[test]
    fn laurent_shift_roundtrip() {
        // l X^{-1} * X = l
        let f = RatFuncX::monomial(c(2, 2), -1) * RatFuncX::x(2);
        assert_eq!(f, RatFuncX::constant(c(2, 2)));
    }

    #[test]
    fn reduction_is_idempotent_under_ops() {
        let a = geometric(3, 2, 1);
        let b = geometric(3, 2, 1).inv();
        let prod = a * b;
        assert_eq!(prod, RatFuncX::one(3));
    }
}
