//! Arithmetic in `Q(sqrt(l), zeta_{l^n})` for a fixed prime `l`.
//!
//! An element of conductor `l^n` is stored by its coefficients on the power
//! basis `1, zeta, ..., zeta^(phi(l^n)-1)` after reduction modulo the
//! cyclotomic polynomial `Phi_{l^n}(X) = sum_{j<l} X^(j*l^(n-1))`. On top of
//! the basis reduction, the conductor is lowered whenever the element
//! actually lies in a smaller cyclotomic layer, so two values are equal if
//! and only if their stored forms agree.

use num_rational::BigRational;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub};

use super::SqrtScalar;

#[derive(Clone, PartialEq, Eq)]
pub struct CycloScalar {
    pub prime: u32,
    /// Conductor exponent: the element lives in `Q(sqrt(l), zeta_{l^n})`.
    /// `n = 0` means the element is in the base field `Q(sqrt(l))`.
    pub level: u32,
    /// Coefficients on `zeta^0 .. zeta^(phi(l^n)-1)`; length exactly
    /// `phi(l^n)` for `n >= 1`, length 1 for `n = 0`.
    pub coeffs: Vec<SqrtScalar>,
}

fn phi(ell: u32, n: u32) -> usize {
    if n == 0 {
        1
    } else {
        (ell as usize).pow(n - 1) * (ell as usize - 1)
    }
}

fn pow_u(ell: u32, n: u32) -> usize {
    (ell as usize).pow(n)
}

impl CycloScalar {
    pub fn zero(prime: u32) -> Self {
        Self { prime, level: 0, coeffs: vec![SqrtScalar::zero(prime)] }
    }

    pub fn one(prime: u32) -> Self {
        Self { prime, level: 0, coeffs: vec![SqrtScalar::one(prime)] }
    }

    pub fn from_sqrt(v: SqrtScalar) -> Self {
        Self { prime: v.prime, level: 0, coeffs: vec![v] }
    }

    pub fn from_rational(prime: u32, q: BigRational) -> Self {
        Self::from_sqrt(SqrtScalar::from_rational(prime, q))
    }

    /// The root of unity `zeta_{l^n}^k`, reduced to canonical form.
    pub fn root_of_unity(prime: u32, n: u32, k: i64) -> Self {
        if n == 0 {
            return Self::one(prime);
        }
        let order = pow_u(prime, n) as i64;
        let k = k.rem_euclid(order) as usize;
        let mut raw = vec![SqrtScalar::zero(prime); pow_u(prime, n)];
        raw[k] = SqrtScalar::one(prime);
        Self::reduce_raw(prime, n, raw)
    }

    /// Builds the canonical form from coefficients on `zeta^0..zeta^(l^n - 1)`.
    fn reduce_raw(prime: u32, n: u32, mut raw: Vec<SqrtScalar>) -> Self {
        debug_assert_eq!(raw.len(), pow_u(prime, n));
        let deg = phi(prime, n);
        let block = pow_u(prime, n - 1);
        // zeta^(deg + r) = -sum_{j=0..l-2} zeta^(j*block + r) for 0 <= r < block
        for e in (deg..pow_u(prime, n)).rev() {
            let c = std::mem::replace(&mut raw[e], SqrtScalar::zero(prime));
            if c.is_zero() {
                continue;
            }
            let r = e - deg;
            for j in 0..(prime as usize - 1) {
                let idx = j * block + r;
                let cur = raw[idx].clone();
                raw[idx] = cur - c.clone();
            }
        }
        raw.truncate(deg);
        let out = Self { prime, level: n, coeffs: raw };
        out.lower_level()
    }

    /// Lowers the conductor as far as the element allows.
    fn lower_level(mut self) -> Self {
        while self.level >= 1 {
            let ell = self.prime as usize;
            let n = self.level;
            if n == 1 {
                // Element of Q(zeta_l) is rational iff coefficients on
                // zeta^1..zeta^(l-2) vanish.
                if self.coeffs[1..].iter().all(|c| c.is_zero()) {
                    let c0 = self.coeffs[0].clone();
                    self = Self { prime: self.prime, level: 0, coeffs: vec![c0] };
                } else {
                    break;
                }
            } else {
                // An element of Q(zeta_{l^n}) lies in Q(zeta_{l^(n-1)}) iff
                // its power-basis coefficients are supported on exponents
                // divisible by l; those exponents stay inside the basis range
                // of the smaller field after dividing by l.
                let deg = phi(self.prime, n);
                debug_assert_eq!(self.coeffs.len(), deg);
                if self.coeffs.iter().enumerate().all(|(i, c)| i % ell == 0 || c.is_zero()) {
                    let small_deg = phi(self.prime, n - 1);
                    let mut small = vec![SqrtScalar::zero(self.prime); small_deg];
                    for (i, c) in self.coeffs.iter().enumerate() {
                        if !c.is_zero() {
                            small[i / ell] = c.clone();
                        }
                    }
                    self = Self { prime: self.prime, level: n - 1, coeffs: small };
                } else {
                    break;
                }
            }
        }
        self
    }

    /// Raises the representation to conductor `l^n` without changing the value.
    fn raise_to(&self, n: u32) -> Vec<SqrtScalar> {
        assert!(n >= self.level);
        if self.level == 0 {
            let mut raw = vec![SqrtScalar::zero(self.prime); pow_u(self.prime, n).max(1)];
            raw[0] = self.coeffs[0].clone();
            return raw;
        }
        let stretch = pow_u(self.prime, n - self.level);
        let mut raw = vec![SqrtScalar::zero(self.prime); pow_u(self.prime, n)];
        for (i, c) in self.coeffs.iter().enumerate() {
            raw[i * stretch] = c.clone();
        }
        raw
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// True when the value lies in the base field `Q(sqrt(l))`.
    pub fn in_base_field(&self) -> bool {
        self.level == 0
    }

    /// The base-field value, when there is one.
    pub fn as_sqrt(&self) -> Option<&SqrtScalar> {
        self.in_base_field().then_some(&self.coeffs[0])
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.as_sqrt().and_then(|s| s.as_rational())
    }

    fn binop(&self, rhs: &Self, f: impl Fn(SqrtScalar, SqrtScalar) -> SqrtScalar) -> Self {
        assert_eq!(self.prime, rhs.prime, "mixed primes in CycloScalar arithmetic");
        let n = self.level.max(rhs.level);
        if n == 0 {
            return Self::from_sqrt(f(self.coeffs[0].clone(), rhs.coeffs[0].clone()));
        }
        let a = self.raise_to(n);
        let b = rhs.raise_to(n);
        let raw: Vec<SqrtScalar> =
            a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect();
        Self::reduce_raw(self.prime, n, raw)
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero in cyclotomic field");
        if self.level == 0 {
            return Self::from_sqrt(self.coeffs[0].inv());
        }
        // Extended Euclid in Q(sqrt(l))[T] against Phi_{l^n}(T).
        let n = self.level;
        let block = pow_u(self.prime, n - 1);
        let mut phi_poly = vec![SqrtScalar::zero(self.prime); phi(self.prime, n) + 1];
        for j in 0..(self.prime as usize) {
            phi_poly[j * block] = SqrtScalar::one(self.prime);
        }
        let inv_coeffs = poly_mod_inverse(&self.coeffs, &phi_poly, self.prime)
            .expect("element invertible modulo the cyclotomic polynomial");
        let mut raw = vec![SqrtScalar::zero(self.prime); pow_u(self.prime, n)];
        for (i, c) in inv_coeffs.into_iter().enumerate() {
            raw[i] = c;
        }
        Self::reduce_raw(self.prime, n, raw)
    }
}

/// Exact sum of roots of unity `sum_i zeta_{l^n}^(a_i)` in canonical form.
pub fn cyclo_sum(prime: u32, n: u32, exponents: &[i64]) -> CycloScalar {
    let mut acc = CycloScalar::zero(prime);
    for &e in exponents {
        acc = acc + CycloScalar::root_of_unity(prime, n, e);
    }
    acc
}

fn poly_trim(p: &mut Vec<SqrtScalar>) {
    while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

fn poly_is_zero(p: &[SqrtScalar]) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn poly_sub_scaled(a: &mut Vec<SqrtScalar>, b: &[SqrtScalar], c: &SqrtScalar, shift: usize, prime: u32) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, SqrtScalar::zero(prime));
    }
    for (i, bc) in b.iter().enumerate() {
        let cur = a[i + shift].clone();
        a[i + shift] = cur - c.clone() * bc.clone();
    }
    poly_trim(a);
}

/// Inverse of `a` modulo `m` in `Q(sqrt(l))[T]`, by extended Euclid.
fn poly_mod_inverse(a: &[SqrtScalar], m: &[SqrtScalar], prime: u32) -> Option<Vec<SqrtScalar>> {
    let mut r0: Vec<SqrtScalar> = m.to_vec();
    let mut r1: Vec<SqrtScalar> = a.to_vec();
    poly_trim(&mut r0);
    poly_trim(&mut r1);
    let mut t0: Vec<SqrtScalar> = vec![SqrtScalar::zero(prime)];
    let mut t1: Vec<SqrtScalar> = vec![SqrtScalar::one(prime)];
    while !poly_is_zero(&r1) {
        // Divide r0 by r1.
        let mut rem = r0.clone();
        let mut quo: Vec<SqrtScalar> = vec![SqrtScalar::zero(prime); rem.len()];
        let lead = r1.last().unwrap().clone();
        let lead_inv = lead.inv();
        while !poly_is_zero(&rem) && rem.len() >= r1.len() {
            let shift = rem.len() - r1.len();
            let c = rem.last().unwrap().clone() * lead_inv.clone();
            quo[shift] = quo[shift].clone() + c.clone();
            poly_sub_scaled(&mut rem, &r1, &c, shift, prime);
            if rem.len() == 1 && rem[0].is_zero() {
                break;
            }
        }
        poly_trim(&mut quo);
        // (r0, r1) <- (r1, rem); (t0, t1) <- (t1, t0 - quo*t1)
        let mut t_next = t0.clone();
        // t_next -= quo * t1
        for (i, qc) in quo.iter().enumerate() {
            if qc.is_zero() {
                continue;
            }
            poly_sub_scaled(&mut t_next, &t1, qc, i, prime);
        }
        r0 = std::mem::replace(&mut r1, rem);
        t0 = std::mem::replace(&mut t1, t_next);
    }
    // r0 is the gcd; it must be a nonzero constant for invertibility.
    if r0.len() != 1 || r0[0].is_zero() {
        return None;
    }
    let scale = r0[0].inv();
    Some(t0.into_iter().map(|c| c * scale.clone()).collect())
}

impl Add for CycloScalar {
    type Output = CycloScalar;
    fn add(self, rhs: CycloScalar) -> CycloScalar {
        self.binop(&rhs, |a, b| a + b)
    }
}

impl AddAssign for CycloScalar {
    fn add_assign(&mut self, rhs: CycloScalar) {
        *self = self.clone() + rhs;
    }
}

impl Sub for CycloScalar {
    type Output = CycloScalar;
    fn sub(self, rhs: CycloScalar) -> CycloScalar {
        self.binop(&rhs, |a, b| a - b)
    }
}

impl Neg for CycloScalar {
    type Output = CycloScalar;
    fn neg(self) -> CycloScalar {
        let coeffs = self.coeffs.into_iter().map(|c| -c).collect();
        CycloScalar { prime: self.prime, level: self.level, coeffs }
    }
}

impl Mul for CycloScalar {
    type Output = CycloScalar;
    fn mul(self, rhs: CycloScalar) -> CycloScalar {
        assert_eq!(self.prime, rhs.prime, "mixed primes in CycloScalar arithmetic");
        let n = self.level.max(rhs.level);
        if n == 0 {
            return CycloScalar::from_sqrt(self.coeffs[0].clone() * rhs.coeffs[0].clone());
        }
        let a = self.raise_to(n);
        let b = rhs.raise_to(n);
        let order = pow_u(self.prime, n);
        let mut raw = vec![SqrtScalar::zero(self.prime); order];
        for (i, ac) in a.iter().enumerate() {
            if ac.is_zero() {
                continue;
            }
            for (j, bc) in b.iter().enumerate() {
                if bc.is_zero() {
                    continue;
                }
                let idx = (i + j) % order;
                let cur = raw[idx].clone();
                raw[idx] = cur + ac.clone() * bc.clone();
            }
        }
        CycloScalar::reduce_raw(self.prime, n, raw)
    }
}

impl MulAssign for CycloScalar {
    fn mul_assign(&mut self, rhs: CycloScalar) {
        *self = self.clone() * rhs;
    }
}

impl fmt::Debug for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.level == 0 {
            return write!(f, "{}", self.coeffs[0]);
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c})*z{}^{}", pow_u(self.prime, self.level), i)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::int;
    use super::*;

    fn zeta(ell: u32, n: u32, k: i64) -> CycloScalar {
        CycloScalar::root_of_unity(ell, n, k)
    }

    #[test]
    fn full_character_sum_vanishes() {
        // sum of all l^n-th roots of unity, n >= 1
        for (ell, n) in [(2u32, 1u32), (2, 2), (3, 1), (3, 2), (5, 1)] {
            let exps: Vec<i64> = (0..(ell as i64).pow(n)).collect();
            assert!(cyclo_sum(ell, n, &exps).is_zero(), "l={ell} n={n}");
        }
    }

    #[test]
    fn zeta4_reduction_by_hand() {
        // zeta_4^2 = -1, and 1 + zeta_4 + zeta_4^2 + zeta_4^3 = 0.
        let z = zeta(2, 2, 1);
        let z2 = z.clone() * z.clone();
        assert_eq!(z2, CycloScalar::from_rational(2, int(-1)));
        let s = cyclo_sum(2, 2, &[0, 1, 2, 3]);
        assert!(s.is_zero());
    }

    #[test]
    fn conductor_drops_for_power_roots() {
        // zeta_9^3 = zeta_3
        let a = zeta(3, 2, 3);
        let b = zeta(3, 1, 1);
        assert_eq!(a, b);
        assert_eq!(a.level, 1);
    }

    #[test]
    fn rationality_detection() {
        let z = zeta(5, 1, 1);
        let mut prod = CycloScalar::one(5);
        for k in 0..5 {
            let _ = k;
            prod = prod * z.clone();
        }
        // zeta_5^5 = 1
        assert!(prod.in_base_field());
        assert_eq!(prod, CycloScalar::one(5));
    }

    #[test]
    fn inverse_of_root_combination() {
        let x = zeta(3, 2, 1) + CycloScalar::from_rational(3, int(2));
        let y = x.inv();
        assert_eq!(x * y, CycloScalar::one(3));
    }

    #[test]
    fn inverse_with_surd_coefficients() {
        let x = CycloScalar::from_sqrt(SqrtScalar::new(2, int(1), int(1))) + zeta(2, 2, 1);
        let y = x.inv();
        assert_eq!(x * y, CycloScalar::one(2));
    }
}
