//! `Q_l` and its unramified quadratic extension `E = Q_l(delta)`: exact
//! elements, valuations, the standard additive characters, and unit-shell
//! character averages.
//!
//! Elements are plain rationals (pairs of rationals in degree 2); only the
//! `l`-adic valuation matters. The degree-2 generator is pinned so that
//! `{1, delta}` is an integral basis and `e_l(tr(delta^{-1} x))` has
//! conductor `O`: for odd `l`, `delta^2` is the smallest positive
//! non-residue; for `l = 2`, `delta` is a primitive cube root of unity,
//! `delta^2 = -1 - delta`. With these choices `v(delta) = 0`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalar::{int, rat, rational_pow, CycloScalar, SqrtScalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum FieldCase {
    /// Degree 1 local data (the prime splits upstairs; the group doubles).
    Split,
    /// Degree 2: the unramified quadratic extension of `Q_l`.
    Inert,
}

impl FieldCase {
    pub fn degree(self) -> u32 {
        match self {
            FieldCase::Split => 1,
            FieldCase::Inert => 2,
        }
    }
}

impl std::fmt::Display for FieldCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldCase::Split => write!(f, "split"),
            FieldCase::Inert => write!(f, "inert"),
        }
    }
}

/// Descriptor of `Q_l` or of its unramified quadratic extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFieldDesc {
    pub prime: u32,
    pub case: FieldCase,
}

impl LocalFieldDesc {
    pub fn new(prime: u32, case: FieldCase) -> Self {
        Self { prime, case }
    }

    /// Residue field size `q = l^degree`.
    pub fn residue_size(&self) -> u64 {
        (self.prime as u64).pow(self.case.degree())
    }

    /// `delta^2` expressed as `a + b*delta`.
    pub fn delta_square(&self) -> (BigRational, BigRational) {
        assert_eq!(self.case, FieldCase::Inert);
        if self.prime == 2 {
            (int(-1), int(-1))
        } else {
            (int(self.non_residue() as i64), int(0))
        }
    }

    /// Smallest positive quadratic non-residue mod `l` (odd `l`).
    pub fn non_residue(&self) -> u32 {
        let ell = self.prime;
        assert!(ell % 2 == 1);
        let mut residues = vec![false; ell as usize];
        for x in 1..ell {
            residues[((x * x) % ell) as usize] = true;
        }
        (2..ell).find(|&d| !residues[d as usize]).expect("non-residue exists for odd prime")
    }

    /// Coefficients `(t1, td)` with `tr(delta^{-1}(x + y delta)) = t1*x + td*y`.
    fn trace_delta_inv_coeffs(&self) -> (BigRational, BigRational) {
        assert_eq!(self.case, FieldCase::Inert);
        if self.prime == 2 {
            // delta^{-1} = delta^2 = -1 - delta; tr(a + b delta) = 2a - b.
            // delta^{-1}(x + y delta) = (y - x) - x delta, trace -x + 2y... see below.
            (int(-1), int(2))
        } else {
            // delta^{-1} = delta/d; delta^{-1}(x + y delta) = y + (x/d) delta, trace 2y.
            (int(0), int(2))
        }
    }
}

/// An exact element: `x` in degree 1, `x + y*delta` in degree 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElt {
    pub x: BigRational,
    pub y: BigRational,
}

impl FieldElt {
    pub fn rational(x: BigRational) -> Self {
        Self { x, y: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(int(n))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Self::rational(rat(n, d))
    }

    pub fn with_delta(x: BigRational, y: BigRational) -> Self {
        Self { x, y }
    }

    pub fn zero() -> Self {
        Self::rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self { x: &self.x + &rhs.x, y: &self.y + &rhs.y }
    }

    pub fn neg(&self) -> Self {
        Self { x: -self.x.clone(), y: -self.y.clone() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self, field: &LocalFieldDesc) -> Self {
        match field.case {
            FieldCase::Split => {
                assert!(self.y.is_zero() && rhs.y.is_zero());
                Self { x: &self.x * &rhs.x, y: BigRational::zero() }
            }
            FieldCase::Inert => {
                let (a, b) = field.delta_square();
                let cross = &self.y * &rhs.y;
                Self {
                    x: &self.x * &rhs.x + &a * &cross,
                    y: &self.x * &rhs.y + &self.y * &rhs.x + &b * &cross,
                }
            }
        }
    }

    pub fn inv(&self, field: &LocalFieldDesc) -> Self {
        assert!(!self.is_zero());
        match field.case {
            FieldCase::Split => Self::rational(self.x.recip()),
            FieldCase::Inert => {
                // For delta^2 = a + b delta, the Galois conjugate of
                // x + y delta is (x + b y) - y delta.
                let (_, b) = field.delta_square();
                let conj = Self { x: &self.x + &b * &self.y, y: -self.y.clone() };
                let norm = self.mul(&conj, field);
                debug_assert!(norm.y.is_zero(), "norm must be rational");
                let n = norm.x;
                Self { x: &conj.x / &n, y: &conj.y / &n }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self { x: &self.x * c, y: &self.y * c }
    }

    /// The `l`-adic valuation; `None` for zero. Unramified, so this is
    /// `min(v(x), v(y))` on coordinates.
    pub fn valuation(&self, field: &LocalFieldDesc) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let vx = rational_valuation(&self.x, field.prime);
        let vy = rational_valuation(&self.y, field.prime);
        Some(match (vx, vy) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => unreachable!(),
        })
    }

    /// `|z|` as the exponent `e` with `|z| = l^e`: `-v` in degree 1,
    /// `-2v` in degree 2 (norm absolute value).
    pub fn abs_exponent(&self, field: &LocalFieldDesc) -> Option<i64> {
        self.valuation(field).map(|v| -(field.case.degree() as i64) * v)
    }

    pub fn is_integral(&self, field: &LocalFieldDesc) -> bool {
        self.valuation(field).map(|v| v >= 0).unwrap_or(true)
    }

    pub fn is_unit(&self, field: &LocalFieldDesc) -> bool {
        self.valuation(field) == Some(0)
    }

    /// Coordinates of an integral element reduced into `[0, l^n)`.
    pub fn reduce_mod(&self, field: &LocalFieldDesc, n: u32) -> (BigInt, BigInt) {
        assert!(self.is_integral(field), "reduction of a non-integral element");
        let m = BigInt::from(field.prime).pow(n);
        (rational_mod(&self.x, &m), rational_mod(&self.y, &m))
    }

    pub fn congruent_mod(&self, rhs: &Self, field: &LocalFieldDesc, n: u32) -> bool {
        let d = self.sub(rhs);
        if d.is_zero() {
            return true;
        }
        d.valuation(field).map(|v| v >= n as i64).unwrap_or(true)
    }
}

/// `l`-adic valuation of a rational; `None` for zero.
pub fn rational_valuation(q: &BigRational, ell: u32) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    let ell = BigInt::from(ell);
    let mut v: i64 = 0;
    let mut n = q.numer().abs();
    while (&n % &ell).is_zero() {
        n /= &ell;
        v += 1;
    }
    let mut d = q.denom().abs();
    while (&d % &ell).is_zero() {
        d /= &ell;
        v -= 1;
    }
    Some(v)
}

/// Value in `[0, m)` congruent to the `l`-adically integral rational `q`.
fn rational_mod(q: &BigRational, m: &BigInt) -> BigInt {
    let inv = mod_inverse(q.denom(), m).expect("denominator invertible modulo l^n");
    ((q.numer() * inv) % m + m) % m
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(((e.x % m) + m) % m)
    } else {
        None
    }
}

/// The standard additive character: `e_l` in degree 1 and
/// `x -> e_l(tr(delta^{-1} x))` in degree 2 (conductor `O` in both cases).
/// Note that in the odd inert case the character is trivial on all of `Q_l`,
/// while for `l = 2` it restricts to `x -> e_2(-x)` on `Q_2`.
pub fn additive_char(field: &LocalFieldDesc, z: &FieldElt) -> CycloScalar {
    match field.case {
        FieldCase::Split => e_ell(field.prime, &z.x),
        FieldCase::Inert => {
            let (t1, td) = field.trace_delta_inv_coeffs();
            let arg = &t1 * &z.x + &td * &z.y;
            e_ell(field.prime, &arg)
        }
    }
}

/// `e_l(q)` for rational `q`, sending `1/l^n` to a primitive `l^n`-th root
/// of unity; depends only on `q` modulo the `l`-integers.
pub fn e_ell(ell: u32, q: &BigRational) -> CycloScalar {
    match rational_valuation(q, ell) {
        None => CycloScalar::one(ell),
        Some(v) if v >= 0 => CycloScalar::one(ell),
        Some(v) => {
            let n = (-v) as u32;
            let m = BigInt::from(ell).pow(n);
            let scaled = q * BigRational::from(m.clone());
            debug_assert_eq!(rational_valuation(&scaled, ell), Some(0));
            let a = rational_mod(&scaled, &m);
            let a_i64: i64 =
                a.try_into().unwrap_or_else(|_| panic!("root-of-unity exponent out of range"));
            CycloScalar::root_of_unity(ell, n, a_i64)
        }
    }
}

/// Exact unit-group average of `z -> Psi(z / l^k)`, with multiplicative Haar
/// measure giving the units volume 1: `1` for `k <= 0`, `-1/(q-1)` for
/// `k = 1`, `0` for `k >= 2`.
pub fn unit_shell_integral(field: &LocalFieldDesc, k: i64) -> SqrtScalar {
    let q = field.residue_size() as i64;
    match k {
        _ if k <= 0 => SqrtScalar::one(field.prime),
        1 => SqrtScalar::from_frac(field.prime, -1, q - 1),
        _ => SqrtScalar::zero(field.prime),
    }
}

/// Brute-force companion of `unit_shell_integral`: averages the additive
/// character over unit representatives modulo `l^k`.
pub fn unit_shell_integral_bruteforce(field: &LocalFieldDesc, k: i64) -> CycloScalar {
    if k <= 0 {
        return CycloScalar::one(field.prime);
    }
    let reps = coset_reps(field, k as u32);
    let units: Vec<&FieldElt> = reps.iter().filter(|u| u.is_unit(field)).collect();
    let scale = rational_pow(&int(field.prime as i64), -k);
    let mut acc = CycloScalar::zero(field.prime);
    for u in &units {
        acc = acc + additive_char(field, &u.scale(&scale));
    }
    acc * CycloScalar::from_rational(field.prime, int(units.len() as i64).recip())
}

/// Representatives of `O / l^n O`: exactly `q^n` elements with coordinates
/// in `[0, l^n)`, pairwise incongruent.
pub fn coset_reps(field: &LocalFieldDesc, n: u32) -> Vec<FieldElt> {
    assert!(n >= 1);
    let m = (field.prime as i64).pow(n);
    match field.case {
        FieldCase::Split => (0..m).map(FieldElt::from_int).collect(),
        FieldCase::Inert => {
            let mut out = Vec::with_capacity((m * m) as usize);
            for x in 0..m {
                for y in 0..m {
                    out.push(FieldElt::with_delta(int(x), int(y)));
                }
            }
            out
        }
    }
}
