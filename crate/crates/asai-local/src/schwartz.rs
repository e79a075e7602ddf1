//! Schwartz functions on `Q_l^2` as finite sums of coset indicators
//! `c * ch((a,b) + l^n Z_l^2)`, with the right-translation action
//! `(g.phi)(v) = phi(v g)` on row vectors, the exact Fourier transform, and
//! the standard function families.
//!
//! Canonical form: all terms refined to a common level, coefficients merged
//! on identical cosets, zeros dropped. Two functions are equal iff their
//! refinements to a common grid agree coefficientwise.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeMap;

use crate::hecke::Mat2;
use crate::local_field::{e_ell, mod_inverse, rational_valuation, FieldCase, FieldElt, LocalFieldDesc};
use crate::scalar::{int, rational_pow, CycloScalar};

/// Tags for the standard function families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StandardPhi {
    /// `ch(Z^2)` for `t = 0`, `ch(l^t Z x Z^*)` for `t > 0`.
    PhiT(u32),
    /// `ch(l^t Z x (1 + l^t Z))`, `t >= 1`.
    Phi1T(u32),
    /// `ch(l Z x Z^*)`; coincides with `PhiT(1)`.
    Phi01,
}

#[derive(Clone, Debug)]
pub struct SchwartzFn {
    pub prime: u32,
    /// Base points live on the grid `l^{-scale} Z^2`.
    scale: u32,
    /// Common coset level: each stored coset is `(a,b) + l^level Z^2`.
    level: i64,
    /// Coset keys `(p, q)` for base point `(p, q) / l^scale`, with
    /// `p, q` in `[0, l^(scale + level))`.
    terms: BTreeMap<(BigInt, BigInt), CycloScalar>,
}

fn ell_pow(ell: u32, k: u32) -> BigInt {
    BigInt::from(ell).pow(k)
}

impl SchwartzFn {
    pub fn zero(prime: u32) -> Self {
        Self { prime, scale: 0, level: 0, terms: BTreeMap::new() }
    }

    /// Builds from raw terms `(coefficient, base point, level)` and
    /// canonicalises.
    pub fn from_terms(prime: u32, raw: Vec<(CycloScalar, (BigRational, BigRational), i64)>) -> Self {
        // Common grid scale: wide enough for every base coordinate and for
        // the base points introduced when refining negative-level cosets.
        let mut scale: u32 = 0;
        for (_, (a, b), n) in &raw {
            for coord in [a, b] {
                if let Some(v) = rational_valuation(coord, prime) {
                    if v < 0 {
                        scale = scale.max((-v) as u32);
                    }
                }
            }
            if *n < 0 {
                scale = scale.max((-*n) as u32);
            }
        }
        let mut level: i64 = -(scale as i64);
        for (_, _, n) in &raw {
            level = level.max(*n);
        }
        let mut terms: BTreeMap<(BigInt, BigInt), CycloScalar> = BTreeMap::new();
        let modulus = ell_pow(prime, (scale as i64 + level) as u32);
        for (c, (a, b), n) in raw {
            if c.is_zero() {
                continue;
            }
            // Split the coset (a,b) + l^n Z^2 into level-`level` sub-cosets.
            let steps = (level - n).max(0) as u32;
            let count = ell_pow(prime, steps);
            let step = rational_pow(&int(prime as i64), n);
            let mut i = BigInt::zero();
            while i < count {
                let da = BigRational::from(i.clone()) * &step;
                let mut j = BigInt::zero();
                while j < count {
                    let db = BigRational::from(j.clone()) * &step;
                    let key = (
                        grid_key(&(&a + &da), prime, scale, &modulus),
                        grid_key(&(&b + &db), prime, scale, &modulus),
                    );
                    let entry = terms.entry(key).or_insert_with(|| CycloScalar::zero(prime));
                    *entry = entry.clone() + c.clone();
                    j += 1;
                }
                i += 1;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Self { prime, scale, level, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    /// Raw term list `(coefficient, base point, level)` in canonical order.
    pub fn term_list(&self) -> Vec<(CycloScalar, (BigRational, BigRational), i64)> {
        let den = rational_pow(&int(self.prime as i64), -(self.scale as i64));
        self.terms
            .iter()
            .map(|((p, q), c)| {
                (
                    c.clone(),
                    (BigRational::from(p.clone()) * &den, BigRational::from(q.clone()) * &den),
                    self.level,
                )
            })
            .collect()
    }

    /// Exact value at a rational point.
    pub fn value_at(&self, x: &BigRational, y: &BigRational) -> CycloScalar {
        for coord in [x, y] {
            if let Some(v) = rational_valuation(coord, self.prime) {
                if v < -(self.scale as i64) {
                    return CycloScalar::zero(self.prime);
                }
            }
        }
        let modulus = ell_pow(self.prime, (self.scale as i64 + self.level) as u32);
        let key = (
            grid_key(x, self.prime, self.scale, &modulus),
            grid_key(y, self.prime, self.scale, &modulus),
        );
        self.terms.get(&key).cloned().unwrap_or_else(|| CycloScalar::zero(self.prime))
    }

    /// Pointwise sum, canonicalised.
    pub fn add(&self, rhs: &Self) -> Self {
        let mut raw = self.term_list();
        raw.extend(rhs.term_list());
        Self::from_terms(self.prime, raw)
    }

    pub fn scale_by(&self, c: &CycloScalar) -> Self {
        let raw = self
            .term_list()
            .into_iter()
            .map(|(coeff, base, n)| (coeff * c.clone(), base, n))
            .collect();
        Self::from_terms(self.prime, raw)
    }

    pub fn negate(&self) -> Self {
        self.scale_by(&CycloScalar::from_rational(self.prime, int(-1)))
    }
}

/// Key of the residue of `x` (an `l`-integral multiple of `l^{-scale}`)
/// modulo the grid: the integer `x * l^scale mod modulus`.
fn grid_key(x: &BigRational, prime: u32, scale: u32, modulus: &BigInt) -> BigInt {
    let scaled = x * BigRational::from(ell_pow(prime, scale));
    // scaled is l-integral; reduce it mod `modulus` using the invertibility
    // of its denominator.
    let inv = mod_inverse(scaled.denom(), modulus).expect("denominator prime to l");
    ((scaled.numer() * inv) % modulus + modulus) % modulus
}

impl PartialEq for SchwartzFn {
    fn eq(&self, other: &Self) -> bool {
        // Refine both onto the common grid and compare coefficientwise.
        let mut raw = self.term_list();
        raw.extend(other.term_list().into_iter().map(|(c, b, n)| (-c, b, n)));
        SchwartzFn::from_terms(self.prime, raw).is_zero()
    }
}

impl Eq for SchwartzFn {}

/// The right-translation action `(g.phi)(v) = phi(v g)` for an invertible
/// rational matrix `g`; the result is again a finite coset-indicator sum.
pub fn act(g: &Mat2, phi: &SchwartzFn) -> SchwartzFn {
    let prime = phi.prime;
    let f = LocalFieldDesc::new(prime, FieldCase::Split);
    assert!(g.e.iter().all(|x| x.is_rational()), "action matrices live over Q_l");
    assert!(!g.det(&f).is_zero(), "action by a singular matrix");
    let g_inv = g.inv(&f);
    let min_v_g = matrix_min_valuation(g, prime);
    let min_v_gi = matrix_min_valuation(&g_inv, prime);
    let mut out = Vec::new();
    for (c, (a, b), n) in phi.term_list() {
        // Preimage of (a,b) + l^n Z^2 under v -> v g is (a,b) g^{-1} + l^n Z^2 g^{-1}.
        let n_out = n + (-min_v_g).max(0);
        let nu = n + min_v_gi; // l^n Z^2 g^{-1} is contained in l^nu Z^2
        let (w0x, w0y) = g_inv.act_row(
            &FieldElt::rational(a.clone()),
            &FieldElt::rational(b.clone()),
            &f,
        );
        let reach = (n_out - nu).max(0) as u32;
        let count = ell_pow(prime, reach);
        let step = rational_pow(&int(prime as i64), nu);
        let mut i = BigInt::zero();
        while &i < &count {
            let mut j = BigInt::zero();
            while &j < &count {
                let wx = &w0x.x + BigRational::from(i.clone()) * &step;
                let wy = &w0y.x + BigRational::from(j.clone()) * &step;
                // Keep the sub-coset iff its image lands back inside the
                // original coset.
                let (ix, iy) = g.act_row(
                    &FieldElt::rational(wx.clone()),
                    &FieldElt::rational(wy.clone()),
                    &f,
                );
                let dx = &ix.x - &a;
                let dy = &iy.x - &b;
                let ok = [dx, dy].iter().all(|d| {
                    rational_valuation(d, prime).map(|v| v >= n).unwrap_or(true)
                });
                if ok {
                    out.push((c.clone(), (wx, wy), n_out));
                }
                j += 1;
            }
            i += 1;
        }
    }
    SchwartzFn::from_terms(prime, out)
}

fn matrix_min_valuation(g: &Mat2, prime: u32) -> i64 {
    g.e.iter()
        .filter_map(|x| rational_valuation(&x.x, prime))
        .min()
        .expect("nonzero matrix")
}

/// The exact Fourier transform
/// `phi^(x, y) = int int e_l(x v - y u) phi(u, v) du dv`
/// with the self-dual measure `vol(Z_l) = 1`. Each input coset indicator
/// maps to a phase-weighted indicator of the dual support, the phase being
/// resolved into constant-phase sub-cosets. The kernel pairs the two
/// coordinates antisymmetrically, so the transform is an exact involution.
pub fn fourier(phi: &SchwartzFn) -> SchwartzFn {
    let prime = phi.prime;
    let mut out = Vec::new();
    for (c, (a, b), n) in phi.term_list() {
        // Dual support l^{-n} Z^2; the phase e_l(x b - y a) is constant on
        // cosets of level max(-v(a), -v(b)).
        let mut depth = n.max(-n);
        for coord in [&a, &b] {
            if let Some(v) = rational_valuation(coord, prime) {
                depth = depth.max(-v);
            }
        }
        let n_out = depth;
        let vol = CycloScalar::from_rational(prime, rational_pow(&int(prime as i64), -2 * n));
        let reach = (n_out + n) as u32;
        let count_i64 = (prime as i64).pow(reach);
        let step = rational_pow(&int(prime as i64), -n);
        // The phase is separable: e_l(x b) in the first slot times
        // e_l(-y a) in the second.
        let px: Vec<CycloScalar> = (0..count_i64)
            .map(|i| e_ell(prime, &(int(i) * &step * &b)))
            .collect();
        let py: Vec<CycloScalar> = (0..count_i64)
            .map(|j| e_ell(prime, &(-(int(j) * &step * &a))))
            .collect();
        for (i, pxi) in px.iter().enumerate() {
            let wx = int(i as i64) * &step;
            for (j, pyj) in py.iter().enumerate() {
                let wy = int(j as i64) * &step;
                out.push((
                    c.clone() * vol.clone() * pxi.clone() * pyj.clone(),
                    (wx.clone(), wy),
                    n_out,
                ));
            }
        }
    }
    SchwartzFn::from_terms(prime, out)
}

/// The standard families.
pub fn standard_phi(tag: StandardPhi, prime: u32) -> SchwartzFn {
    match tag {
        StandardPhi::PhiT(0) => SchwartzFn::from_terms(
            prime,
            vec![(CycloScalar::one(prime), (int(0), int(0)), 0)],
        ),
        StandardPhi::PhiT(t) => {
            // ch(l^t Z x Z^*): unit classes in the second coordinate.
            let m = (prime as i64).pow(t);
            let mut raw = Vec::new();
            for u in 1..m {
                if u % prime as i64 == 0 {
                    continue;
                }
                raw.push((CycloScalar::one(prime), (int(0), int(u)), t as i64));
            }
            SchwartzFn::from_terms(prime, raw)
        }
        StandardPhi::Phi1T(t) => {
            assert!(t >= 1, "phi_{{1,t}} requires t >= 1");
            SchwartzFn::from_terms(
                prime,
                vec![(CycloScalar::one(prime), (int(0), int(1)), t as i64)],
            )
        }
        StandardPhi::Phi01 => standard_phi(StandardPhi::PhiT(1), prime),
    }
}

/// Coset representatives `J` of `K_{H,1}(l^T) / K_{H,1}(l^t)` inside the
/// principal congruence subgroup of level `l^T`, tiling the support box:
/// lower unipotent times diagonal `(1, 1 + l^T d)`.
pub fn phi1_tiling_reps(prime: u32, t_small: u32, t_big: u32) -> Vec<Mat2> {
    assert!(t_small < t_big);
    let count = (prime as i64).pow(t_big - t_small);
    let base = (prime as i64).pow(t_small);
    let mut out = Vec::new();
    for cbar in 0..count {
        for dbar in 0..count {
            let lower = Mat2::lower(FieldElt::from_int(base * cbar));
            let diag = Mat2::diag(FieldElt::one(), FieldElt::from_int(1 + base * dbar));
            let f = LocalFieldDesc::new(prime, FieldCase::Split);
            out.push(lower.mul(&diag, &f));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn one(prime: u32) -> CycloScalar {
        CycloScalar::one(prime)
    }

    #[test]
    fn identity_acts_trivially() {
        for ell in [2u32, 3, 5] {
            for tag in [StandardPhi::PhiT(0), StandardPhi::PhiT(2), StandardPhi::Phi1T(1)] {
                let phi = standard_phi(tag, ell);
                assert_eq!(act(&Mat2::identity(), &phi), phi);
            }
        }
    }

    #[test]
    fn unit_diagonal_stabilises_phi0() {
        for ell in [2u32, 3] {
            let phi0 = standard_phi(StandardPhi::PhiT(0), ell);
            for (u, w) in [(1i64, 1i64), (1, -1), (3, 1), (-1, 5)] {
                if u % ell as i64 == 0 || w % ell as i64 == 0 {
                    continue;
                }
                let g = Mat2::diag(FieldElt::from_int(u), FieldElt::from_int(w));
                assert_eq!(act(&g, &phi0), phi0);
            }
        }
    }

    #[test]
    fn unit_sum_of_phi11_translates_is_phi01() {
        // sum over d in (Z/l)^* of act(diag(1,d), phi_{1,1}) = ch(lZ x Z^*)
        for ell in [2u32, 3, 5] {
            let phi11 = standard_phi(StandardPhi::Phi1T(1), ell);
            let mut acc = SchwartzFn::zero(ell);
            for d in 1..ell as i64 {
                let g = Mat2::diag(FieldElt::one(), FieldElt::from_int(d));
                acc = acc.add(&act(&g, &phi11));
            }
            assert_eq!(acc, standard_phi(StandardPhi::Phi01, ell));
        }
    }

    #[test]
    fn values_on_sample_points() {
        let ell = 3u32;
        let phi = standard_phi(StandardPhi::PhiT(2), ell);
        assert_eq!(phi.value_at(&int(9), &int(2)), one(ell));
        assert!(phi.value_at(&int(3), &int(2)).is_zero());
        assert!(phi.value_at(&int(9), &int(3)).is_zero());
        assert!(phi.value_at(&rat(1, 3), &int(1)).is_zero());
    }

    #[test]
    fn fourier_fixes_unit_box() {
        for ell in [2u32, 3, 5] {
            let phi0 = standard_phi(StandardPhi::PhiT(0), ell);
            assert_eq!(fourier(&phi0), phi0);
        }
    }

    #[test]
    fn fourier_of_small_box_is_scaled_big_box() {
        // ch(lZ x lZ) -> l^{-2} ch(l^{-1}Z x l^{-1}Z)
        for ell in [2u32, 3] {
            let small = SchwartzFn::from_terms(ell, vec![(one(ell), (int(0), int(0)), 1)]);
            let expect = SchwartzFn::from_terms(
                ell,
                vec![(
                    CycloScalar::from_rational(ell, rat(1, (ell as i64).pow(2))),
                    (int(0), int(0)),
                    -1,
                )],
            );
            assert_eq!(fourier(&small), expect);
        }
    }

    #[test]
    fn double_fourier_is_involution_off_origin() {
        // The antisymmetric kernel makes the transform square to the
        // identity; checked by brute evaluation on an off-origin coset,
        // where an identity and a point reflection genuinely differ.
        let ell = 3u32;
        let phi = SchwartzFn::from_terms(ell, vec![(one(ell), (int(1), int(0)), 1)]);
        let double = fourier(&fourier(&phi));
        assert_eq!(double, phi);
        // The reflected function differs, pinning the kernel convention.
        let reflected = act(&Mat2::from_ints(-1, 0, 0, -1), &phi);
        assert_ne!(double, reflected);
    }

    #[test]
    fn double_fourier_on_mixed_corpus() {
        let ell = 2u32;
        let corpus = vec![
            standard_phi(StandardPhi::PhiT(1), ell),
            standard_phi(StandardPhi::Phi1T(2), ell),
            SchwartzFn::from_terms(
                ell,
                vec![
                    (one(ell), (int(1), int(1)), 1),
                    (CycloScalar::from_rational(ell, int(3)), (rat(1, 2), int(0)), 1),
                ],
            ),
        ];
        for phi in corpus {
            assert_eq!(fourier(&fourier(&phi)), phi);
        }
    }

    #[test]
    fn fourier_is_linear() {
        let ell = 3u32;
        let a = standard_phi(StandardPhi::PhiT(1), ell);
        let b = standard_phi(StandardPhi::Phi1T(1), ell);
        let lhs = fourier(&a.add(&b));
        let rhs = fourier(&a).add(&fourier(&b));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn action_composes_with_matrix_product() {
        // (g.phi)(v) = phi(v g), so act(g1, act(g2, phi)) = act(g1 g2, phi).
        let ell = 3u32;
        let f = LocalFieldDesc::new(ell, FieldCase::Split);
        let phi = standard_phi(StandardPhi::Phi1T(1), ell);
        let g1 = Mat2::from_ints(1, 2, 3, 1);
        let g2 = Mat2::from_rationals(int(3), int(1), int(0), rat(1, 3));
        let lhs = act(&g1, &act(&g2, &phi));
        let rhs = act(&g1.mul(&g2, &f), &phi);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn stabiliser_checks_for_standard_families() {
        for ell in [2u32, 3] {
            let elli = ell as i64;
            for t in 1..=2u32 {
                let lt = elli.pow(t);
                let phi_t = standard_phi(StandardPhi::PhiT(t), ell);
                // Samples from K_{H,0}(l^t): c = 0 mod l^t.
                for g in [
                    Mat2::from_ints(1, 1, 0, 1),
                    Mat2::from_ints(2 * elli + 1, 3, lt, 1 + elli),
                    Mat2::from_ints(-1, 0, 2 * lt, 1),
                ] {
                    if g.det(&LocalFieldDesc::new(ell, FieldCase::Split)).valuation(
                        &LocalFieldDesc::new(ell, FieldCase::Split),
                    ) != Some(0)
                    {
                        continue;
                    }
                    assert_eq!(act(&g, &phi_t), phi_t, "l={ell} t={t}");
                }
                let phi_1t = standard_phi(StandardPhi::Phi1T(t), ell);
                // Samples from K_{H,1}(l^t): c = 0, d = 1 mod l^t.
                for g in [
                    Mat2::from_ints(1, 5, 0, 1),
                    Mat2::from_ints(1 + elli, 2, lt, 1 + lt),
                    Mat2::from_ints(-1, 1, 3 * lt, 1 - 2 * lt),
                ] {
                    assert_eq!(act(&g, &phi_1t), phi_1t, "l={ell} t={t}");
                }
            }
        }
    }

    #[test]
    fn phi1_translates_tile_coarser_box() {
        // phi_{1,T} = sum over J of act(k, phi_{1,t}) with J inside the
        // principal congruence subgroup of level l^T.
        for ell in [2u32, 3] {
            for (t_small, t_big) in [(1u32, 2u32), (1, 3), (2, 3)] {
                let target = standard_phi(StandardPhi::Phi1T(t_small), ell);
                let fine = standard_phi(StandardPhi::Phi1T(t_big), ell);
                let mut acc = SchwartzFn::zero(ell);
                for k in phi1_tiling_reps(ell, t_small, t_big) {
                    acc = acc.add(&act(&k, &fine));
                }
                assert_eq!(acc, target, "l={ell} T={t_small} t={t_big}");
            }
        }
    }
}
