//! Unramified characters and Satake data, closed-form Whittaker values of
//! normalised spherical vectors with their coset-sum oracle, Siegel-section
//! values on the standard Schwartz family, the intertwining scalar, and the
//! reduced invariant pairing.

use thiserror::Error;

use crate::local_field::{additive_char, coset_reps, FieldCase, FieldElt, LocalFieldDesc};
use crate::scalar::{int, rat, CycloScalar, LaurentPoly, RatFuncX, SqrtScalar};
use crate::schwartz::StandardPhi;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PsError {
    #[error("Siegel values are only pinned on the standard untransformed family")]
    UnsupportedSection,
    #[error("closed form needs distinct Satake parameters per place")]
    DegenerateParameters,
}

/// An unramified character twisted by a symbolic power of `|.|^s`: the value
/// at the uniformiser is `base * X^(s_exp)` with `X = l^(-s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnramChar {
    pub base: SqrtScalar,
    pub s_exp: i64,
    /// Marks a ramified finite-order twist; every unit-average against such
    /// a character vanishes, which zeroes the standard Siegel values.
    pub ramified: bool,
}

impl UnramChar {
    pub fn new(base: SqrtScalar, s_exp: i64) -> Self {
        Self { base, s_exp, ramified: false }
    }

    pub fn unramified(base: SqrtScalar) -> Self {
        Self::new(base, 0)
    }

    pub fn trivial(prime: u32) -> Self {
        Self::unramified(SqrtScalar::one(prime))
    }

    pub fn ramified_marker(prime: u32) -> Self {
        Self { base: SqrtScalar::one(prime), s_exp: 0, ramified: true }
    }

    /// `|.|^(k/2)` as a character: value `l^(-k/2)` at the uniformiser.
    pub fn abs_half_power(prime: u32, half_k: i64) -> Self {
        Self::unramified(SqrtScalar::ell_half_power(prime, -half_k))
    }

    /// Value at the uniformiser as a monomial in `X`.
    pub fn value_monomial(&self) -> RatFuncX {
        RatFuncX::monomial(CycloScalar::from_sqrt(self.base.clone()), self.s_exp)
    }

    /// Value at an element of valuation `v`.
    pub fn value_at_valuation(&self, v: i64) -> RatFuncX {
        assert!(v >= 0 || !self.base.is_zero());
        let mut base = self.value_monomial();
        if v < 0 {
            base = base.inv();
        }
        base.pow(v.unsigned_abs() as u32)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self {
            base: self.base.clone() * rhs.base.clone(),
            s_exp: self.s_exp + rhs.s_exp,
            ramified: self.ramified || rhs.ramified,
        }
    }

    pub fn inv(&self) -> Self {
        Self { base: self.base.inv(), s_exp: -self.s_exp, ramified: self.ramified }
    }

    /// Twist by `|.|^(±s)`, realised on the symbolic exponent.
    pub fn s_shift(&self, ds: i64) -> Self {
        Self { base: self.base.clone(), s_exp: self.s_exp + ds, ramified: self.ramified }
    }

    /// `L(chi, j)^{-1} = 1 - chi(l) l^{-j}` as a rational function of `X`,
    /// with the symbolic `s`-twist carried on the `X`-exponent; `1` when the
    /// character is ramified.
    pub fn l_factor_inv(&self, j: i64) -> RatFuncX {
        let prime = self.base.prime;
        if self.ramified {
            return RatFuncX::one(prime);
        }
        let coeff = self.base.clone() * SqrtScalar::ell_power(prime, -j);
        RatFuncX::one(prime) - RatFuncX::monomial(CycloScalar::from_sqrt(coeff), self.s_exp)
    }

    pub fn l_factor(&self, j: i64) -> RatFuncX {
        self.l_factor_inv(j).inv()
    }
}

/// Satake data for the principal series upstairs: individual parameter
/// samples or symmetric functions of them (one pair per place over `l`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatakeData {
    Inert { alpha: SqrtScalar, beta: SqrtScalar },
    Split { alpha1: SqrtScalar, beta1: SqrtScalar, alpha2: SqrtScalar, beta2: SqrtScalar },
    /// Sum and product per place, for data built from Hecke eigenvalues
    /// where the individual roots are never materialised.
    InertSym { sum: SqrtScalar, prod: SqrtScalar },
    SplitSym { sum1: SqrtScalar, prod1: SqrtScalar, sum2: SqrtScalar, prod2: SqrtScalar },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PSParams {
    pub prime: u32,
    pub case: FieldCase,
    pub satake: SatakeData,
}

impl PSParams {
    pub fn inert(prime: u32, alpha: SqrtScalar, beta: SqrtScalar) -> Self {
        Self { prime, case: FieldCase::Inert, satake: SatakeData::Inert { alpha, beta } }
    }

    pub fn split(
        prime: u32,
        alpha1: SqrtScalar,
        beta1: SqrtScalar,
        alpha2: SqrtScalar,
        beta2: SqrtScalar,
    ) -> Self {
        Self {
            prime,
            case: FieldCase::Split,
            satake: SatakeData::Split { alpha1, beta1, alpha2, beta2 },
        }
    }

    /// Central character value at the uniformiser.
    pub fn central_value(&self) -> SqrtScalar {
        match &self.satake {
            SatakeData::Inert { alpha, beta } => alpha.clone() * beta.clone(),
            SatakeData::Split { alpha1, beta1, alpha2, beta2 } => {
                alpha1.clone() * beta1.clone() * alpha2.clone() * beta2.clone()
            }
            SatakeData::InertSym { prod, .. } => prod.clone(),
            SatakeData::SplitSym { prod1, prod2, .. } => prod1.clone() * prod2.clone(),
        }
    }

    /// `(sum, prod)` of the Satake pair at each place.
    pub fn symmetric_pairs(&self) -> Vec<(SqrtScalar, SqrtScalar)> {
        match &self.satake {
            SatakeData::Inert { alpha, beta } => {
                vec![(alpha.clone() + beta.clone(), alpha.clone() * beta.clone())]
            }
            SatakeData::Split { alpha1, beta1, alpha2, beta2 } => vec![
                (alpha1.clone() + beta1.clone(), alpha1.clone() * beta1.clone()),
                (alpha2.clone() + beta2.clone(), alpha2.clone() * beta2.clone()),
            ],
            SatakeData::InertSym { sum, prod } => vec![(sum.clone(), prod.clone())],
            SatakeData::SplitSym { sum1, prod1, sum2, prod2 } => {
                vec![(sum1.clone(), prod1.clone()), (sum2.clone(), prod2.clone())]
            }
        }
    }

    /// Individual parameter pairs, when sampled values are present.
    pub fn individual_pairs(&self) -> Option<Vec<(SqrtScalar, SqrtScalar)>> {
        match &self.satake {
            SatakeData::Inert { alpha, beta } => Some(vec![(alpha.clone(), beta.clone())]),
            SatakeData::Split { alpha1, beta1, alpha2, beta2 } => Some(vec![
                (alpha1.clone(), beta1.clone()),
                (alpha2.clone(), beta2.clone()),
            ]),
            _ => None,
        }
    }
}

/// The geometric-sum factor `(alpha^(m+1) - beta^(m+1)) / (alpha - beta)`,
/// with the limiting value `(m+1) alpha^m` when the parameters collide.
pub fn whittaker_geometric(alpha: &SqrtScalar, beta: &SqrtScalar, m: i64) -> SqrtScalar {
    let prime = alpha.prime;
    if m < 0 {
        return SqrtScalar::zero(prime);
    }
    let m = m as u32;
    if alpha == beta {
        return SqrtScalar::from_int(prime, m as i64 + 1) * alpha.pow(m);
    }
    let num = alpha.pow(m + 1) - beta.pow(m + 1);
    let den = alpha.clone() - beta.clone();
    num * den.inv()
}

/// Normalised spherical Whittaker value for a single `GL_2` factor with
/// residue size `q = l^deg` at an element of valuation `m`:
/// `0` for `m < 0`, else `q^(-m/2) (alpha^(m+1)-beta^(m+1))/(alpha-beta)`.
pub fn whittaker_value_single(
    alpha: &SqrtScalar,
    beta: &SqrtScalar,
    deg: u32,
    m: i64,
) -> SqrtScalar {
    let prime = alpha.prime;
    if m < 0 {
        return SqrtScalar::zero(prime);
    }
    let norm = SqrtScalar::ell_half_power(prime, -(deg as i64) * m);
    norm * whittaker_geometric(alpha, beta, m)
}

/// Normalised spherical Whittaker value of the group upstairs, evaluated on
/// the diagonally embedded `diag(l^m, 1)`: the inert value with `q = l^2`,
/// or the product of the two degree-1 values in the split case.
pub fn whittaker_value(params: &PSParams, m: i64) -> SqrtScalar {
    let prime = params.prime;
    if m < 0 {
        return SqrtScalar::zero(prime);
    }
    let pairs = params.individual_pairs().expect("whittaker values need sampled parameters");
    match params.case {
        FieldCase::Inert => whittaker_value_single(&pairs[0].0, &pairs[0].1, 2, m),
        FieldCase::Split => {
            whittaker_value_single(&pairs[0].0, &pairs[0].1, 1, m)
                * whittaker_value_single(&pairs[1].0, &pairs[1].1, 1, m)
        }
    }
}

/// Closed form for the Whittaker value of the `U(l)`-translated spherical
/// vector at `diag(y, 1)` with `v(y) = m`: zero below the support shell,
/// `l^2` times the value one shell deeper otherwise.
pub fn whittaker_u_action(params: &PSParams, m: i64) -> SqrtScalar {
    let prime = params.prime;
    if m < 0 {
        return SqrtScalar::zero(prime);
    }
    SqrtScalar::from_int(prime, (prime as i64).pow(2)) * whittaker_value(params, m + 1)
}

/// Coset-sum oracle for the same quantity: the `U(l)` decomposition gives
/// `sum_u Psi(y u) W(diag(l y, 1))` with the sum running over `O/lO`
/// (pairs with opposite character signs in the split case); `y = c l^m` for
/// a unit `c`.
pub fn whittaker_u_action_oracle(params: &PSParams, m: i64, unit: &FieldElt) -> CycloScalar {
    let prime = params.prime;
    let w_next = if m + 1 < 0 {
        SqrtScalar::zero(prime)
    } else {
        whittaker_value(params, m + 1)
    };
    if w_next.is_zero() {
        return CycloScalar::zero(prime);
    }
    let y = unit.scale(&crate::scalar::rational_pow(&int(prime as i64), m));
    let char_sum = match params.case {
        FieldCase::Inert => {
            let f = LocalFieldDesc::new(prime, FieldCase::Inert);
            let mut acc = CycloScalar::zero(prime);
            for u in coset_reps(&f, 1) {
                acc = acc + additive_char(&f, &y.mul(&u, &f));
            }
            acc
        }
        FieldCase::Split => {
            let f = LocalFieldDesc::new(prime, FieldCase::Split);
            let mut plus = CycloScalar::zero(prime);
            let mut minus = CycloScalar::zero(prime);
            for u in coset_reps(&f, 1) {
                plus = plus + additive_char(&f, &y.mul(&u, &f));
                minus = minus + additive_char(&f, &y.mul(&u, &f).neg());
            }
            plus * minus
        }
    };
    char_sum * CycloScalar::from_sqrt(w_next)
}

/// A Siegel section attached to a standard Schwartz function: the section
/// `f_{phi, chi, psi}` when `hatted` is false, `f_{phi^, chi, psi}` when it
/// is true. Values at the identity are pinned on the untransformed family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiegelSection {
    pub phi: StandardPhi,
    pub hatted: bool,
    pub chi: UnramChar,
    pub psi: UnramChar,
}

impl SiegelSection {
    pub fn new(phi: StandardPhi, chi: UnramChar, psi: UnramChar) -> Self {
        Self { phi, hatted: false, chi, psi }
    }

    /// The section entering the equivariant Schwartz-to-series map, which is
    /// attached to the Fourier transform of its argument.
    pub fn hatted(phi: StandardPhi, chi: UnramChar, psi: UnramChar) -> Self {
        Self { phi, hatted: true, chi, psi }
    }

    /// Conductor exponent of the section's support on the integral points:
    /// the restriction is a multiple of `ch(K_{H,0}(l^t))` for this `t`.
    pub fn conductor_t(&self) -> u32 {
        match self.phi {
            StandardPhi::PhiT(t) => t,
            StandardPhi::Phi01 => 1,
            StandardPhi::Phi1T(t) => t,
        }
    }

    /// Exact value at the identity: `1` for the full unit box, otherwise
    /// `L(chi psi^{-1}, 1)^{-1}`; zero for a ramified twist. The hat of the
    /// unit box is itself, so the transformed section is supported there
    /// too; transformed sections of deeper conductor are not pinned.
    pub fn value_at_identity(&self) -> Result<RatFuncX, PsError> {
        let prime = self.chi.base.prime;
        let effective_t = self.conductor_t();
        if self.hatted && effective_t > 0 {
            return Err(PsError::UnsupportedSection);
        }
        if matches!(self.phi, StandardPhi::Phi1T(_)) {
            // No closed value is available for the narrow family.
            return Err(PsError::UnsupportedSection);
        }
        if self.chi.ramified || self.psi.ramified {
            return Ok(RatFuncX::zero(prime));
        }
        if effective_t == 0 {
            return Ok(RatFuncX::one(prime));
        }
        Ok(self.chi.mul(&self.psi.inv()).l_factor_inv(1))
    }

    /// The intertwining operator on Siegel sections: swaps the characters,
    /// toggles the transform, and returns the scalar
    /// `L(chi psi^{-1}, 1)^{-1}` (the local epsilon factor is 1 here), with
    /// the `s`-shift carried by the characters' symbolic exponents.
    pub fn intertwine(&self) -> (RatFuncX, SiegelSection) {
        let scalar = self.chi.mul(&self.psi.inv()).l_factor_inv(1);
        let flipped = SiegelSection {
            phi: self.phi,
            hatted: !self.hatted,
            chi: self.psi.clone(),
            psi: self.chi.clone(),
        };
        (scalar, flipped)
    }
}

/// Index of `K_{H,0}(l^t)` in the integral points: `1` for `t = 0`, else
/// `l^(t-1) (l + 1)`.
pub fn k0_index(prime: u32, t: u32) -> i64 {
    if t == 0 {
        1
    } else {
        (prime as i64).pow(t - 1) * (prime as i64 + 1)
    }
}

/// The invariant pairing after reduction to the integral points: with the
/// section's restriction a scalar multiple of `ch(K_{H,0}(l^t))` and the
/// functional constant there, the integral collapses to
/// `f(1) * vol(K_{H,0}(l^t)) * z(1)`.
pub fn pairing_reduced(section: &SiegelSection, z1: &RatFuncX) -> Result<RatFuncX, PsError> {
    let f1 = section.value_at_identity()?;
    let prime = section.chi.base.prime;
    let vol = RatFuncX::from_sqrt(SqrtScalar::from_frac(
        prime,
        1,
        k0_index(prime, section.conductor_t()),
    ));
    Ok(f1 * vol * z1.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(prime: u32, n: i64) -> SqrtScalar {
        SqrtScalar::from_int(prime, n)
    }

    #[test]
    fn whittaker_values_basic() {
        // m = -1 vanishes; m = 0 is the normalisation 1.
        let p = PSParams::inert(3, s(3, 1), s(3, 2));
        assert!(whittaker_value(&p, -1).is_zero());
        assert_eq!(whittaker_value(&p, 0), SqrtScalar::one(3));
        let q = PSParams::split(3, s(3, 1), s(3, 2), s(3, 3), s(3, 5));
        assert!(whittaker_value(&q, -1).is_zero());
        assert_eq!(whittaker_value(&q, 0), SqrtScalar::one(3));
    }

    #[test]
    fn whittaker_single_hand_value() {
        // q = 5, alpha = 2, beta = 3, m = 2: 5^{-1} (8 - 27)/(2 - 3) = 19/5.
        let v = whittaker_value_single(&s(5, 2), &s(5, 3), 1, 2);
        assert_eq!(v, SqrtScalar::from_frac(5, 19, 5));
    }

    #[test]
    fn whittaker_split_odd_shell_carries_surd_per_factor() {
        // Each degree-1 factor contributes l^(-m/2); the embedded product is
        // rational, the single factor at odd m is not.
        let v = whittaker_value_single(&s(2, 1), &s(2, 3), 1, 1);
        assert!(!v.is_rational());
        let p = PSParams::split(2, s(2, 1), s(2, 3), s(2, 1), s(2, 5));
        assert!(whittaker_value(&p, 1).is_rational());
    }

    #[test]
    fn u_action_hand_value() {
        // l = 3 inert, alpha = 1, beta = 2, m = 0:
        // 9 * W(1) = 9 * 3^{-1} (1 - 4)/(1 - 2) = 9.
        let p = PSParams::inert(3, s(3, 1), s(3, 2));
        assert_eq!(whittaker_u_action(&p, 0), s(3, 9));
    }

    #[test]
    fn u_action_matches_oracle_on_grid() {
        for ell in [2u32, 3, 5] {
            let params_list = vec![
                PSParams::inert(ell, s(ell, 1), s(ell, 2)),
                PSParams::inert(ell, SqrtScalar::from_frac(ell, 1, 2), s(ell, -3)),
                PSParams::split(ell, s(ell, 1), s(ell, 2), s(ell, 3), s(ell, 5)),
                PSParams::split(
                    ell,
                    SqrtScalar::from_frac(ell, 2, 3),
                    s(ell, -1),
                    s(ell, 4),
                    SqrtScalar::from_frac(ell, -1, 2),
                ),
            ];
            for params in &params_list {
                for m in -2..=3i64 {
                    let closed = CycloScalar::from_sqrt(whittaker_u_action(params, m));
                    for unit in [FieldElt::one(), FieldElt::from_int(-1)] {
                        let oracle = whittaker_u_action_oracle(params, m, &unit);
                        assert_eq!(closed, oracle, "l={ell} m={m} {params:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn u_action_oracle_vanishing_shell_uses_character_sum() {
        // At m = -1 the Whittaker factor is nonzero but the full character
        // sum kills the oracle; both sides are zero.
        let p = PSParams::inert(3, s(3, 1), s(3, 2));
        let oracle = whittaker_u_action_oracle(&p, -1, &FieldElt::one());
        assert!(oracle.is_zero());
        assert!(whittaker_u_action(&p, -1).is_zero());
    }

    #[test]
    fn geometric_recursion_shifted_indices() {
        // (alpha - beta) S_{m+1} = alpha^{m+2} - beta^{m+2}.
        let (a, b) = (s(5, 2), s(5, 7));
        for m in 0..6i64 {
            let lhs = (a.clone() - b.clone()) * whittaker_geometric(&a, &b, m + 1);
            let rhs = a.pow(m as u32 + 2) - b.pow(m as u32 + 2);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn degenerate_equal_parameters_limit() {
        let v = whittaker_geometric(&s(3, 2), &s(3, 2), 3);
        // (m+1) alpha^m = 4 * 8
        assert_eq!(v, s(3, 32));
    }

    #[test]
    fn siegel_values_on_standard_family() {
        let prime = 5;
        let chi = UnramChar::unramified(s(prime, 3));
        let psi = UnramChar::unramified(s(prime, 2));
        let sec0 = SiegelSection::new(StandardPhi::PhiT(0), chi.clone(), psi.clone());
        assert_eq!(sec0.value_at_identity().unwrap(), RatFuncX::one(prime));
        let sec2 = SiegelSection::new(StandardPhi::PhiT(2), chi.clone(), psi.clone());
        // 1 - (3/2) * 5^{-1} = 7/10
        let expected = RatFuncX::from_sqrt(SqrtScalar::from_frac(prime, 7, 10));
        assert_eq!(sec2.value_at_identity().unwrap(), expected);
        let nar = SiegelSection::new(StandardPhi::Phi1T(1), chi, psi);
        assert_eq!(nar.value_at_identity().unwrap_err(), PsError::UnsupportedSection);
    }

    #[test]
    fn ramified_twist_kills_standard_values() {
        let prime = 3;
        let chi = UnramChar::ramified_marker(prime);
        let psi = UnramChar::unramified(s(prime, 2));
        for tag in [StandardPhi::PhiT(0), StandardPhi::PhiT(1)] {
            let sec = SiegelSection::new(tag, chi.clone(), psi.clone());
            assert!(sec.value_at_identity().unwrap().is_zero());
        }
    }

    #[test]
    fn intertwine_swaps_and_scales() {
        let prime = 3;
        // chi = c X, psi = d X^{-1} with c = 2, d = 5.
        let chi = UnramChar::new(s(prime, 2), 1);
        let psi = UnramChar::new(s(prime, 5), -1);
        let sec = SiegelSection::hatted(StandardPhi::PhiT(0), chi.clone(), psi.clone());
        let (scalar, flipped) = sec.intertwine();
        // L(chi psi^{-1}, 1)^{-1} = 1 - (2/5) 3^{-1} X^2.
        let expected = RatFuncX::one(prime)
            - RatFuncX::monomial(
                CycloScalar::from_sqrt(SqrtScalar::from_frac(prime, 2, 15)),
                2,
            );
        assert_eq!(scalar, expected);
        assert!(!flipped.hatted);
        assert_eq!(flipped.chi, psi);
        assert_eq!(flipped.psi, chi);
        // Doubly transformed standard sections return to the pinned family.
        let (scalar2, back) = flipped.intertwine();
        assert!(back.hatted);
        assert_eq!(back.phi, StandardPhi::PhiT(0));
        // The two scalars multiply to L(chi/psi,1)^{-1} L(psi/chi,1)^{-1}.
        let prod = scalar * scalar2;
        let l1 = chi.mul(&psi.inv()).l_factor_inv(1);
        let l2 = psi.mul(&chi.inv()).l_factor_inv(1);
        assert_eq!(prod, l1 * l2);
    }

    #[test]
    fn pairing_volumes() {
        assert_eq!(k0_index(3, 0), 1);
        assert_eq!(k0_index(3, 1), 4);
        assert_eq!(k0_index(2, 2), 6);
        let prime = 3;
        let chi = UnramChar::unramified(s(prime, 2));
        let psi = UnramChar::unramified(s(prime, 1));
        let sec = SiegelSection::new(StandardPhi::PhiT(1), chi, psi);
        let z1 = RatFuncX::from_sqrt(s(prime, 8));
        // f(1) * (1/4) * 8 with f(1) = 1 - 2/3 = 1/3.
        let got = pairing_reduced(&sec, &z1).unwrap();
        assert_eq!(got, RatFuncX::from_sqrt(SqrtScalar::from_frac(prime, 2, 3)));
    }

    #[test]
    fn pairing_is_bilinear() {
        let prime = 2;
        let chi = UnramChar::unramified(s(prime, 3));
        let psi = UnramChar::unramified(s(prime, 1));
        let sec = SiegelSection::new(StandardPhi::PhiT(1), chi, psi);
        let z1 = RatFuncX::from_sqrt(s(prime, 4));
        let z2 = RatFuncX::from_sqrt(SqrtScalar::from_frac(prime, 1, 3));
        let lhs = pairing_reduced(&sec, &(z1.clone() + z2.clone())).unwrap();
        let rhs = pairing_reduced(&sec, &z1).unwrap() + pairing_reduced(&sec, &z2).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn char_monomials_and_l_factors() {
        let prime = 5;
        let chi = UnramChar::new(s(prime, 2), 1);
        let v = chi.value_at_valuation(2);
        assert_eq!(v, RatFuncX::monomial(CycloScalar::from_rational(prime, int(4)), 2));
        let vm = chi.value_at_valuation(-1);
        assert_eq!(
            vm,
            RatFuncX::monomial(CycloScalar::from_rational(prime, rat(1, 2)), -1)
        );
        // L factor of the trivial character at 1: (1 - 1/5)^{-1} = 5/4.
        let triv = UnramChar::trivial(prime);
        let inv = triv.l_factor_inv(1);
        assert_eq!(inv, RatFuncX::from_sqrt(SqrtScalar::from_frac(prime, 4, 5)));
    }
}
