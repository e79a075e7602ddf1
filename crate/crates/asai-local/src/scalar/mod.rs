//! The scalar tower: exact rationals, the quadratic extension `Q(sqrt(l))`,
//! cyclotomic numbers `Q(sqrt(l), zeta_{l^n})`, and univariate rational
//! functions in `X = l^{-s}` over those coefficients.

mod cyclo;
mod ratfunc;
mod sqrt;

pub use cyclo::{cyclo_sum, CycloScalar};
pub use ratfunc::{limit_product, LaurentPoly, LimitReport, RatFuncX, ScalarError};
pub use sqrt::SqrtScalar;
pub(crate) use sqrt::rational_pow;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Shorthand for an exact rational from a pair of machine integers.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for an exact integer rational.
pub fn int(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}
