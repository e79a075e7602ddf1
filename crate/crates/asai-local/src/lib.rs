//! Exact local computations for GL(2) over p-adic fields: Whittaker models,
//! local zeta integrals as rational functions in `X = l^{-s}`, Hecke
//! double-coset arithmetic, and Asai Euler factors built from Hilbert
//! eigenform Hecke data.
//!
//! Everything is exact: scalars live in the tower
//! `Q ⊂ Q(sqrt(l)) ⊂ Q(sqrt(l), zeta_{l^n})` and all identities are checked
//! as equalities of reduced rational functions, never floating point.

pub mod cli;
pub mod euler;
pub mod hecke;
pub mod local_field;
pub mod principal_series;
pub mod scalar;
pub mod schwartz;
pub mod verify;
pub mod zeta;

pub use scalar::{CycloScalar, RatFuncX, SqrtScalar};
