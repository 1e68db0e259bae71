//! Numerical geometric calculus over Euclidean space.
//!
//! The crate provides a dense implementation of the geometric algebra G_n,
//! rectangular k-patches with their tangent and reciprocal frames, the
//! two-sided vector derivative, directed integration by tensor-product
//! quadrature, and checks of the fundamental theorem of geometric calculus
//! together with its classical and monogenic specializations.

pub mod algebra;
pub mod classical;
pub mod derivative;
mod error;
mod fd;
pub mod field;
pub mod identities;
pub mod integrate;
pub mod monogenic;
pub mod patch;
pub mod quadrature;
pub mod report;

pub use algebra::{Blade, Multivector, Signature};
pub use error::{Error, Result};
