//! Beta integrals, Mellin–Barnes integrals, the index hypergeometric transform and
//! finite orthogonal systems of Wilson polynomials, each turned into a two-sided
//! numeric check.

pub mod catalog;
pub mod error;
pub mod gamma;
pub mod hypergeometric;
pub mod index_transform;
pub mod mellin_barnes;
pub mod quadrature;
pub mod wilson;

pub use error::{Error, Result};
