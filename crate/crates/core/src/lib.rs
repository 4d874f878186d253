//! Numerical laboratory for holomorphic curves `C -> P^n` omitting the
//! coordinate hyperplanes: characteristic functions, the equal-value locus
//! of the reduced curve, disc potential-theory lemmas, and the explicit
//! growth bound assembled from them.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bound;
pub mod characteristic;
pub mod cli;
pub mod curve;
pub mod error;
pub mod lemmas;
pub mod locus;
pub mod poly;
pub mod quadrature;

pub use curve::{CurveComponent, HolomorphicCurve};
pub use error::{Error, Result};
pub use poly::ComplexPoly;
