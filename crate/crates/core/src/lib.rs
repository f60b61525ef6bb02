// `!(x > 0.0)` is used deliberately so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Matrix geometric means, Heron and Bures-Wasserstein expressions, and
//! majorization checks with explicit numerical margins.
//!
//! Floating-point results are cross-checked against independent routes where
//! one exists; the incomparability counterexamples are certified in exact
//! rational arithmetic by [`exact`].

pub mod error;
pub mod exact;
pub mod linalg;
pub mod majorization;
pub mod means;
pub mod report;
pub mod schur;
pub mod suite;

pub use error::{Error, Result};
