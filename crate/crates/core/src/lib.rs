//! Gaussian Volterra processes with tempered, power-weighted and logarithmic
//! kernels: exact and asymptotic incremental variances, path simulation and
//! empirical checks of their quasihelix exponents.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod error;
pub mod numerics;
pub mod processes;
pub mod moments;
pub mod theory;
pub mod simulate;
pub mod analyze;
pub mod acceptance;
pub mod report;
pub mod cli;

pub use error::{Error, Result};
