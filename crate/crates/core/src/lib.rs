//! Exact dimensionality reduction for adiabatic quantum optimization (AQO)
//! Hamiltonians of the form `H(s) = a(s) H_A + b(s) H_B`, where `H_A` has few
//! distinct (highly degenerate) levels and `H_B` is a short sum of rank-1
//! projectors.
//!
//! * [`numkit`]: dense symmetric eigensolver, pivoted PSD Cholesky and
//!   log-domain combinatorics.
//! * [`reduction`]: per-level Gram orthogonalization, assembly of the
//!   effective block and reconstruction of the full spectrum.
//! * [`models`]: closed-form level data for noisy Grover (both drivers),
//!   tunneling barriers, multi-solution Grover and arbitrary M-level problems.
//! * [`annealing`]: gap profiles, annealing times, repetition-aware
//!   computational time and scaling fits.
//! * [`oracle`]: brute-force `2^n` Hamiltonians for small `n`.
//! * [`cli`]: the `aqo` command-line harness.

pub mod annealing;
pub mod cli;
mod error;
pub mod models;
pub mod numkit;
pub mod oracle;
pub mod reduction;

pub use error::{Error, Result};
