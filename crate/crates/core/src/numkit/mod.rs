//! Dense symmetric linear algebra and log-domain combinatorics.

mod cholesky;
mod eigen;
mod logspace;
mod matrix;

pub use cholesky::{pivoted_psd_cholesky, CholFactor, DEFAULT_TOL};
pub use eigen::{eigh, eigvalsh, Eigh};
pub use logspace::{binomial, log_binomial, signed_logsumexp, SignedLogReal, CANCELLATION_TOL};
pub use matrix::SymMatrix;
