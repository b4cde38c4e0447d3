//! Average and typical entanglement entropy of random pure states.
//!
//! Six state ensembles are covered: general pure states and pure fermionic
//! Gaussian states, each with (1) arbitrary particle number, (2) fixed
//! particle number, and (3) a binomially weighted average over particle
//! sectors. For every ensemble the crate provides exact finite-size closed
//! forms for the mean and variance of the bipartite entanglement entropy,
//! large-volume expansions (including the double-scaling resolutions of the
//! Kronecker-delta terms at the critical subsystem fractions), reproducible
//! Monte Carlo samplers over the matching random-matrix ensembles, and
//! eigenstate pipelines for desk-scale random and physical Hamiltonians.

pub mod asymptotics;
pub mod closedform;
pub mod ensembles;
pub mod entropy;
pub mod hamiltonians;
pub mod quadrature;
pub mod specfun;
pub mod spectral;
pub mod validate;

mod linalg;

pub use linalg::set_blas_threads;
pub use specfun::log_binomial as specfun_log_binomial;
pub use linalg::{eigh as linalg_eigh, eigh_c as linalg_eigh_c};
pub use linalg::{eigvalsh as linalg_eigvalsh, eigvalsh_c as linalg_eigvalsh_c};

use thiserror::Error;

/// Errors surfaced by operations with restricted domains.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
