//! Finite-dimensional complex Hilbert spaces: states, bases, observables,
//! projectors, the Born rule and unitary evolution.

mod borel;
mod error;
pub mod linalg;
mod operator;
mod state;

pub use borel::{BorelSet, Interval};
pub use error::HilbertError;
pub use linalg::CMatrix;
pub(crate) use operator::check_operator_dim;
pub use operator::{
    event_projector, evolve, evolve_with_hbar, potentia, propagator, rank1_projector,
    spectral_decompose, HermitianOperator, Projector, SpectralComponent,
};
pub use state::{change_of_basis, inner_product, Basis, StateVector};

pub use num_complex::Complex64;

use std::sync::OnceLock;

pub const DEFAULT_MAX_DIM: usize = 8;

/// Environment variable overriding [`DEFAULT_MAX_DIM`].
pub const MAX_DIM_ENV: &str = "PAQS_MAX_DIM";

pub const NORM_TOL: f64 = 1e-9;
pub const HERMITIAN_TOL: f64 = 1e-9;
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Largest supported dimension, read once from `PAQS_MAX_DIM`.
pub fn max_dim() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var(MAX_DIM_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .filter(|&n| n >= 2)
            .unwrap_or(DEFAULT_MAX_DIM)
    })
}
