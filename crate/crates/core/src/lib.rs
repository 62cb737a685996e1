//! Imaginarity measures for quantum states.
//!
//! The crate computes how far a density matrix is from being real in a fixed
//! reference basis. The central quantity is the Tsallis-divergence measure
//!
//! ```text
//! M_T,mu(rho) = 1 - tr[ rho^mu (rho*)^(1-mu) ],   mu in (0, 1)
//! ```
//!
//! alongside the trace-norm, relative-entropy and fidelity measures. Bosonic
//! Gaussian states are handled directly from their mean vector and covariance
//! matrix (see [`gaussian`]), with a truncated Fock-space construction kept
//! around as an independent cross-check.
//!
//! Modules:
//!
//! - [`matfun`]: Hermitian eigensolver, fractional powers, trace norm, real PSD factors.
//! - [`states`]: density matrices, Bloch vectors, conjugation, direct sums, random states.
//! - [`channels`]: real quantum operations, completion to channels, random real channels.
//! - [`measures`]: the imaginarity measures and related distinguishability quantities.
//! - [`gaussian`]: Williamson decomposition, Gaussian powers, overlaps and the Gaussian measure.

#![forbid(unsafe_code)]

pub mod channels;
pub mod error;
pub mod gaussian;
pub mod matfun;
pub mod measures;
pub mod states;
pub mod tol;

pub use error::{Error, Result};

/// Complex matrix type used throughout.
pub type CMat = nalgebra::DMatrix<num_complex::Complex64>;
/// Real matrix type used throughout.
pub type RMat = nalgebra::DMatrix<f64>;
/// Complex column vector.
pub type CVec = nalgebra::DVector<num_complex::Complex64>;
/// Real column vector.
pub type RVec = nalgebra::DVector<f64>;

pub use num_complex::Complex64;
