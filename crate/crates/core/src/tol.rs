//! Numerical tolerances shared by every module.
//!
//! Matrix checks are relative to `max(1, ||A||_max)`; on unit-trace states this
//! is the absolute value.

/// Hermiticity / symmetry check on inputs.
pub const HERMITIAN: f64 = 1e-10;

/// Eigenvalues in `[-PSD_FLOOR, 0)` are clipped to zero, anything below is an error.
pub const PSD_FLOOR: f64 = 1e-10;

/// Unit-trace check for density matrices.
pub const TRACE: f64 = 1e-10;

/// Default threshold for `is_real`.
pub const IS_REAL: f64 = 1e-10;

/// Defect PSD floor for real operations.
pub const DEFECT_FLOOR: f64 = 1e-9;

/// Outcomes with probability below this are dropped from outcome decompositions.
pub const OUTCOME_FLOOR: f64 = 1e-12;

/// Eigenvalue floor used when forming `M^{-1/2}` for random channels.
pub const NORMALIZER_FLOOR: f64 = 1e-12;

/// Allowed `mu` interval for the Tsallis family is `(MU_MARGIN, 1 - MU_MARGIN)`.
pub const MU_MARGIN: f64 = 1e-6;

/// Uncertainty-principle floor on the minimum eigenvalue of `V + i Omega`.
pub const UNCERTAINTY: f64 = 1e-8;

/// Symplectic eigenvalues within this distance of 1 are treated as pure modes.
pub const PURE_MODE: f64 = 1e-8;

/// Scale factor `max(1, ||a||_max)` for relative checks.
pub fn scale(max_abs: f64) -> f64 {
    max_abs.max(1.0)
}
