//! Density matrices in the fixed computational basis.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::matfun::{self, hermitian_defect, max_abs};
use crate::{tol, CMat, CVec, Error, RMat, Result};

/// A Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: CMat,
}

/// One violated density-matrix invariant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Violation {
    NotSquare {
        rows: usize,
        cols: usize,
    },
    /// `||ρ - ρ†||_max`.
    NotHermitian {
        asymmetry: f64,
    },
    /// `|tr ρ - 1|`.
    Trace {
        deviation: f64,
    },
    /// Most negative eigenvalue.
    NotPsd {
        min_eigenvalue: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotSquare { rows, cols } => write!(f, "not square ({rows}x{cols})"),
            Violation::NotHermitian { asymmetry } => {
                write!(f, "not Hermitian (max asymmetry {asymmetry:e})")
            }
            Violation::Trace { deviation } => {
                write!(f, "unit trace violated (|tr - 1| = {deviation:e})")
            }
            Violation::NotPsd { min_eigenvalue } => {
                write!(f, "positivity violated (min eigenvalue {min_eigenvalue:e})")
            }
        }
    }
}

/// Result of [`validate`]; empty means the matrix is a valid state.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Checks Hermiticity, unit trace and positivity of a candidate state.
pub fn validate(m: &CMat) -> ValidationReport {
    let mut violations = Vec::new();
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        violations.push(Violation::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
        return ValidationReport { violations };
    }
    let asymmetry = hermitian_defect(m);
    if asymmetry > tol::HERMITIAN {
        violations.push(Violation::NotHermitian { asymmetry });
    }
    let tr = matfun::trace(m);
    let deviation = (tr - Complex64::new(1.0, 0.0)).norm();
    if deviation > tol::TRACE {
        violations.push(Violation::Trace { deviation });
    }
    let min = matfun::hermitian_eig_unchecked(m).min_eigenvalue();
    if min < -tol::PSD_FLOOR {
        violations.push(Violation::NotPsd {
            min_eigenvalue: min,
        });
    }
    ValidationReport { violations }
}

impl DensityMatrix {
    /// Validates and wraps `m`.
    pub fn new(m: CMat) -> Result<Self> {
        let report = validate(&m);
        if !report.is_ok() {
            return Err(Error::InvalidState(report.to_string()));
        }
        Ok(Self { m })
    }

    /// Wraps a matrix that is valid by construction.
    pub(crate) fn from_valid(m: CMat) -> Self {
        Self { m }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    pub fn into_matrix(self) -> CMat {
        self.m
    }

    /// `diag(1/d, ..., 1/d)`.
    pub fn maximally_mixed(d: usize) -> Self {
        Self::from_valid(CMat::identity(d, d).scale(1.0 / d as f64))
    }

    /// Real diagonal state; `probs` must sum to one.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        let v: Vec<Complex64> = probs.iter().map(|&p| Complex64::new(p, 0.0)).collect();
        Self::new(CMat::from_diagonal(&CVec::from_vec(v)))
    }

    pub fn from_bloch(b: BlochVector) -> Self {
        let BlochVector { x, y, z } = b;
        let h = 0.5;
        Self::from_valid(CMat::from_row_slice(
            2,
            2,
            &[
                Complex64::new(h * (1.0 + z), 0.0),
                Complex64::new(h * x, -h * y),
                Complex64::new(h * x, h * y),
                Complex64::new(h * (1.0 - z), 0.0),
            ],
        ))
    }

    /// Rank-one projector `ψψ† / ||ψ||²`.
    pub fn pure(psi: &CVec) -> Result<Self> {
        let norm2 = psi.norm_squared();
        if norm2 == 0.0 || !norm2.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(Self::from_valid((psi * psi.adjoint()).unscale(norm2)))
    }

    /// Entrywise complex conjugate `ρ*` (equal to `ρᵀ`).
    pub fn conjugate(&self) -> Self {
        Self::from_valid(matfun::conj(&self.m))
    }

    /// `(Re ρ, Im ρ)`; the first is symmetric, the second antisymmetric.
    pub fn real_imag_parts(&self) -> (RMat, RMat) {
        (self.m.map(|z| z.re), self.m.map(|z| z.im))
    }

    /// `Re ρ` as a state in its own right.
    pub fn real_part(&self) -> Self {
        Self::from_valid(self.m.map(|z| Complex64::new(z.re, 0.0)))
    }

    pub fn imag_max(&self) -> f64 {
        self.m.iter().fold(0.0, |acc, z| acc.max(z.im.abs()))
    }

    /// `||Im ρ||_max <= tol`.
    pub fn is_real(&self, tol: f64) -> bool {
        self.imag_max() <= tol
    }

    /// Block-diagonal `p ρ₁ ⊕ (1 - p) ρ₂`.
    pub fn direct_sum(p: f64, first: &Self, second: &Self) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
        let (d1, d2) = (first.dim(), second.dim());
        let mut m = CMat::zeros(d1 + d2, d1 + d2);
        m.view_mut((0, 0), (d1, d1)).copy_from(&first.m.scale(p));
        m.view_mut((d1, d1), (d2, d2))
            .copy_from(&second.m.scale(1.0 - p));
        Ok(Self::from_valid(m))
    }

    /// Convex combination `Σ w_j ρ_j`.
    pub fn mixture(parts: &[(f64, &Self)]) -> Result<Self> {
        let d = parts
            .first()
            .map(|(_, s)| s.dim())
            .ok_or(Error::ZeroVector)?;
        let mut m = CMat::zeros(d, d);
        for (w, s) in parts {
            if s.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: s.dim(),
                });
            }
            m += s.m.scale(*w);
        }
        Self::new(m)
    }

    /// Conjugation by a real orthogonal matrix, `Q ρ Qᵀ`.
    pub fn rotate_real(&self, q: &RMat) -> Result<Self> {
        if q.nrows() != self.dim() || q.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: q.nrows(),
            });
        }
        let qc = matfun::real_to_complex(q);
        let out = &qc * &self.m * qc.transpose();
        Ok(Self::from_valid((&out + out.adjoint()).scale(0.5)))
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: StateFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let m = file.to_matrix()?;
        Self::new(m)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&StateFile::from_matrix(&self.m)).expect("finite entries")
    }
}

/// Qubit Bloch vector `(x, y, z)` with `r <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let r = (x * x + y * y + z * z).sqrt();
        if r.is_nan() || r > 1.0 + 1e-12 {
            return Err(Error::BlochNormExceeded(r));
        }
        Ok(Self { x, y, z })
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

/// `Ginibre` state `G G† / tr(G G†)` from a caller-supplied generator.
pub fn random_density_with<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityMatrix {
    let g = CMat::from_fn(d, d, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    });
    let m = &g * g.adjoint();
    let tr = matfun::trace(&m).re;
    let m = m.unscale(tr);
    DensityMatrix::from_valid((&m + m.adjoint()).scale(0.5))
}

/// Seeded Ginibre state; the same seed always yields the same matrix.
pub fn random_density(d: usize, seed: u64) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_density_with(d, &mut rng)
}

/// Ginibre state built from a real Gaussian matrix, so `Im ρ = 0` exactly.
pub fn random_real_density_with<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityMatrix {
    let g = DMatrix::<f64>::from_fn(d, d, |_, _| StandardNormal.sample(rng));
    let m = &g * g.transpose();
    let m = m.unscale(m.trace());
    let m = (&m + m.transpose()).scale(0.5);
    DensityMatrix::from_valid(matfun::real_to_complex(&m))
}

/// On-disk state format: `{"dim": d, "matrix": [[[re, im], ...], ...]}`, row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dim: usize,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl StateFile {
    pub fn from_matrix(m: &CMat) -> Self {
        let matrix = (0..m.nrows())
            .map(|i| {
                (0..m.ncols())
                    .map(|j| [m[(i, j)].re, m[(i, j)].im])
                    .collect()
            })
            .collect();
        Self {
            dim: m.nrows(),
            matrix,
        }
    }

    pub fn to_matrix(&self) -> Result<CMat> {
        let d = self.dim;
        if d == 0 || self.matrix.len() != d || self.matrix.iter().any(|row| row.len() != d) {
            return Err(Error::Parse(format!("matrix shape does not match dim {d}")));
        }
        if self
            .matrix
            .iter()
            .flatten()
            .flatten()
            .any(|x| !x.is_finite())
        {
            return Err(Error::Parse("non-finite matrix entry".into()));
        }
        Ok(CMat::from_fn(d, d, |i, j| {
            let [re, im] = self.matrix[i][j];
            Complex64::new(re, im)
        }))
    }
}

impl From<&DensityMatrix> for StateFile {
    fn from(rho: &DensityMatrix) -> Self {
        Self::from_matrix(rho.matrix())
    }
}

/// Max-entry distance between two matrices.
pub fn max_distance(a: &CMat, b: &CMat) -> f64 {
    max_abs(&(a - b))
}
