//! Dense matrix kernels: Hermitian eigendecomposition, fractional powers,
//! trace norm and real PSD factorization.
//!
//! Everything here is a pure function of its inputs. Eigensolvers are the
//! deterministic implicit-QR routines from `nalgebra`.

use nalgebra::{linalg::SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::{tol, CMat, Error, RMat, Result};

/// Spectral decomposition `H = U diag(eigenvalues) U†` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unitary matrix whose columns are the eigenvectors.
    pub eigenvectors: CMat,
}

impl HermitianEig {
    /// Rebuilds `U diag(f(λ)) U†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> CMat {
        let mut scaled = self.eigenvectors.clone();
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            scaled.column_mut(j).scale_mut(w);
        }
        scaled * self.eigenvectors.adjoint()
    }

    pub fn reconstruct(&self) -> CMat {
        self.map(|x| x)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

pub fn max_abs(a: &CMat) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

pub fn max_abs_real(a: &RMat) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `||A - A†||_max`.
pub fn hermitian_defect(a: &CMat) -> f64 {
    let n = a.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `||A - Aᵀ||_max`.
pub fn symmetric_defect(a: &RMat) -> f64 {
    let n = a.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    worst
}

pub(crate) fn ensure_square(rows: usize, cols: usize) -> Result<()> {
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    Ok(())
}

pub fn real_to_complex(a: &RMat) -> CMat {
    a.map(|x| Complex64::new(x, 0.0))
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eig(h: &CMat) -> Result<HermitianEig> {
    ensure_square(h.nrows(), h.ncols())?;
    let asym = hermitian_defect(h);
    if asym > tol::HERMITIAN * tol::scale(max_abs(h)) {
        return Err(Error::NotHermitian(asym));
    }
    Ok(hermitian_eig_unchecked(h))
}

/// Same as [`hermitian_eig`] without the Hermiticity check; the input is
/// symmetrized first.
pub(crate) fn hermitian_eig_unchecked(h: &CMat) -> HermitianEig {
    let n = h.nrows();
    if n == 0 {
        return HermitianEig {
            eigenvalues: Vec::new(),
            eigenvectors: CMat::zeros(0, 0),
        };
    }
    let sym = (h + h.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&j| eig.eigenvalues[j]).collect();
    let eigenvectors = CMat::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    HermitianEig {
        eigenvalues,
        eigenvectors,
    }
}

/// Eigenvalues of a PSD spectrum after clipping: values in `[-PSD_FLOOR, 0)`
/// and values below the numerical rank threshold `n·ε·λ_max` become 0.
pub(crate) fn clip_spectrum(eigenvalues: &[f64], scale: f64) -> Result<Vec<f64>> {
    let floor = tol::PSD_FLOOR * scale;
    if let Some(&min) = eigenvalues.first() {
        if min < -floor {
            return Err(Error::NotPsd(min));
        }
    }
    let lmax = eigenvalues.iter().copied().fold(0.0, f64::max);
    let rank_cut = eigenvalues.len() as f64 * f64::EPSILON * lmax;
    Ok(eigenvalues
        .iter()
        .map(|&l| if l <= rank_cut { 0.0 } else { l })
        .collect())
}

/// Eigendecomposition with the PSD check applied and the spectrum clipped.
pub fn psd_eig(a: &CMat) -> Result<HermitianEig> {
    let mut eig = hermitian_eig(a)?;
    eig.eigenvalues = clip_spectrum(&eig.eigenvalues, tol::scale(max_abs(a)))?;
    Ok(eig)
}

/// `A^mu` for Hermitian PSD `A` and `mu` in `(0, 1]`, with `0^mu = 0`.
pub fn matrix_power(a: &CMat, mu: f64) -> Result<CMat> {
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(Error::MuOutOfRange(mu));
    }
    let eig = psd_eig(a)?;
    Ok(eig.map(|l| if l > 0.0 { l.powf(mu) } else { 0.0 }))
}

pub fn matrix_sqrt(a: &CMat) -> Result<CMat> {
    let eig = psd_eig(a)?;
    Ok(eig.map(|l| l.sqrt()))
}

/// Sum of singular values.
pub fn trace_norm(a: &CMat) -> Result<f64> {
    ensure_square(a.nrows(), a.ncols())?;
    if a.nrows() == 0 {
        return Ok(0.0);
    }
    let svd = SVD::new(a.clone(), false, false);
    Ok(svd.singular_values.iter().sum())
}

/// Real symmetric eigendecomposition returned as `(Q, λ)` with
/// `Q · Sym · Qᵀ = diag(λ)`, `λ` ascending. Rows of `Q` are eigenvectors.
pub fn symmetric_real_eig(sym: &RMat) -> Result<(RMat, Vec<f64>)> {
    ensure_square(sym.nrows(), sym.ncols())?;
    let asym = symmetric_defect(sym);
    if asym > tol::HERMITIAN * tol::scale(max_abs_real(sym)) {
        return Err(Error::NotSymmetric(asym));
    }
    Ok(symmetric_real_eig_unchecked(sym))
}

pub(crate) fn symmetric_real_eig_unchecked(sym: &RMat) -> (RMat, Vec<f64>) {
    let n = sym.nrows();
    if n == 0 {
        return (RMat::zeros(0, 0), Vec::new());
    }
    let s = (sym + sym.transpose()).scale(0.5);
    let eig = SymmetricEigen::new(s);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let lambda = order.iter().map(|&j| eig.eigenvalues[j]).collect();
    let q = RMat::from_fn(n, n, |i, j| eig.eigenvectors[(j, order[i])]);
    (q, lambda)
}

/// Real `K'` with `K'ᵀ K' = M` for real symmetric PSD `M`.
///
/// Uses the symmetric square root `K' = diag(√λ) Q`, which handles rank
/// deficiency without pivoting.
pub fn real_psd_factor(m: &RMat) -> Result<RMat> {
    let (q, lambda) = symmetric_real_eig(m)?;
    let clipped = clip_spectrum(&lambda, tol::scale(max_abs_real(m)))?;
    let mut k = q;
    for (i, l) in clipped.iter().enumerate() {
        k.row_mut(i).scale_mut(l.sqrt());
    }
    Ok(k)
}

/// Real symmetric function `Qᵀ diag(f(λ)) Q` of a real symmetric matrix.
pub(crate) fn real_symmetric_map(sym: &RMat, f: impl Fn(f64) -> f64) -> RMat {
    let (q, lambda) = symmetric_real_eig_unchecked(sym);
    let mut scaled = q.clone();
    for (i, l) in lambda.iter().enumerate() {
        scaled.row_mut(i).scale_mut(f(*l));
    }
    q.transpose() * scaled
}

/// Entrywise complex conjugate.
pub fn conj(a: &CMat) -> CMat {
    a.map(|z| z.conj())
}

pub fn trace(a: &CMat) -> Complex64 {
    a.diagonal().iter().sum()
}

/// `tr(A B)` without forming the product.
pub fn trace_of_product(a: &CMat, b: &CMat) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}
