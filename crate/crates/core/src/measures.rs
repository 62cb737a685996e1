//! Imaginarity measures and the distinguishability quantities built from
//! `C_mu(ρ, σ) = tr(ρ^mu σ^(1-mu))`.
//!
//! Entropies use the natural logarithm.

use std::fmt;

use crate::matfun::{self, HermitianEig};
use crate::states::{BlochVector, DensityMatrix};
use crate::{tol, CMat, CVec, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasureId {
    /// `1 - tr[ρ^mu (ρ*)^(1-mu)]`.
    Tsallis,
    /// `||ρ - ρ*||_tr`.
    TraceNorm,
    /// `S(Re ρ) - S(ρ)`.
    RelativeEntropy,
    /// `1 - F(ρ, ρ*)`.
    Fidelity,
}

impl MeasureId {
    pub fn name(self) -> &'static str {
        match self {
            MeasureId::Tsallis => "tsallis",
            MeasureId::TraceNorm => "trace",
            MeasureId::RelativeEntropy => "relent",
            MeasureId::Fidelity => "fidelity",
        }
    }
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureValue {
    pub value: f64,
    pub measure: MeasureId,
    /// `mu` for the Tsallis family.
    pub parameter: Option<f64>,
}

pub(crate) fn check_mu(mu: f64) -> Result<()> {
    if mu > tol::MU_MARGIN && mu < 1.0 - tol::MU_MARGIN {
        Ok(())
    } else {
        Err(Error::MuOutOfRange(mu))
    }
}

fn check_same_dim(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(())
}

/// `tr(ρ^mu σ^(1-mu))` for `mu` in `(0, 1)`.
fn power_overlap(rho: &DensityMatrix, sigma: &DensityMatrix, mu: f64) -> Result<f64> {
    let a = matfun::matrix_power(rho.matrix(), mu)?;
    let b = matfun::matrix_power(sigma.matrix(), 1.0 - mu)?;
    Ok(matfun::trace_of_product(&a, &b).re)
}

/// Tsallis relative entropy `(1 - tr ρ^mu σ^(1-mu)) / (1 - mu)`.
pub fn tsallis_rel_entropy(rho: &DensityMatrix, sigma: &DensityMatrix, mu: f64) -> Result<f64> {
    check_mu(mu)?;
    check_same_dim(rho, sigma)?;
    Ok((1.0 - power_overlap(rho, sigma, mu)?) / (1.0 - mu))
}

/// `M_T,mu(ρ) = 1 - tr[ρ^mu (ρ*)^(1-mu)]`, clamped to `[0, 1]`.
pub fn m_tsallis(rho: &DensityMatrix, mu: f64) -> Result<MeasureValue> {
    check_mu(mu)?;
    let eig = matfun::psd_eig(rho.matrix())?;
    let value = tsallis_from_eig(&eig, mu);
    Ok(MeasureValue {
        value,
        measure: MeasureId::Tsallis,
        parameter: Some(mu),
    })
}

/// The spectrum of `ρ*` equals that of `ρ`, with conjugated eigenvectors, so
/// one decomposition serves both powers.
fn tsallis_from_eig(eig: &HermitianEig, mu: f64) -> f64 {
    let pow = |e: f64| move |l: f64| if l > 0.0 { l.powf(e) } else { 0.0 };
    let a = eig.map(pow(mu));
    let b = matfun::conj(&eig.map(pow(1.0 - mu)));
    let overlap = matfun::trace_of_product(&a, &b).re;
    (1.0 - overlap).clamp(0.0, 1.0)
}

/// Pure-state form `1 - |<ψ|ψ*>|²`; independent of `mu`.
pub fn m_tsallis_pure(psi: &CVec, mu: f64) -> Result<f64> {
    check_mu(mu)?;
    let norm2 = psi.norm_squared();
    if norm2 == 0.0 || !norm2.is_finite() {
        return Err(Error::ZeroVector);
    }
    // <ψ|ψ*> = Σ conj(ψ_j)², whose modulus equals |Σ ψ_j²|.
    let s: num_complex::Complex64 = psi.iter().map(|z| z * z).sum();
    let overlap = s.norm() / norm2;
    Ok((1.0 - overlap * overlap).clamp(0.0, 1.0))
}

/// `||ρ - ρ*||_tr`.
pub fn m_trace(rho: &DensityMatrix) -> Result<MeasureValue> {
    let diff = rho.matrix() - rho.conjugate().matrix();
    Ok(MeasureValue {
        value: matfun::trace_norm(&diff)?,
        measure: MeasureId::TraceNorm,
        parameter: None,
    })
}

fn entropy_of_spectrum(lambda: impl IntoIterator<Item = f64>) -> f64 {
    lambda
        .into_iter()
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.ln())
        .sum()
}

/// Von Neumann entropy in nats, `0 log 0 = 0`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let eig = matfun::psd_eig(rho.matrix())?;
    Ok(entropy_of_spectrum(eig.eigenvalues))
}

/// `S(Re ρ) - S(ρ)`.
pub fn m_rel_entropy(rho: &DensityMatrix) -> Result<MeasureValue> {
    let (re, _) = rho.real_imag_parts();
    let (_, lambda) = matfun::symmetric_real_eig(&re)?;
    let clipped = matfun::clip_spectrum(&lambda, 1.0)?;
    let value = entropy_of_spectrum(clipped) - von_neumann_entropy(rho)?;
    Ok(MeasureValue {
        value: value.max(0.0),
        measure: MeasureId::RelativeEntropy,
        parameter: None,
    })
}

/// Relative entropy of coherence `S(diag ρ) - S(ρ)`.
pub fn relative_entropy_coherence(rho: &DensityMatrix) -> Result<f64> {
    let diag = rho
        .matrix()
        .diagonal()
        .iter()
        .map(|z| z.re)
        .collect::<Vec<_>>();
    Ok(entropy_of_spectrum(diag) - von_neumann_entropy(rho)?)
}

/// Root fidelity `tr √(√ρ σ √ρ)` (unsquared).
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    let s = matfun::matrix_sqrt(rho.matrix())?;
    let inner = &s * sigma.matrix() * &s;
    let inner = (&inner + inner.adjoint()).scale(0.5);
    let eig = matfun::psd_eig(&inner)?;
    Ok(eig.eigenvalues.iter().map(|l| l.sqrt()).sum())
}

/// `1 - F(ρ, ρ*)`.
pub fn m_fidelity(rho: &DensityMatrix) -> Result<MeasureValue> {
    let f = fidelity(rho, &rho.conjugate())?;
    Ok(MeasureValue {
        value: (1.0 - f).clamp(0.0, 1.0),
        measure: MeasureId::Fidelity,
        parameter: None,
    })
}

/// Every measure; the Tsallis one at `mu`.
pub fn all_measures(rho: &DensityMatrix, mu: f64) -> Result<Vec<MeasureValue>> {
    Ok(vec![
        m_tsallis(rho, mu)?,
        m_trace(rho)?,
        m_rel_entropy(rho)?,
        m_fidelity(rho)?,
    ])
}

/// Explicit qubit formula for `M_T,mu` in terms of the Bloch vector.
///
/// The formula has removable singularities on the z axis; there (and at the
/// origin) the generic eigen-path is used instead.
pub fn qubit_closed_form(b: BlochVector, mu: f64) -> Result<f64> {
    check_mu(mu)?;
    let BlochVector { x, y, z } = b;
    let r = b.norm();
    if r <= 1e-8 || r - z.abs() <= 1e-8 {
        return Ok(m_tsallis(&DensityMatrix::from_bloch(b), mu)?.value);
    }
    // r - z and r + z without cancellation.
    let transverse = x * x + y * y;
    let (r_minus_z, r_plus_z) = if z >= 0.0 {
        (transverse / (r + z), r + z)
    } else {
        (r - z, transverse / (r - z))
    };
    let y2 = y * y;
    let lower = (1.0 - r) * ((r - y2 / r_minus_z).powi(2) + x * x * y2 / (r_minus_z * r_minus_z));
    let upper = (1.0 + r) * ((r - y2 / r_plus_z).powi(2) + x * x * y2 / (r_plus_z * r_plus_z));
    let cross = y2
        * ((1.0 - r).powf(mu) * (1.0 + r).powf(1.0 - mu)
            + (1.0 - r).powf(1.0 - mu) * (1.0 + r).powf(mu));
    Ok(1.0 - (lower + upper + cross) / (2.0 * r * r))
}

/// `A(ρ, σ) = tr(√ρ √σ)`.
pub fn affinity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    let a = matfun::matrix_sqrt(rho.matrix())?;
    let b = matfun::matrix_sqrt(sigma.matrix())?;
    Ok(matfun::trace_of_product(&a, &b).re)
}

/// `tr(√ρ - √σ)² = 2(1 - A)`.
pub fn hellinger(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok(2.0 * (1.0 - affinity(rho, sigma)?))
}

/// `A / 2`.
pub fn bhattacharyya(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok(0.5 * affinity(rho, sigma)?)
}

fn support_projector(eig: &HermitianEig) -> CMat {
    eig.map(|l| if l > 0.0 { 1.0 } else { 0.0 })
}

/// `C_mu = tr(ρ^mu σ^(1-mu))` on the closed interval `[0, 1]`; the endpoints
/// use support projectors (`0^0 = 0`).
pub fn chernoff_quantity(rho: &DensityMatrix, sigma: &DensityMatrix, mu: f64) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    if !(0.0..=1.0).contains(&mu) {
        return Err(Error::MuOutOfRange(mu));
    }
    let er = matfun::psd_eig(rho.matrix())?;
    let es = matfun::psd_eig(sigma.matrix())?;
    Ok(chernoff_from_eigs(&er, &es, mu))
}

fn chernoff_from_eigs(er: &HermitianEig, es: &HermitianEig, mu: f64) -> f64 {
    let pow = |e: f64| move |l: f64| if l > 0.0 { l.powf(e) } else { 0.0 };
    let (a, b) = if mu == 0.0 {
        (support_projector(er), es.reconstruct())
    } else if mu == 1.0 {
        (er.reconstruct(), support_projector(es))
    } else {
        (er.map(pow(mu)), es.map(pow(1.0 - mu)))
    };
    matfun::trace_of_product(&a, &b).re
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChernoffBound {
    /// `½ inf_mu C_mu`.
    pub value: f64,
    pub argmin: f64,
}

/// `½ inf_{0<=mu<=1} C_mu` by a 101-point scan followed by golden-section
/// refinement around the best grid point.
pub fn chernoff_bound(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<ChernoffBound> {
    check_same_dim(rho, sigma)?;
    let er = matfun::psd_eig(rho.matrix())?;
    let es = matfun::psd_eig(sigma.matrix())?;
    let c = |mu: f64| chernoff_from_eigs(&er, &es, mu);

    const GRID: usize = 101;
    let mut best = (0.0, c(0.0));
    for i in 1..GRID {
        let mu = i as f64 / (GRID - 1) as f64;
        let v = c(mu);
        if v < best.1 {
            best = (mu, v);
        }
    }
    let step = 1.0 / (GRID - 1) as f64;
    let mut lo = (best.0 - step).max(0.0);
    let mut hi = (best.0 + step).min(1.0);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (c(x1), c(x2));
    for _ in 0..200 {
        if hi - lo <= 1e-8 {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = c(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = c(x2);
        }
        if f1 < best.1 {
            best = (x1, f1);
        }
        if f2 < best.1 {
            best = (x2, f2);
        }
    }
    Ok(ChernoffBound {
        value: 0.5 * best.1,
        argmin: best.0,
    })
}

/// Chernoff bound between `ρ` and `ρ*`. Since `C_mu(ρ, ρ*) = 1 - M_T,mu(ρ)`,
/// this equals `½ (1 - sup_mu M_T,mu(ρ))`.
pub fn chernoff_imaginarity(rho: &DensityMatrix) -> Result<ChernoffBound> {
    chernoff_bound(rho, &rho.conjugate())
}
