//! Imaginarity of bosonic Gaussian states from their first and second moments.
//!
//! Quadratures follow `q = a + a†`, `p = -i(a - a†)` and are ordered
//! `(q₁, p₁, ..., q_N, p_N)`. The vacuum has covariance `I₂`, so symplectic
//! eigenvalues satisfy `ν >= 1` with equality for pure modes.
//!
//! For a mode with symplectic eigenvalue `ν` write `t = (ν - 1)/(ν + 1)`
//! (`= e^{-η}` in thermal language). Then `ρ^mu / tr ρ^mu` is again Gaussian
//! with the same mean, the same symplectic matrix and eigenvalues
//! `(1 + t^mu)/(1 - t^mu)`, and `tr ρ^mu = Π (1 - t)^mu / (1 - t^mu)`.
//! Combined with the Gaussian overlap formula this gives `M_T,mu` in closed
//! form; all prefactors are accumulated in log space.

use std::f64::consts::LN_2;
use std::fmt;

use nalgebra::Cholesky;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::matfun::{self, max_abs_real, symmetric_defect};
use crate::measures::{check_mu, MeasureId, MeasureValue};
use crate::states::DensityMatrix;
use crate::{tol, CMat, Error, RMat, RVec, Result};

/// Quadrature convention tag written into Gaussian state files.
pub const CONVENTION: &str = "q=a+ad, p=-i(a-ad)";

/// `Ω = ⊕ [[0, 1], [-1, 0]]`.
pub fn symplectic_form(modes: usize) -> RMat {
    let mut omega = RMat::zeros(2 * modes, 2 * modes);
    for l in 0..modes {
        omega[(2 * l, 2 * l + 1)] = 1.0;
        omega[(2 * l + 1, 2 * l)] = -1.0;
    }
    omega
}

/// `O = ⊕ diag(1, -1)`, the phase-space image of complex conjugation.
pub fn conjugation_reflection(modes: usize) -> RMat {
    RMat::from_diagonal(&RVec::from_fn(2 * modes, |i, _| {
        if i % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }))
}

/// Negates every p component.
fn reflect_vec(v: &RVec) -> RVec {
    RVec::from_fn(v.len(), |i, _| if i % 2 == 0 { v[i] } else { -v[i] })
}

/// `O M O` without forming `O`.
fn reflect_mat(m: &RMat) -> RMat {
    RMat::from_fn(m.nrows(), m.ncols(), |i, j| {
        if (i + j) % 2 == 0 {
            m[(i, j)]
        } else {
            -m[(i, j)]
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GaussianViolation {
    Shape {
        mean_len: usize,
        cov_rows: usize,
        cov_cols: usize,
    },
    NotSymmetric {
        asymmetry: f64,
    },
    /// `V + iΩ` has an eigenvalue below `-UNCERTAINTY`.
    Uncertainty {
        min_eigenvalue: f64,
    },
}

impl fmt::Display for GaussianViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaussianViolation::Shape {
                mean_len,
                cov_rows,
                cov_cols,
            } => write!(
                f,
                "shape mismatch (mean length {mean_len}, covariance {cov_rows}x{cov_cols})"
            ),
            GaussianViolation::NotSymmetric { asymmetry } => {
                write!(f, "covariance not symmetric (max asymmetry {asymmetry:e})")
            }
            GaussianViolation::Uncertainty { min_eigenvalue } => write!(
                f,
                "uncertainty principle violated (min eigenvalue of V + i*Omega {min_eigenvalue:e})"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianReport {
    pub violations: Vec<GaussianViolation>,
    /// Minimum eigenvalue of `V + iΩ`; `NaN` when the shape check failed.
    pub min_uncertainty_eigenvalue: f64,
}

impl GaussianReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for GaussianReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Checks shape, symmetry and `V + iΩ ⪰ 0`.
pub fn validate_gaussian(mean: &RVec, cov: &RMat) -> GaussianReport {
    let n2 = mean.len();
    if n2 == 0 || !n2.is_multiple_of(2) || cov.nrows() != n2 || cov.ncols() != n2 {
        return GaussianReport {
            violations: vec![GaussianViolation::Shape {
                mean_len: n2,
                cov_rows: cov.nrows(),
                cov_cols: cov.ncols(),
            }],
            min_uncertainty_eigenvalue: f64::NAN,
        };
    }
    let mut violations = Vec::new();
    let asymmetry = symmetric_defect(cov);
    if asymmetry > tol::HERMITIAN * tol::scale(max_abs_real(cov)) {
        violations.push(GaussianViolation::NotSymmetric { asymmetry });
    }
    let omega = symplectic_form(n2 / 2);
    let h = CMat::from_fn(n2, n2, |i, j| Complex64::new(cov[(i, j)], omega[(i, j)]));
    let min = matfun::hermitian_eig_unchecked(&h).min_eigenvalue();
    if min < -tol::UNCERTAINTY {
        violations.push(GaussianViolation::Uncertainty {
            min_eigenvalue: min,
        });
    }
    GaussianReport {
        violations,
        min_uncertainty_eigenvalue: min,
    }
}

/// An `N`-mode Gaussian state given by its mean and covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: RVec,
    cov: RMat,
}

impl GaussianState {
    pub fn new(mean: RVec, cov: RMat) -> Result<Self> {
        let report = validate_gaussian(&mean, &cov);
        if !report.is_ok() {
            return Err(Error::InvalidGaussian(report.to_string()));
        }
        let cov = (&cov + cov.transpose()).scale(0.5);
        Ok(Self { mean, cov })
    }

    fn from_valid(mean: RVec, cov: RMat) -> Self {
        Self { mean, cov }
    }

    pub fn vacuum(modes: usize) -> Self {
        Self::from_valid(RVec::zeros(2 * modes), RMat::identity(2 * modes, 2 * modes))
    }

    /// Zero-mean thermal state with the given symplectic eigenvalues.
    pub fn thermal(nu: &[f64]) -> Result<Self> {
        if let Some(&bad) = nu.iter().find(|&&v| v.is_nan() || v < 1.0 - tol::PURE_MODE) {
            return Err(Error::NuBelowOne(bad));
        }
        let diag = RVec::from_fn(2 * nu.len(), |i, _| nu[i / 2]);
        Ok(Self::from_valid(
            RVec::zeros(2 * nu.len()),
            RMat::from_diagonal(&diag),
        ))
    }

    pub fn modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &RVec {
        &self.mean
    }

    pub fn cov(&self) -> &RMat {
        &self.cov
    }

    /// Tensor product: means concatenated, covariances block-diagonal.
    pub fn product(&self, other: &Self) -> Self {
        let (a, b) = (self.mean.len(), other.mean.len());
        let mean = RVec::from_fn(a + b, |i, _| {
            if i < a {
                self.mean[i]
            } else {
                other.mean[i - a]
            }
        });
        let mut cov = RMat::zeros(a + b, a + b);
        cov.view_mut((0, 0), (a, a)).copy_from(&self.cov);
        cov.view_mut((a, a), (b, b)).copy_from(&other.cov);
        Self::from_valid(mean, cov)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: GaussianFile =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        file.to_state()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&GaussianFile::from(self)).expect("finite entries")
    }
}

/// `V = S (⊕ ν_l I₂) Sᵀ` with `S` symplectic, `ν` descending.
#[derive(Debug, Clone, PartialEq)]
pub struct WilliamsonForm {
    pub s: RMat,
    pub nu: Vec<f64>,
}

impl WilliamsonForm {
    pub fn modes(&self) -> usize {
        self.nu.len()
    }

    /// `S (⊕ f(ν_l) I₂) Sᵀ`.
    pub fn rebuild(&self, f: impl Fn(f64) -> f64) -> RMat {
        let mut scaled = self.s.clone();
        for (l, &nu) in self.nu.iter().enumerate() {
            let w = f(nu);
            scaled.column_mut(2 * l).scale_mut(w);
            scaled.column_mut(2 * l + 1).scale_mut(w);
        }
        scaled * self.s.transpose()
    }

    /// `||S Ω Sᵀ - Ω||_max`.
    pub fn symplectic_defect(&self) -> f64 {
        let omega = symplectic_form(self.modes());
        max_abs_real(&(&self.s * &omega * self.s.transpose() - omega))
    }
}

/// Williamson normal form of a positive-definite covariance matrix.
///
/// With `A = V^{1/2} Ω V^{1/2}` (real antisymmetric), the Hermitian matrix
/// `iA` has eigenvalues `±ν_l`. An eigenvector `x + iy` for `+ν` gives the
/// orthonormal pair `(√2 y, √2 x)` on which `A` acts as `ν J₂`; stacking the
/// pairs into `R` yields `S = V^{1/2} R (⊕ ν_l^{-1/2} I₂)`.
pub fn williamson(cov: &RMat) -> Result<WilliamsonForm> {
    matfun::ensure_square(cov.nrows(), cov.ncols())?;
    let n2 = cov.nrows();
    if n2 == 0 || !n2.is_multiple_of(2) {
        return Err(Error::InvalidGaussian(format!(
            "covariance dimension {n2} is not a positive even number"
        )));
    }
    let asym = symmetric_defect(cov);
    if asym > tol::HERMITIAN * tol::scale(max_abs_real(cov)) {
        return Err(Error::NotSymmetric(asym));
    }
    let modes = n2 / 2;
    let (_, lambda) = matfun::symmetric_real_eig_unchecked(cov);
    if lambda[0] <= 0.0 {
        return Err(Error::NotPositiveDefinite(lambda[0]));
    }
    let sqrt_v = matfun::real_symmetric_map(cov, f64::sqrt);
    let a = &sqrt_v * symplectic_form(modes) * &sqrt_v;
    let ia = CMat::from_fn(n2, n2, |i, j| Complex64::new(0.0, a[(i, j)]));
    let eig = matfun::hermitian_eig_unchecked(&ia);

    let mut r = RMat::zeros(n2, n2);
    let mut nu = Vec::with_capacity(modes);
    // Ascending order puts +ν_l in the upper half; walk it from the top for
    // a descending ν.
    for (l, idx) in (modes..n2).rev().enumerate() {
        nu.push(eig.eigenvalues[idx]);
        let u = eig.eigenvectors.column(idx);
        for i in 0..n2 {
            r[(i, 2 * l)] = std::f64::consts::SQRT_2 * u[i].im;
            r[(i, 2 * l + 1)] = std::f64::consts::SQRT_2 * u[i].re;
        }
    }
    let mut s = sqrt_v * r;
    for (l, &v) in nu.iter().enumerate() {
        let w = 1.0 / v.sqrt();
        s.column_mut(2 * l).scale_mut(w);
        s.column_mut(2 * l + 1).scale_mut(w);
    }
    Ok(WilliamsonForm { s, nu })
}

fn is_pure_mode(nu: f64) -> bool {
    nu - 1.0 <= tol::PURE_MODE
}

fn check_power_mu(mu: f64) -> Result<()> {
    if mu > 0.0 && mu <= 1.0 {
        Ok(())
    } else {
        Err(Error::MuOutOfRange(mu))
    }
}

/// Symplectic eigenvalue of `ρ^mu / tr ρ^mu`: `2/(1 - t^mu) - 1`.
pub fn nu_power(nu: f64, mu: f64) -> Result<f64> {
    check_power_mu(mu)?;
    if nu.is_nan() || nu < 1.0 - tol::PURE_MODE {
        return Err(Error::NuBelowOne(nu));
    }
    Ok(nu_power_unchecked(nu, mu))
}

fn nu_power_unchecked(nu: f64, mu: f64) -> f64 {
    if is_pure_mode(nu) {
        return 1.0;
    }
    let t = (nu - 1.0) / (nu + 1.0);
    2.0 / (1.0 - t.powf(mu)) - 1.0
}

/// `log tr ρ_mode^mu = mu log(1 - t) - log(1 - t^mu)`; zero for a pure mode.
fn log_trace_power_mode(nu: f64, mu: f64) -> f64 {
    if is_pure_mode(nu) {
        return 0.0;
    }
    let t = (nu - 1.0) / (nu + 1.0);
    mu * (2.0 / (nu + 1.0)).ln() - (-t.powf(mu)).ln_1p()
}

/// `ρ^mu / tr ρ^mu` as a Gaussian state, plus `log tr ρ^mu`.
pub fn power_state(g: &GaussianState, mu: f64) -> Result<(GaussianState, f64)> {
    check_power_mu(mu)?;
    let w = williamson(&g.cov)?;
    Ok(power_from_williamson(g, &w, mu))
}

fn power_from_williamson(g: &GaussianState, w: &WilliamsonForm, mu: f64) -> (GaussianState, f64) {
    let cov = w.rebuild(|nu| nu_power_unchecked(nu, mu));
    let cov = (&cov + cov.transpose()).scale(0.5);
    let log_tr = w.nu.iter().map(|&nu| log_trace_power_mode(nu, mu)).sum();
    (GaussianState::from_valid(g.mean.clone(), cov), log_tr)
}

/// Moments of `ρ*`: `(O X̄, O V O)`.
pub fn conjugate_gaussian(g: &GaussianState) -> GaussianState {
    GaussianState::from_valid(reflect_vec(&g.mean), reflect_mat(&g.cov))
}

/// True iff `ρ = ρ*` up to `tol`: p-means and all q-p covariances vanish.
pub fn is_real_gaussian(g: &GaussianState, tol: f64) -> bool {
    let mean_dev = (&g.mean - reflect_vec(&g.mean)).amax();
    let cov_dev = max_abs_real(&(&g.cov - reflect_mat(&g.cov)));
    mean_dev <= tol && cov_dev <= tol
}

fn check_same_modes(a: &GaussianState, b: &GaussianState) -> Result<()> {
    if a.modes() != b.modes() {
        return Err(Error::DimensionMismatch {
            expected: a.modes(),
            got: b.modes(),
        });
    }
    Ok(())
}

/// `log tr(ρσ) = N log 2 - ½ log det(V + W) - ½ dᵀ (V + W)⁻¹ d`.
pub fn log_overlap(a: &GaussianState, b: &GaussianState) -> Result<f64> {
    check_same_modes(a, b)?;
    let sum = &a.cov + &b.cov;
    let chol = Cholesky::new(sum).ok_or(Error::SingularSum)?;
    let log_det: f64 = 2.0
        * chol
            .l_dirty()
            .diagonal()
            .iter()
            .map(|x| x.ln())
            .sum::<f64>();
    if !log_det.is_finite() {
        return Err(Error::SingularSum);
    }
    let d = &a.mean - &b.mean;
    let quad = d.dot(&chol.solve(&d));
    Ok(a.modes() as f64 * LN_2 - 0.5 * log_det - 0.5 * quad)
}

/// `tr(ρσ)` for two Gaussian states.
pub fn overlap(a: &GaussianState, b: &GaussianState) -> Result<f64> {
    Ok(log_overlap(a, b)?.exp())
}

/// `M_T,mu` of a Gaussian state from its moments.
///
/// `tr[ρ^mu (ρ*)^(1-mu)] = tr ρ^mu · tr ρ^(1-mu) · tr[ρ_mu ρ*_(1-mu)]` where the
/// last factor is the overlap of the two normalized power states.
pub fn m_tsallis_gaussian(g: &GaussianState, mu: f64) -> Result<MeasureValue> {
    check_mu(mu)?;
    let (rho_mu, log_tr_mu) = power_state(g, mu)?;
    let (conj_pow, log_tr_conj) = power_state(&conjugate_gaussian(g), 1.0 - mu)?;
    let log_c = log_tr_mu + log_tr_conj + log_overlap(&rho_mu, &conj_pow)?;
    Ok(MeasureValue {
        value: (1.0 - log_c.exp()).clamp(0.0, 1.0),
        measure: MeasureId::Tsallis,
        parameter: Some(mu),
    })
}

/// `M_T,1/2` via `V^{(1/2)} + O V^{(1/2)} O` and the prefactor
/// `Π (1 - t)/(1 - √t)²`, i.e. without going through the general-mu route.
pub fn m_tsallis_gaussian_half(g: &GaussianState) -> Result<f64> {
    let w = williamson(&g.cov)?;
    let n = w.modes();
    let half = w.rebuild(|nu| nu_power_unchecked(nu, 0.5));
    let sum = &half + reflect_mat(&half);
    let sum = (&sum + sum.transpose()).scale(0.5);
    let log_prefactor: f64 =
        w.nu.iter()
            .filter(|&&nu| !is_pure_mode(nu))
            .map(|&nu| {
                let t = (nu - 1.0) / (nu + 1.0);
                (1.0 - t).ln() - 2.0 * (1.0 - t.sqrt()).ln()
            })
            .sum();
    let chol = Cholesky::new(sum).ok_or(Error::SingularSum)?;
    let log_det: f64 = 2.0
        * chol
            .l_dirty()
            .diagonal()
            .iter()
            .map(|x| x.ln())
            .sum::<f64>();
    let d = &g.mean - reflect_vec(&g.mean);
    let quad = d.dot(&chol.solve(&d));
    let log_c = n as f64 * LN_2 + log_prefactor - 0.5 * log_det - 0.5 * quad;
    Ok((1.0 - log_c.exp()).clamp(0.0, 1.0))
}

/// One-mode state `D(α) S(ζ) ρ_th S(ζ)† D(α)†` with `ζ = |ζ| e^{iθ}` and
/// thermal symplectic eigenvalue `ν`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneModeParams {
    pub alpha: Complex64,
    pub zeta_abs: f64,
    pub theta: f64,
    pub nu: f64,
}

impl OneModeParams {
    /// Parameters with `α = (X̄₁ + i X̄₂)/2`.
    pub fn from_mean(x1: f64, x2: f64, zeta_abs: f64, theta: f64, nu: f64) -> Self {
        Self {
            alpha: Complex64::new(0.5 * x1, 0.5 * x2),
            zeta_abs,
            theta,
            nu,
        }
    }

    /// `X̄₂ = 2 Im α`.
    pub fn mean_p(&self) -> f64 {
        2.0 * self.alpha.im
    }
}

/// Mean `2(Re α, Im α)` and covariance
/// `ν [[c + cos θ s, sin θ s], [sin θ s, c - cos θ s]]`, `c = cosh 2|ζ|`, `s = sinh 2|ζ|`.
pub fn one_mode_from_params(p: &OneModeParams) -> Result<GaussianState> {
    if p.nu.is_nan() || p.nu < 1.0 - tol::PURE_MODE {
        return Err(Error::NuBelowOne(p.nu));
    }
    let nu = p.nu.max(1.0);
    let (c, s) = ((2.0 * p.zeta_abs).cosh(), (2.0 * p.zeta_abs).sinh());
    let (sin, cos) = p.theta.sin_cos();
    let cov = RMat::from_row_slice(
        2,
        2,
        &[
            nu * (c + cos * s),
            nu * sin * s,
            nu * sin * s,
            nu * (c - cos * s),
        ],
    );
    let mean = RVec::from_vec(vec![2.0 * p.alpha.re, 2.0 * p.alpha.im]);
    Ok(GaussianState::from_valid(mean, cov))
}

/// One-mode `M_T,1/2`:
/// `1 - exp{-X̄₂² / ((ν + √(ν²-1)) (c - cos θ s))} / √(1 + sin²θ s²)`.
pub fn one_mode_closed_form(p: &OneModeParams) -> f64 {
    let nu = p.nu.max(1.0);
    let (c, s) = ((2.0 * p.zeta_abs).cosh(), (2.0 * p.zeta_abs).sinh());
    let (sin, cos) = p.theta.sin_cos();
    let x2 = p.mean_p();
    let nu_half = nu + (nu * nu - 1.0).sqrt();
    let exponent = -x2 * x2 / (nu_half * (c - cos * s));
    1.0 - exponent.exp() / (1.0 + sin * sin * s * s).sqrt()
}

/// Truncated Fock-space matrix of the one-mode state described by `p`.
///
/// Displacement and squeezing are exponentiated through the eigensystem of
/// `i·generator`. The squeezer is applied with the sign that reproduces the
/// covariance of [`one_mode_from_params`], i.e. `exp(½(ζ a†² - ζ* a²))`.
pub fn fock_truncate(p: &OneModeParams, cutoff: usize) -> Result<DensityMatrix> {
    if cutoff < 16 {
        return Err(Error::CutoffTooSmall(cutoff));
    }
    if p.nu.is_nan() || p.nu < 1.0 - tol::PURE_MODE {
        return Err(Error::NuBelowOne(p.nu));
    }
    let n = cutoff;
    let a = annihilation(n);
    let ad = a.adjoint();

    let mut weights = vec![0.0; n];
    if is_pure_mode(p.nu) {
        weights[0] = 1.0;
    } else {
        let t = (p.nu - 1.0) / (p.nu + 1.0);
        let tail = t.powi(n as i32);
        if tail > 1e-10 {
            return Err(Error::TruncationUnreliable(tail));
        }
        let mut w = 1.0 - t;
        for slot in weights.iter_mut() {
            *slot = w;
            w *= t;
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
    }
    let thermal = CMat::from_diagonal(&crate::CVec::from_iterator(
        n,
        weights.iter().map(|&w| Complex64::new(w, 0.0)),
    ));

    let displacement = expm_anti_hermitian(&(&ad * p.alpha - &a * p.alpha.conj()));
    let zeta = Complex64::from_polar(p.zeta_abs, p.theta);
    let a2 = &a * &a;
    let ad2 = &ad * &ad;
    let squeeze =
        expm_anti_hermitian(&((ad2 * zeta - a2 * zeta.conj()) * Complex64::new(0.5, 0.0)));

    let u = displacement * squeeze;
    let rho = &u * thermal * u.adjoint();
    let rho = (&rho + rho.adjoint()).scale(0.5);
    let tr = matfun::trace(&rho).re;
    DensityMatrix::new(rho.unscale(tr))
}

fn annihilation(n: usize) -> CMat {
    let mut a = CMat::zeros(n, n);
    for j in 1..n {
        a[(j - 1, j)] = Complex64::new((j as f64).sqrt(), 0.0);
    }
    a
}

/// `exp(G)` for anti-Hermitian `G`, via `G = -iH`, `H = iG` Hermitian.
fn expm_anti_hermitian(g: &CMat) -> CMat {
    let h = g * Complex64::new(0.0, 1.0);
    let eig = matfun::hermitian_eig_unchecked(&h);
    let mut scaled = eig.eigenvectors.clone();
    for (j, &l) in eig.eigenvalues.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, -l);
        for z in scaled.column_mut(j).iter_mut() {
            *z *= phase;
        }
    }
    scaled * eig.eigenvectors.adjoint()
}

/// Mean and covariance of a truncated one-mode Fock state.
pub fn fock_moments(rho: &DensityMatrix) -> (RVec, RMat) {
    let n = rho.dim();
    let a = annihilation(n);
    let ad = a.adjoint();
    let q = &a + &ad;
    let p = (&a - &ad) * Complex64::new(0.0, -1.0);
    let r = rho.matrix();
    let ev = |op: &CMat| matfun::trace_of_product(r, op).re;
    let (mq, mp) = (ev(&q), ev(&p));
    let vqq = ev(&(&q * &q)) - mq * mq;
    let vpp = ev(&(&p * &p)) - mp * mp;
    let vqp = 0.5 * ev(&(&q * &p + &p * &q)) - mq * mp;
    (
        RVec::from_vec(vec![mq, mp]),
        RMat::from_row_slice(2, 2, &[vqq, vqp, vqp, vpp]),
    )
}

/// Random symplectic matrix `O₁ Z O₂`: two passive (orthogonal symplectic)
/// rotations around single-mode squeezers with `|r| <= max_squeeze`.
pub fn random_symplectic_with<R: Rng + ?Sized>(
    modes: usize,
    max_squeeze: f64,
    rng: &mut R,
) -> RMat {
    let o1 = random_passive(modes, rng);
    let o2 = random_passive(modes, rng);
    let mut z = RMat::identity(2 * modes, 2 * modes);
    for l in 0..modes {
        let r = rng.random_range(-max_squeeze..=max_squeeze);
        z[(2 * l, 2 * l)] = r.exp();
        z[(2 * l + 1, 2 * l + 1)] = (-r).exp();
    }
    o1 * z * o2
}

/// Orthogonal symplectic matrix of a Haar-ish random unitary `U = X + iY`:
/// `q' = Xq - Yp`, `p' = Yq + Xp`.
fn random_passive<R: Rng + ?Sized>(modes: usize, rng: &mut R) -> RMat {
    let g = CMat::from_fn(modes, modes, |_, _| {
        Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    });
    let u = g.qr().q();
    let mut o = RMat::zeros(2 * modes, 2 * modes);
    for i in 0..modes {
        for j in 0..modes {
            let (x, y) = (u[(i, j)].re, u[(i, j)].im);
            o[(2 * i, 2 * j)] = x;
            o[(2 * i, 2 * j + 1)] = -y;
            o[(2 * i + 1, 2 * j)] = y;
            o[(2 * i + 1, 2 * j + 1)] = x;
        }
    }
    o
}

/// Random valid covariance `S₀ (⊕ ν₀ I₂) S₀ᵀ` together with its `ν₀`.
pub fn random_covariance_with<R: Rng + ?Sized>(modes: usize, rng: &mut R) -> (RMat, Vec<f64>) {
    let s = random_symplectic_with(modes, 0.8, rng);
    let nu: Vec<f64> = (0..modes)
        .map(|_| 1.0 + rng.random_range(0.0..3.0))
        .collect();
    let d = RMat::from_diagonal(&RVec::from_fn(2 * modes, |i, _| nu[i / 2]));
    let v = &s * d * s.transpose();
    ((&v + v.transpose()).scale(0.5), nu)
}

/// Random Gaussian state with a normally distributed mean.
pub fn random_gaussian_with<R: Rng + ?Sized>(modes: usize, rng: &mut R) -> GaussianState {
    let (cov, _) = random_covariance_with(modes, rng);
    let mean = RVec::from_fn(2 * modes, |_, _| StandardNormal.sample(rng));
    GaussianState::from_valid(mean, cov)
}

/// On-disk format `{"modes": N, "mean": [...], "cov": [[...]], "convention": "..."}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianFile {
    pub modes: usize,
    pub mean: Vec<f64>,
    pub cov: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convention: Option<String>,
}

impl GaussianFile {
    pub fn to_state(&self) -> Result<GaussianState> {
        let n2 = 2 * self.modes;
        if let Some(conv) = &self.convention {
            if conv != CONVENTION {
                return Err(Error::Parse(format!(
                    "unsupported quadrature convention {conv:?} (expected {CONVENTION:?})"
                )));
            }
        }
        if self.modes == 0
            || self.mean.len() != n2
            || self.cov.len() != n2
            || self.cov.iter().any(|row| row.len() != n2)
        {
            return Err(Error::Parse(format!(
                "mean/cov shape does not match {} modes",
                self.modes
            )));
        }
        if self
            .mean
            .iter()
            .chain(self.cov.iter().flatten())
            .any(|x| !x.is_finite())
        {
            return Err(Error::Parse("non-finite entry".into()));
        }
        let mean = RVec::from_vec(self.mean.clone());
        let cov = RMat::from_fn(n2, n2, |i, j| self.cov[i][j]);
        GaussianState::new(mean, cov)
    }
}

impl From<&GaussianState> for GaussianFile {
    fn from(g: &GaussianState) -> Self {
        let n2 = g.mean.len();
        Self {
            modes: g.modes(),
            mean: g.mean.iter().copied().collect(),
            cov: (0..n2)
                .map(|i| (0..n2).map(|j| g.cov[(i, j)]).collect())
                .collect(),
            convention: Some(CONVENTION.to_string()),
        }
    }
}
