//! Real quantum operations: Kraus operators with real entries.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::matfun::{self, max_abs, max_abs_real};
use crate::states::DensityMatrix;
use crate::{tol, CMat, Error, RMat, Result};

/// Real Kraus operators `{K_l}` with the cached defect `I - Σ K_lᵀ K_l`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealOperation {
    kraus: Vec<RMat>,
    defect: RMat,
    defect_min_eigenvalue: f64,
}

/// A violated real-operation invariant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperationViolation {
    /// `I - Σ KᵀK` has an eigenvalue below `-DEFECT_FLOOR`.
    Defect { min_eigenvalue: f64 },
}

impl fmt::Display for OperationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperationViolation::Defect { min_eigenvalue } => write!(
                f,
                "sum of K^T K exceeds identity (defect min eigenvalue {min_eigenvalue:e})"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperationReport {
    pub violations: Vec<OperationViolation>,
    /// `||I - Σ KᵀK||_max`; zero for an exact channel.
    pub defect_max: f64,
}

impl OperationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn is_channel(&self) -> bool {
        self.is_ok() && self.defect_max <= 1e-9
    }
}

/// Post-measurement branch of a real operation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub probability: f64,
    pub state: DensityMatrix,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutcomeDecomposition {
    pub outcomes: Vec<Outcome>,
}

impl OutcomeDecomposition {
    pub fn total_probability(&self) -> f64 {
        self.outcomes.iter().map(|o| o.probability).sum()
    }
}

impl RealOperation {
    /// Shape-checks the Kraus list and caches its defect.
    pub fn new(kraus: Vec<RMat>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidOperation("empty Kraus list".into()))?;
        let d = first.nrows();
        for k in &kraus {
            matfun::ensure_square(k.nrows(), k.ncols())?;
            if k.nrows() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: k.nrows(),
                });
            }
        }
        let mut defect = RMat::identity(d, d);
        for k in &kraus {
            defect -= k.transpose() * k;
        }
        let defect = (&defect + defect.transpose()).scale(0.5);
        let (_, lambda) = matfun::symmetric_real_eig_unchecked(&defect);
        let defect_min_eigenvalue = lambda.first().copied().unwrap_or(0.0);
        Ok(Self {
            kraus,
            defect,
            defect_min_eigenvalue,
        })
    }

    pub fn identity(d: usize) -> Self {
        Self::new(vec![RMat::identity(d, d)]).expect("identity is square")
    }

    pub fn dim(&self) -> usize {
        self.defect.nrows()
    }

    pub fn kraus(&self) -> &[RMat] {
        &self.kraus
    }

    pub fn defect(&self) -> &RMat {
        &self.defect
    }

    pub fn validate(&self) -> OperationReport {
        let mut violations = Vec::new();
        if self.defect_min_eigenvalue < -tol::DEFECT_FLOOR {
            violations.push(OperationViolation::Defect {
                min_eigenvalue: self.defect_min_eigenvalue,
            });
        }
        OperationReport {
            violations,
            defect_max: max_abs_real(&self.defect),
        }
    }

    /// `Σ K_l ρ K_lᵀ` together with the normalized branches.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<(CMat, OutcomeDecomposition)> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: rho.dim(),
            });
        }
        let report = self.validate();
        if !report.is_ok() {
            return Err(Error::InvalidOperation(report.violations[0].to_string()));
        }
        let d = self.dim();
        let mut total = CMat::zeros(d, d);
        let mut outcomes = Vec::new();
        for k in &self.kraus {
            let branch = real_sandwich(k, rho.matrix());
            total += &branch;
            let p = matfun::trace(&branch).re;
            if p >= tol::OUTCOME_FLOOR {
                outcomes.push(Outcome {
                    probability: p,
                    state: DensityMatrix::from_valid(branch.unscale(p)),
                });
            }
        }
        Ok((total, OutcomeDecomposition { outcomes }))
    }

    /// Appends `K'` with `K'ᵀK' = I - Σ KᵀK`, turning the operation into a
    /// channel. The original Kraus operators are kept in order.
    pub fn complete_to_channel(&self) -> Result<Self> {
        let report = self.validate();
        if !report.is_ok() {
            return Err(Error::NotPsd(self.defect_min_eigenvalue));
        }
        if report.defect_max <= 1e-12 {
            return Ok(self.clone());
        }
        let k_extra = matfun::real_psd_factor(&self.defect)?;
        let mut kraus = self.kraus.clone();
        kraus.push(k_extra);
        Self::new(kraus)
    }

    /// `||φ(ρ*) - φ(ρ)*||_max`.
    pub fn conjugation_deviation(&self, rho: &DensityMatrix) -> f64 {
        let complex: Vec<CMat> = self.kraus.iter().map(matfun::real_to_complex).collect();
        conjugation_deviation(&complex, rho)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: OperationFile =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        file.to_operation()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&OperationFile::from(self)).expect("finite entries")
    }
}

/// `K ρ Kᵀ` for real `K`, symmetrized.
fn real_sandwich(k: &RMat, rho: &CMat) -> CMat {
    let kc = matfun::real_to_complex(k);
    let out = &kc * rho * kc.transpose();
    (&out + out.adjoint()).scale(0.5)
}

/// `Σ K ρ K†` for arbitrary complex Kraus operators.
pub fn apply_complex(kraus: &[CMat], rho: &CMat) -> CMat {
    let d = rho.nrows();
    kraus
        .iter()
        .fold(CMat::zeros(d, d), |acc, k| acc + k * rho * k.adjoint())
}

/// `||φ(ρ*) - φ(ρ)*||_max` for a general Kraus list. Vanishes for real Kraus.
pub fn conjugation_deviation(kraus: &[CMat], rho: &DensityMatrix) -> f64 {
    let lhs = apply_complex(kraus, rho.conjugate().matrix());
    let rhs = matfun::conj(&apply_complex(kraus, rho.matrix()));
    max_abs(&(lhs - rhs))
}

/// Real orthogonal `Q` with `Q (Re ρ) Qᵀ` diagonal.
pub fn real_orthogonal_diagonalizer(rho: &DensityMatrix) -> RMat {
    let (re, _) = rho.real_imag_parts();
    matfun::symmetric_real_eig_unchecked(&re).0
}

/// Seeded random real channel with `k` Kraus operators `G_l M^{-1/2}`,
/// `M = Σ G_lᵀ G_l`.
///
/// If `M` is numerically singular the draw is repeated on the next
/// generator stream; after 16 failed streams `SingularNormalizer` is returned.
pub fn random_real_channel(d: usize, k: usize, seed: u64) -> Result<RealOperation> {
    if d == 0 || k == 0 {
        return Err(Error::InvalidOperation(format!(
            "random channel needs d, k >= 1 (got d={d}, k={k})"
        )));
    }
    for stream in 0..16u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        if let Some(op) = try_random_channel(d, k, &mut rng) {
            return Ok(op);
        }
    }
    Err(Error::SingularNormalizer)
}

fn try_random_channel(d: usize, k: usize, rng: &mut ChaCha8Rng) -> Option<RealOperation> {
    let gs: Vec<RMat> = (0..k)
        .map(|_| RMat::from_fn(d, d, |_, _| StandardNormal.sample(&mut *rng)))
        .collect();
    let mut m = RMat::zeros(d, d);
    for g in &gs {
        m += g.transpose() * g;
    }
    let (_, lambda) = matfun::symmetric_real_eig_unchecked(&m);
    let lmax = lambda.last().copied().unwrap_or(0.0);
    if lambda[0] <= tol::NORMALIZER_FLOOR * lmax.max(1.0) {
        return None;
    }
    let mut kraus: Vec<RMat> = gs;
    // A second pass on the nearly-identity normalizer removes the error
    // left by an ill-conditioned first one.
    for _ in 0..2 {
        let inv_sqrt = matfun::real_symmetric_map(&m, |l| 1.0 / l.sqrt());
        kraus = kraus.iter().map(|g| g * &inv_sqrt).collect();
        m = kraus.iter().map(|g| g.transpose() * g).sum();
    }
    let op = RealOperation::new(kraus).ok()?;
    (op.validate().defect_max <= 1e-13).then_some(op)
}

/// On-disk operation format: `{"dim": d, "kraus": [[[..row..], ...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperationFile {
    pub dim: usize,
    pub kraus: Vec<Vec<Vec<f64>>>,
}

impl OperationFile {
    pub fn to_operation(&self) -> Result<RealOperation> {
        let d = self.dim;
        let mut kraus = Vec::with_capacity(self.kraus.len());
        for k in &self.kraus {
            if d == 0 || k.len() != d || k.iter().any(|row| row.len() != d) {
                return Err(Error::Parse(format!("Kraus shape does not match dim {d}")));
            }
            if k.iter().flatten().any(|x| !x.is_finite()) {
                return Err(Error::Parse("non-finite Kraus entry".into()));
            }
            kraus.push(RMat::from_fn(d, d, |i, j| k[i][j]));
        }
        RealOperation::new(kraus)
    }
}

impl From<&RealOperation> for OperationFile {
    fn from(op: &RealOperation) -> Self {
        let kraus = op
            .kraus
            .iter()
            .map(|k| {
                (0..k.nrows())
                    .map(|i| (0..k.ncols()).map(|j| k[(i, j)]).collect())
                    .collect()
            })
            .collect();
        Self {
            dim: op.dim(),
            kraus,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{random_density, random_real_density_with, BlochVector};
    use num_complex::Complex64;

    fn pauli_x() -> RMat {
        RMat::from_row_slice(2, 2, &[0., 1., 1., 0.])
    }

    #[test]
    fn validate_examples() {
        let id = RealOperation::identity(2);
        assert!(id.validate().is_channel());

        let half = RealOperation::new(vec![RMat::identity(2, 2).scale(0.5)]).unwrap();
        let r = half.validate();
        assert!(r.is_ok() && !r.is_channel());
        assert!(max_abs_real(&(half.defect() - RMat::identity(2, 2).scale(0.75))) < 1e-15);

        let big = RealOperation::new(vec![RMat::identity(2, 2).scale(2f64.sqrt())]).unwrap();
        assert!(!big.validate().is_ok());
        let rho = DensityMatrix::maximally_mixed(2);
        assert!(matches!(big.apply(&rho), Err(Error::InvalidOperation(_))));
    }

    #[test]
    fn mismatched_kraus_shapes_rejected() {
        let r = RealOperation::new(vec![RMat::identity(2, 2), RMat::identity(3, 3)]);
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
        let r = RealOperation::new(vec![RMat::zeros(2, 3)]);
        assert!(matches!(r, Err(Error::NotSquare { .. })));
    }

    #[test]
    fn apply_identity_and_bit_flip() {
        let rho = random_density(3, 1);
        let (out, dec) = RealOperation::identity(3).apply(&rho).unwrap();
        assert!(max_abs(&(out - rho.matrix())) < 1e-15);
        assert_eq!(dec.outcomes.len(), 1);
        assert!((dec.outcomes[0].probability - 1.0).abs() < 1e-15);

        let s = 0.5f64.sqrt();
        let flip =
            RealOperation::new(vec![RMat::identity(2, 2).scale(s), pauli_x().scale(s)]).unwrap();
        let up = DensityMatrix::diagonal(&[1., 0.]).unwrap();
        let (out, dec) = flip.apply(&up).unwrap();
        assert!(max_abs(&(out - CMat::identity(2, 2).scale(0.5))) < 1e-15);
        assert_eq!(dec.outcomes.len(), 2);
        assert!((dec.outcomes[0].probability - 0.5).abs() < 1e-15);
        assert!((dec.outcomes[0].state.matrix()[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!((dec.outcomes[1].state.matrix()[(1, 1)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_probability_outcomes_dropped() {
        let p0 = RMat::from_diagonal(&nalgebra::dvector![1.0, 0.0]);
        let p1 = RMat::from_diagonal(&nalgebra::dvector![0.0, 1.0]);
        let op = RealOperation::new(vec![p0, p1]).unwrap();
        let up = DensityMatrix::diagonal(&[1., 0.]).unwrap();
        let (_, dec) = op.apply(&up).unwrap();
        assert_eq!(dec.outcomes.len(), 1);
    }

    #[test]
    fn real_ops_keep_real_states_real() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for seed in 0..100 {
            let op = random_real_channel(3, 2, seed).unwrap();
            let rho = random_real_density_with(3, &mut rng);
            let (out, dec) = op.apply(&rho).unwrap();
            assert!(out.iter().all(|z| z.im.abs() <= 1e-12));
            assert!(dec.outcomes.iter().all(|o| o.state.is_real(1e-12)));
            assert!((matfun::trace(&out).re - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn dimension_mismatch_on_apply() {
        let op = RealOperation::identity(2);
        assert!(matches!(
            op.apply(&DensityMatrix::maximally_mixed(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn completion_examples() {
        let id = RealOperation::identity(2);
        assert_eq!(id.complete_to_channel().unwrap(), id);

        let half = RealOperation::new(vec![RMat::identity(2, 2).scale(0.5)]).unwrap();
        let done = half.complete_to_channel().unwrap();
        assert_eq!(done.kraus().len(), 2);
        assert_eq!(done.kraus()[0], half.kraus()[0]);
        let extra = &done.kraus()[1];
        assert!(
            max_abs_real(&(extra.transpose() * extra - RMat::identity(2, 2).scale(0.75))) < 1e-12
        );
        assert!(done.validate().is_channel());
    }

    #[test]
    fn completion_of_random_operations() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for seed in 0..500u64 {
            let d = 2 + (seed % 3) as usize;
            let k = 1 + (seed % 2) as usize;
            let ch = random_real_channel(d, k, seed).unwrap();
            // Shrink each Kraus operator to get a strict sub-channel.
            let shrink: f64 = rand::Rng::random_range(&mut rng, 0.1..0.99);
            let sub =
                RealOperation::new(ch.kraus().iter().map(|m| m.scale(shrink)).collect()).unwrap();
            let done = sub.complete_to_channel().unwrap();
            assert!(done.validate().defect_max <= 1e-9, "seed {seed}");
            assert_eq!(&done.kraus()[..sub.kraus().len()], sub.kraus());
        }
    }

    #[test]
    fn diagonalizer_examples() {
        let rho = DensityMatrix::diagonal(&[0.2, 0.3, 0.5]).unwrap();
        let q = real_orthogonal_diagonalizer(&rho);
        assert!(q
            .iter()
            .all(|v| v.abs() < 1e-15 || (v.abs() - 1.0).abs() < 1e-15));

        let rho = DensityMatrix::from_bloch(BlochVector::new(0.6, 0., 0.).unwrap());
        let q = real_orthogonal_diagonalizer(&rho);
        let (re, _) = rho.real_imag_parts();
        let (q_oracle, lambda) = matfun::symmetric_real_eig(&re).unwrap();
        let d = &q * &re * q.transpose();
        assert!(d[(0, 1)].abs() < 1e-12);
        assert!((d[(0, 0)] - lambda[0]).abs() < 1e-12 && (d[(1, 1)] - lambda[1]).abs() < 1e-12);
        assert!((d[(0, 0)] - 0.2).abs() < 1e-12 && (d[(1, 1)] - 0.8).abs() < 1e-12);
        assert!(max_abs_real(&(q.abs() - q_oracle.abs())) < 1e-12);

        for seed in 0..200 {
            let rho = random_density(4, seed);
            let q = real_orthogonal_diagonalizer(&rho);
            assert!(max_abs_real(&(&q * q.transpose() - RMat::identity(4, 4))) < 1e-10);
            let rotated = rho.rotate_real(&q).unwrap();
            for i in 0..4 {
                for j in 0..4 {
                    if i != j {
                        assert!(rotated.matrix()[(i, j)].re.abs() <= 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn random_channel_examples() {
        let op = random_real_channel(1, 1, 3).unwrap();
        assert!((op.kraus()[0][(0, 0)].abs() - 1.0).abs() < 1e-15);

        for seed in 0..1000 {
            let op = random_real_channel(3, 2, seed).unwrap();
            let r = op.validate();
            assert!(r.is_channel(), "seed {seed}: defect {}", r.defect_max);
        }
        let op = random_real_channel(4, 3, 77).unwrap();
        let (out, _) = op.apply(&DensityMatrix::maximally_mixed(4)).unwrap();
        assert!((matfun::trace(&out).re - 1.0).abs() < 1e-12);
        assert_eq!(
            random_real_channel(3, 2, 5).unwrap(),
            random_real_channel(3, 2, 5).unwrap()
        );
    }

    #[test]
    fn random_channels_preserve_trace_to_round_off() {
        // This draw has an ill-conditioned normalizer (single Kraus, d = 3).
        let op = random_real_channel(3, 1, 6166364138812155925).unwrap();
        assert!(op.validate().defect_max <= 1e-13);
        for seed in 0..3000u64 {
            let (d, k) = (1 + (seed % 4) as usize, 1 + (seed / 4 % 3) as usize);
            let op = random_real_channel(d, k, seed.wrapping_mul(0x9e37_79b9_7f4a_7c15)).unwrap();
            let defect = op.validate().defect_max;
            assert!(defect <= 1e-13, "seed {seed}: defect {defect:e}");
            let rho = random_density(d, seed);
            let (out, _) = op.apply(&rho).unwrap();
            assert!((matfun::trace(&out).re - 1.0).abs() <= 1e-13);
        }
    }

    #[test]
    fn conjugation_commutes_for_real_kraus() {
        let rho = random_density(3, 4);
        assert_eq!(RealOperation::identity(3).conjugation_deviation(&rho), 0.0);
        for seed in 0..100 {
            let op = random_real_channel(3, 2, seed).unwrap();
            let rho = random_density(3, seed + 500);
            assert!(op.conjugation_deviation(&rho) <= 1e-12);
        }
    }

    #[test]
    fn complex_kraus_breaks_commutation() {
        let c = |re, im| Complex64::new(re, im);
        let k = CMat::from_diagonal(&nalgebra::dvector![c(1., 0.), c(0., 1.)]);
        let rho = DensityMatrix::from_bloch(BlochVector::new(0., 1., 0.).unwrap());
        let dev = conjugation_deviation(&[k], &rho);
        assert!((dev - 1.0).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let op = random_real_channel(3, 2, 8).unwrap();
        let back = RealOperation::from_json_str(&op.to_json_string()).unwrap();
        assert_eq!(back, op);
        assert!(matches!(
            RealOperation::from_json_str(r#"{"dim": 2, "kraus": [[[1.0]]]}"#),
            Err(Error::Parse(_))
        ));
    }
}
