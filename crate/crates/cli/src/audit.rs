//! Seeded property audits over random states, channels and Gaussian states.
//!
//! Each suite is a list of named checks with their own tolerance. A trial
//! produces one magnitude per check, where `0` means the property holds
//! exactly; the trial fails a check when the magnitude exceeds that check's
//! tolerance. Trials are independent and seeded by `seed + index`, so any
//! failure can be reproduced on its own.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use imaginarity::channels::{random_real_channel, real_orthogonal_diagonalizer, RealOperation};
use imaginarity::gaussian::{
    conjugate_gaussian, conjugation_reflection, fock_truncate, m_tsallis_gaussian,
    m_tsallis_gaussian_half, one_mode_closed_form, one_mode_from_params, power_state,
    random_gaussian_with, symplectic_form, williamson, GaussianState, OneModeParams,
};
use imaginarity::matfun::max_abs_real;
use imaginarity::measures::{
    affinity, bhattacharyya, chernoff_imaginarity, chernoff_quantity, hellinger, m_rel_entropy,
    m_tsallis, relative_entropy_coherence,
};
use imaginarity::states::{random_density_with, random_real_density_with, DensityMatrix};
use imaginarity::{RVec, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::num::json_number;

pub const DEFAULT_SEED: u64 = 20_250_601;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Axioms,
    Gaussian,
    Oracle,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Gaussian => "gaussian",
            Suite::Oracle => "oracle",
            Suite::All => "all",
        }
    }
}

struct Check {
    name: &'static str,
    tolerance: f64,
}

const fn check(name: &'static str, tolerance: f64) -> Check {
    Check { name, tolerance }
}

fn serialize_g17<S: serde::Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    json_number(*x).serialize(s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub seed: u64,
    pub description: String,
    #[serde(serialize_with = "serialize_g17")]
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckSummary {
    pub name: String,
    #[serde(serialize_with = "serialize_g17")]
    pub tolerance: f64,
    #[serde(serialize_with = "serialize_g17")]
    pub max_magnitude: f64,
    pub failures: usize,
}

/// Result of one suite. `max_violation` is the largest magnitude measured in
/// units of its check's tolerance, so the suite tolerance is `1` and
/// `failures` is nonempty exactly when `max_violation > 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub suite: String,
    pub trials: usize,
    pub seed: u64,
    #[serde(serialize_with = "serialize_g17")]
    pub tolerance: f64,
    #[serde(serialize_with = "serialize_g17")]
    pub max_violation: f64,
    pub checks: Vec<CheckSummary>,
    pub failures: Vec<Failure>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn check(&self, name: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub fn run(suite: Suite, trials: usize, seed: u64) -> Vec<AuditReport> {
    match suite {
        Suite::Axioms => vec![axioms(trials, seed)],
        Suite::Gaussian => vec![gaussian(trials, seed)],
        Suite::Oracle => vec![oracle()],
        Suite::All => vec![axioms(trials, seed), gaussian(trials, seed), oracle()],
    }
}

/// Runs `trial` for every index in parallel and folds the magnitudes in
/// index order, so the report does not depend on scheduling.
fn audit<F>(suite: &str, checks: &[Check], trials: usize, seed: u64, trial: F) -> AuditReport
where
    F: Fn(u64) -> Result<Vec<f64>> + Sync,
{
    let results: Vec<(u64, Result<Vec<f64>>)> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i);
            (s, trial(s))
        })
        .collect();

    let mut summaries: Vec<CheckSummary> = checks
        .iter()
        .map(|c| CheckSummary {
            name: c.name.to_string(),
            tolerance: c.tolerance,
            max_magnitude: 0.0,
            failures: 0,
        })
        .collect();
    let mut failures = Vec::new();
    let mut max_violation = 0.0f64;
    for (s, result) in results {
        let magnitudes = match result {
            Ok(m) => m,
            Err(e) => {
                failures.push(Failure {
                    seed: s,
                    description: format!("trial raised an error: {e}"),
                    magnitude: f64::INFINITY,
                });
                max_violation = f64::INFINITY;
                continue;
            }
        };
        debug_assert_eq!(magnitudes.len(), checks.len());
        for ((c, summary), m) in checks.iter().zip(&mut summaries).zip(magnitudes) {
            let m = if m.is_nan() { f64::INFINITY } else { m };
            summary.max_magnitude = summary.max_magnitude.max(m);
            max_violation = max_violation.max(m / c.tolerance);
            if m > c.tolerance {
                summary.failures += 1;
                failures.push(Failure {
                    seed: s,
                    description: format!("{} exceeded tolerance {:e}", c.name, c.tolerance),
                    magnitude: m,
                });
            }
        }
    }
    AuditReport {
        suite: suite.to_string(),
        trials,
        seed,
        tolerance: 1.0,
        max_violation,
        checks: summaries,
        failures,
    }
}

const AXIOM_CHECKS: &[Check] = &[
    check("faithfulness_real_zero", 1e-10),
    check("faithfulness_nonreal_positive", 1e-10),
    check("range_and_symmetry", 1e-10),
    check("monotonicity", 1e-9),
    check("selective_monotonicity", 1e-9),
    check("convexity", 1e-9),
    check("direct_sum_additivity", 1e-10),
    check("real_kraus_commute_with_conjugation", 1e-12),
    check("completion_is_channel", 1e-9),
    check("relative_entropy_equals_coherence", 1e-9),
    check("affinity_hellinger_bhattacharyya", 1e-10),
    check("chernoff_grid_dominance", 1e-10),
];

fn excess(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).max(0.0)
}

fn axiom_trial(seed: u64) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = rng.random_range(2..=4usize);
    let k = rng.random_range(1..=3usize);
    let mu = rng.random_range(0.02..0.98);
    let m = |rho: &DensityMatrix| m_tsallis(rho, mu).map(|v| v.value);

    let rho = random_density_with(d, &mut rng);
    let m_rho = m(&rho)?;

    let real = random_real_density_with(d, &mut rng);
    let faithful_real = m(&real)?.abs();
    let faithful_nonreal = if m_rho > 0.0 || rho.imag_max() <= 1e-12 {
        0.0
    } else {
        rho.imag_max()
    };

    let symmetry = [
        excess(0.0, m_rho),
        excess(m_rho, 1.0),
        (m_rho - m(&rho.conjugate())?).abs(),
        (m_rho - m_tsallis(&rho, 1.0 - mu)?.value).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);

    let channel = random_real_channel(d, k, seed)?;
    let (out, outcomes) = channel.apply(&rho)?;
    let monotone = excess(m(&DensityMatrix::new(out)?)?, m_rho);
    let mut average = 0.0;
    for o in &outcomes.outcomes {
        average += o.probability * m(&o.state)?;
    }
    let selective = excess(average, m_rho);

    let parts = rng.random_range(2..=3usize);
    let states: Vec<DensityMatrix> = (0..parts)
        .map(|_| random_density_with(d, &mut rng))
        .collect();
    let weights: Vec<f64> = (0..parts).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mixture: Vec<(f64, &DensityMatrix)> =
        weights.iter().map(|w| w / total).zip(&states).collect();
    let mut convex_rhs = 0.0;
    for (p, s) in &mixture {
        convex_rhs += p * m(s)?;
    }
    let convex = excess(m(&DensityMatrix::mixture(&mixture)?)?, convex_rhs);

    let d2 = rng.random_range(1..=3usize);
    let other = random_density_with(d2, &mut rng);
    let p = rng.random_range(0.01..0.99);
    let sum = DensityMatrix::direct_sum(p, &rho, &other)?;
    let additivity = (m(&sum)? - p * m_rho - (1.0 - p) * m(&other)?).abs();

    let commute = channel.conjugation_deviation(&rho);

    let shrink = rng.random_range(0.3..0.95f64).sqrt();
    let partial = RealOperation::new(channel.kraus().iter().map(|k| k * shrink).collect())?;
    let completion = partial.complete_to_channel()?.validate().defect_max;

    let q = real_orthogonal_diagonalizer(&rho);
    let coherence = relative_entropy_coherence(&rho.rotate_real(&q)?)?;
    let rel_ent = (m_rel_entropy(&rho)?.value - coherence).abs();

    let star = rho.conjugate();
    let half = m_tsallis(&rho, 0.5)?.value;
    let identities = [
        (half - (1.0 - affinity(&rho, &star)?)).abs(),
        (half - 0.5 * hellinger(&rho, &star)?).abs(),
        (half - (1.0 - 2.0 * bhattacharyya(&rho, &star)?)).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);

    let bound = chernoff_imaginarity(&rho)?.value;
    let mut dominance = 0.0f64;
    for i in 0..=100 {
        let grid_mu = i as f64 / 100.0;
        dominance = dominance.max(excess(
            bound,
            0.5 * chernoff_quantity(&rho, &star, grid_mu)?,
        ));
    }

    Ok(vec![
        faithful_real,
        faithful_nonreal,
        symmetry,
        monotone,
        selective,
        convex,
        additivity,
        commute,
        completion,
        rel_ent,
        identities,
        dominance,
    ])
}

pub fn axioms(trials: usize, seed: u64) -> AuditReport {
    audit("axioms", AXIOM_CHECKS, trials, seed, axiom_trial)
}

const GAUSSIAN_CHECKS: &[Check] = &[
    check("williamson_reconstruction", 1e-7),
    check("williamson_symplectic", 1e-8),
    check("conjugated_factor_symplectic", 1e-8),
    check("power_commutes_with_conjugation", 1e-8),
    check("mu_symmetry", 1e-9),
    check("half_specialization", 1e-10),
    check("range", 1e-10),
    check("real_state_zero", 1e-10),
];

fn gaussian_trial(seed: u64) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modes = rng.random_range(1..=3usize);
    let mu = rng.random_range(0.02..0.98);
    let g = random_gaussian_with(modes, &mut rng);
    let v = g.cov();

    let w = williamson(v)?;
    let rebuilt = w.rebuild(|nu| nu);
    let reconstruction = max_abs_real(&(&rebuilt - v)) / max_abs_real(v).max(1.0);
    let symplectic = w.symplectic_defect();
    let o = conjugation_reflection(modes);
    let omega = symplectic_form(modes);
    let oso = &o * &w.s * &o;
    let conj_symplectic = max_abs_real(&(&oso * &omega * oso.transpose() - &omega));

    let (powered, _) = power_state(&g, mu)?;
    let a = conjugate_gaussian(&powered);
    let (b, _) = power_state(&conjugate_gaussian(&g), mu)?;
    let commute = max_abs_real(&(a.cov() - b.cov())) / max_abs_real(a.cov()).max(1.0);

    let value = m_tsallis_gaussian(&g, mu)?.value;
    let symmetry = (value - m_tsallis_gaussian(&g, 1.0 - mu)?.value).abs();
    let half = (m_tsallis_gaussian(&g, 0.5)?.value - m_tsallis_gaussian_half(&g)?).abs();
    let range = excess(0.0, value).max(excess(value, 1.0));

    let real_cov = (v + &o * v * &o).scale(0.5);
    let real_mean = RVec::from_fn(2 * modes, |i, _| if i % 2 == 0 { g.mean()[i] } else { 0.0 });
    let real = GaussianState::new(real_mean, real_cov)?;
    let real_zero = m_tsallis_gaussian(&real, mu)?.value.abs();

    Ok(vec![
        reconstruction,
        symplectic,
        conj_symplectic,
        commute,
        symmetry,
        half,
        range,
        real_zero,
    ])
}

pub fn gaussian(trials: usize, seed: u64) -> AuditReport {
    audit("gaussian", GAUSSIAN_CHECKS, trials, seed, gaussian_trial)
}

pub const ORACLE_CUTOFF: usize = 80;

const ORACLE_CHECKS: &[Check] = &[
    check("fock_vs_gaussian", 1e-4),
    check("closed_form_vs_gaussian", 1e-10),
];

/// The 3x3x3x3 one-mode grid over `nu`, `|zeta|`, `theta` and the mean of
/// the `p` quadrature.
pub fn oracle_grid() -> Vec<OneModeParams> {
    let mut grid = Vec::with_capacity(81);
    for nu in [1.0, 1.5, 3.0] {
        for zeta in [0.0, 0.3, 0.7] {
            for theta in [0.0, FRAC_PI_4, FRAC_PI_2] {
                for x2 in [0.0, 1.0, 2.0] {
                    grid.push(OneModeParams::from_mean(0.0, x2, zeta, theta, nu));
                }
            }
        }
    }
    grid
}

/// Fixed-grid comparison of the Gaussian formula against a truncated Fock
/// computation; trial `i` is grid point `i`.
pub fn oracle() -> AuditReport {
    let grid = oracle_grid();
    audit("oracle", ORACLE_CHECKS, grid.len(), 0, |i| {
        let p = &grid[i as usize];
        let gauss = m_tsallis_gaussian(&one_mode_from_params(p)?, 0.5)?.value;
        let fock = m_tsallis(&fock_truncate(p, ORACLE_CUTOFF)?, 0.5)?.value;
        Ok(vec![
            (gauss - fock).abs(),
            (gauss - one_mode_closed_form(p)).abs(),
        ])
    })
}
