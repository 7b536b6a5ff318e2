//! Seeded random-draw comparison of reduced and brute-force spectra.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{compare_values, full_hamiltonian, full_spectrum, Realization, MAX_QUBITS};
use crate::models::{build, BitString, Driver, ModelSpec};
use crate::reduction::{assemble_effective, low_spectrum, reconstruct_full_spectrum};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelKind {
    GroverPlainGrover,
    GroverPlainStandard,
    GroverNoiseStd,
    GroverNoiseGrv,
    Tunneling,
    MultiSolution,
    MLevelGrover,
}

impl ModelKind {
    pub const ALL: [ModelKind; 7] = [
        ModelKind::GroverPlainGrover,
        ModelKind::GroverPlainStandard,
        ModelKind::GroverNoiseStd,
        ModelKind::GroverNoiseGrv,
        ModelKind::Tunneling,
        ModelKind::MultiSolution,
        ModelKind::MLevelGrover,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::GroverPlainGrover => "grover-plain/grover",
            ModelKind::GroverPlainStandard => "grover-plain/standard",
            ModelKind::GroverNoiseStd => "grover-noise-std",
            ModelKind::GroverNoiseGrv => "grover-noise-grv",
            ModelKind::Tunneling => "tunneling",
            ModelKind::MultiSolution => "multi-solution",
            ModelKind::MLevelGrover => "mlevel-grover",
        }
    }
}

/// Random model parameters plus a random unrotated realization.
pub fn random_instance(kind: ModelKind, n: u32, rng: &mut impl Rng) -> (ModelSpec, Realization) {
    let dim = 1u64 << n;
    let scale = if rng.random_bool(0.5) { 1.0 } else { f64::from(n) };
    let target = rng.random_range(0..dim);
    let plain = Realization { target, signs: Vec::new() };
    match kind {
        ModelKind::GroverPlainGrover | ModelKind::GroverPlainStandard => {
            let driver = if kind == ModelKind::GroverPlainGrover { Driver::Grover } else { Driver::Standard };
            (ModelSpec::GroverPlain { driver, n, target_scale: scale }, plain)
        }
        ModelKind::GroverNoiseStd | ModelKind::GroverNoiseGrv => {
            let epsilon = rng.random_range(0.0..3.0);
            let q = rng.random_range(0..=n);
            // choose which qubits of the rotated target are set, then the signs
            // that map σ* onto it
            let rotated: u64 = sample(rng, n as usize, q as usize).iter().map(|i| 1u64 << i).sum();
            let signs = (0..n).map(|i| if (target ^ rotated) >> i & 1 == 1 { 1 } else { -1 }).collect();
            let spec = if kind == ModelKind::GroverNoiseStd {
                ModelSpec::GroverNoiseStd { n, epsilon, q, target_scale: scale }
            } else {
                ModelSpec::GroverNoiseGrv { n, epsilon, q, target_scale: scale }
            };
            (spec, Realization { target, signs })
        }
        ModelKind::Tunneling => {
            let barriers = (0..n).map(|_| rng.random_range(0.25..2.0)).collect();
            (ModelSpec::Tunneling { n, barriers }, plain)
        }
        ModelKind::MultiSolution => {
            let p = rng.random_range(1..=5usize.min(dim as usize - 1));
            let targets = sample(rng, dim as usize, p).iter().map(|x| BitString::from_index(x as u64, n)).collect();
            (ModelSpec::MultiSolution { n, targets }, plain)
        }
        ModelKind::MLevelGrover => {
            let m = rng.random_range(2..=6usize.min(dim as usize));
            let mut cuts: Vec<u128> = sample(rng, dim as usize - 1, m - 1).iter().map(|c| c as u128 + 1).collect();
            cuts.sort_unstable();
            cuts.push(u128::from(dim));
            let degeneracies = cuts.iter().scan(0u128, |prev, &c| Some(c - std::mem::replace(prev, c))).collect();
            let mut energies: Vec<f64> = Vec::with_capacity(m);
            while energies.len() < m {
                let e = rng.random_range(-3.0..3.0);
                if energies.iter().all(|x: &f64| (x - e).abs() > 1e-3) {
                    energies.push(e);
                }
            }
            (ModelSpec::MLevelGrover { energies, degeneracies }, plain)
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub n_min: u32,
    pub n_max: u32,
    pub draws: usize,
    pub s_points: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub kinds: Vec<ModelKind>,
    /// Flips the sign of `χ₀` in the reduced model (mutation check).
    pub inject_chi_sign_error: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            n_min: 3,
            n_max: MAX_QUBITS,
            draws: 20,
            s_points: 11,
            seed: 0,
            tolerance: 1e-9,
            kinds: ModelKind::ALL.to_vec(),
            inject_chi_sign_error: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CaseOutcome {
    pub kind: ModelKind,
    pub n: u32,
    pub draw: usize,
    pub s: f64,
    pub model: ModelSpec,
    pub max_deviation: f64,
    /// Deviation of the two lowest values from the small-gap solver.
    pub low_deviation: f64,
    pub reduced_dim: usize,
    pub dimension_ok: bool,
}

impl CaseOutcome {
    pub fn worst(&self) -> f64 {
        self.max_deviation.max(self.low_deviation)
    }
}

/// Reduced vs brute-force spectra for one model instance over an `s` grid.
pub fn run_case(
    model: &ModelSpec,
    realization: &Realization,
    s_values: &[f64],
    inject_chi_sign_error: bool,
) -> Result<Vec<(f64, f64, f64, usize)>> {
    s_values
        .iter()
        .map(|&s| {
            let (decomp, mut weights) = build(model, s)?;
            if inject_chi_sign_error {
                weights.chi[0] = -weights.chi[0];
            }
            let eff = assemble_effective(&decomp, &weights)?;
            let rec = reconstruct_full_spectrum(&decomp, &eff)?;
            let full = full_spectrum(&full_hamiltonian(model, s, Some(realization))?)?;
            let cmp = compare_values(&rec, &full)?;
            let low = low_spectrum(&decomp, &weights, 2)?;
            let low_dev = (0..low.len().min(full.len())).fold(0.0f64, |m, i| m.max((low.value(i) - full[i]).abs()));
            Ok((s, cmp.max_deviation, low_dev, eff.dim()))
        })
        .collect()
}

/// Seed for one `(kind, n, draw)` task, independent of scheduling.
fn task_seed(seed: u64, kind: ModelKind, n: u32, draw: usize) -> u64 {
    let mut z = seed ^ (kind as u64) << 56 ^ u64::from(n) << 40 ^ draw as u64;
    // splitmix64 finalizer
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub cases: Vec<CaseOutcome>,
}

impl VerifyReport {
    /// `(kind, worst deviation, number of cases)` in kind order.
    pub fn per_kind(&self) -> Vec<(ModelKind, f64, usize)> {
        self.config
            .kinds
            .iter()
            .map(|&k| {
                let cases: Vec<_> = self.cases.iter().filter(|c| c.kind == k).collect();
                (k, cases.iter().fold(0.0f64, |m, c| m.max(c.worst())), cases.len())
            })
            .collect()
    }

    pub fn failures(&self) -> Vec<&CaseOutcome> {
        self.cases
            .iter()
            .filter(|c| !(c.worst() < self.config.tolerance) || !c.dimension_ok)
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }
}

/// Runs the full protocol; parallel over `(kind, n, draw)` with results in a
/// fixed order.
pub fn verify(config: &VerifyConfig) -> Result<VerifyReport> {
    if config.n_max > MAX_QUBITS {
        return Err(Error::TooManyQubits { n: config.n_max, max: MAX_QUBITS });
    }
    if config.n_min < 1 || config.n_min > config.n_max || config.s_points < 2 {
        return Err(Error::InvalidInput("verify needs 1 <= n_min <= n_max and at least 2 s-points".into()));
    }
    let s_values: Vec<f64> = (0..config.s_points).map(|i| i as f64 / (config.s_points - 1) as f64).collect();
    let mut tasks = Vec::new();
    for &kind in &config.kinds {
        for n in config.n_min..=config.n_max {
            // multi-solution needs a non-target state
            if kind == ModelKind::MultiSolution && n < 2 {
                continue;
            }
            for draw in 0..config.draws {
                tasks.push((kind, n, draw));
            }
        }
    }
    // largest matrices first for better load balance; order restored below
    let mut order: Vec<usize> = (0..tasks.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(tasks[i].1));
    let mut results: Vec<(usize, Result<Vec<CaseOutcome>>)> = order
        .par_iter()
        .map(|&i| {
            let (kind, n, draw) = tasks[i];
            let mut rng = ChaCha8Rng::seed_from_u64(task_seed(config.seed, kind, n, draw));
            let (model, realization) = random_instance(kind, n, &mut rng);
            let rule = model.dimension_rule();
            let out = run_case(&model, &realization, &s_values, config.inject_chi_sign_error).map(|rows| {
                rows.into_iter()
                    .map(|(s, dev, low, dim)| CaseOutcome {
                        kind,
                        n,
                        draw,
                        s,
                        model: model.clone(),
                        max_deviation: dev,
                        low_deviation: low,
                        reduced_dim: dim,
                        // the rule holds for generic s; endpoints may decouple levels
                        dimension_ok: rule.admits(dim) || s == 0.0 || s == 1.0,
                    })
                    .collect()
            });
            (i, out)
        })
        .collect();
    results.sort_by_key(|r| r.0);
    let mut cases = Vec::new();
    for (_, r) in results {
        cases.extend(r?);
    }
    Ok(VerifyReport { config: config.clone(), cases })
}
