use std::f64::consts::{FRAC_PI_4, LN_2};

use super::formulas::{driver_angles, krawtchouk_overlap, tunneling_level_data, zk_noisy_standard};
use super::{Driver, ModelSpec};
use crate::numkit::{binomial, SignedLogReal, SymMatrix};
use crate::reduction::{full_spectrum, low_spectrum, Level, LevelDecomposition, LowSpectrum, ProjectorWeights, SpectrumReconstruction};
use crate::{Error, Result};

/// Level decomposition and projector weights of `model` at `s`.
pub fn build(model: &ModelSpec, s: f64) -> Result<(LevelDecomposition, ProjectorWeights)> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidInput(format!("s = {s} outside [0, 1]")));
    }
    model.validate()?;
    let out = match model {
        ModelSpec::GroverPlain { driver: Driver::Standard, n, target_scale } => {
            noisy_standard(*n, 0.0, 0, *target_scale, s)
        }
        ModelSpec::GroverPlain { driver: Driver::Grover, n, target_scale } => {
            let rest = SignedLogReal::from_ln(f64::from(*n) * LN_2 + (-(2f64.powi(-(*n as i32)))).ln_1p());
            mlevel(*n, &[(-target_scale, SignedLogReal::ONE), (0.0, rest)], s)
        }
        ModelSpec::GroverNoiseStd { n, epsilon, q, target_scale } => noisy_standard(*n, *epsilon, *q, *target_scale, s),
        ModelSpec::GroverNoiseGrv { n, epsilon, q, target_scale } => noisy_grover(*n, *epsilon, *q, *target_scale, s),
        ModelSpec::Tunneling { n, barriers } => tunneling(*n, barriers, s),
        ModelSpec::MultiSolution { n, targets } => {
            let p = targets.len();
            let dist: Vec<Vec<u32>> = targets.iter().map(|a| targets.iter().map(|b| a.hamming(b)).collect()).collect();
            let levels = (0..=*n)
                .map(|u| {
                    let lam = binomial(u64::from(*n), u64::from(u));
                    let z = uniform_weight(lam, *n);
                    let gram = SymMatrix::from_lower_fn(p, |i, j| krawtchouk_overlap(*n, u, dist[i][j]));
                    Level { energy: 2.0 * f64::from(u) - f64::from(*n), degeneracy: lam, z: vec![z; p], gram }
                })
                .collect();
            (
                LevelDecomposition { s, a_coeff: 1.0 - s, b_coeff: s, n_qubits: *n, levels },
                ProjectorWeights::new(vec![-1.0; p]),
            )
        }
        ModelSpec::MLevelGrover { energies, degeneracies } => {
            let n = model.n();
            let pairs: Vec<(f64, SignedLogReal)> =
                energies.iter().zip(degeneracies).map(|(&e, &d)| (e, SignedLogReal::from_f64(d as f64))).collect();
            mlevel(n, &pairs, s)
        }
    };
    Ok(out)
}

/// `Z = sqrt(λ / 2^n)`: weight of the uniform superposition (or of any basis
/// state in the transverse-field eigenbasis) on a level of size `λ`.
fn uniform_weight(lambda: SignedLogReal, n: u32) -> f64 {
    (0.5 * (lambda.ln_abs() - f64::from(n) * LN_2)).exp()
}

fn noisy_standard(n: u32, epsilon: f64, q: u32, scale: f64, s: f64) -> (LevelDecomposition, ProjectorWeights) {
    let angles = driver_angles(s, epsilon);
    let theta = if epsilon == 0.0 { FRAC_PI_4 } else { angles.theta };
    let levels = (0..=n)
        .map(|k| {
            let z = zk_noisy_standard(n, q, k, theta).to_f64();
            Level::rank_one(2.0 * f64::from(k) - f64::from(n), binomial(u64::from(n), u64::from(k)), vec![z])
        })
        .collect();
    (
        LevelDecomposition { s, a_coeff: angles.gamma, b_coeff: s, n_qubits: n, levels },
        ProjectorWeights::new(vec![-scale]),
    )
}

fn noisy_grover(n: u32, epsilon: f64, q: u32, scale: f64, s: f64) -> (LevelDecomposition, ProjectorWeights) {
    let levels = (0..=n)
        .map(|k| {
            let lam = binomial(u64::from(n), u64::from(k));
            let psi0 = uniform_weight(lam, n);
            let mut gram = SymMatrix::identity(2);
            let target = if k == q {
                // ⟨E_ω′|E_ψ₀⟩ = 1/sqrt(C(n, q))
                gram.set(0, 1, (-0.5 * lam.ln_abs()).exp());
                1.0
            } else {
                0.0
            };
            Level { energy: 2.0 * f64::from(k) - f64::from(n), degeneracy: lam, z: vec![target, psi0], gram }
        })
        .collect();
    (
        LevelDecomposition { s, a_coeff: s * epsilon, b_coeff: 1.0, n_qubits: n, levels },
        ProjectorWeights::new(vec![-scale * s, -scale * (1.0 - s)]),
    )
}

fn tunneling(n: u32, barriers: &[f64], s: f64) -> (LevelDecomposition, ProjectorWeights) {
    let angles = driver_angles(s, 1.0);
    let k_proj = barriers.len();
    let levels = (0..=n)
        .map(|k| {
            let (z, overlap) = tunneling_level_data(n, k, angles.theta);
            let gram = SymMatrix::from_lower_fn(k_proj, |i, j| if i == j { 1.0 } else { overlap });
            Level {
                energy: 2.0 * f64::from(k) - f64::from(n),
                degeneracy: binomial(u64::from(n), u64::from(k)),
                z: vec![z; k_proj],
                gram,
            }
        })
        .collect();
    (
        LevelDecomposition { s, a_coeff: angles.gamma, b_coeff: s, n_qubits: n, levels },
        ProjectorWeights::new(barriers.to_vec()),
    )
}

fn mlevel(n: u32, levels: &[(f64, SignedLogReal)], s: f64) -> (LevelDecomposition, ProjectorWeights) {
    let levels = levels
        .iter()
        .map(|&(energy, lam)| Level::rank_one(energy, lam, vec![uniform_weight(lam, n)]))
        .collect();
    (
        LevelDecomposition { s, a_coeff: s, b_coeff: 1.0, n_qubits: n, levels },
        ProjectorWeights::new(vec![-(1.0 - s)]),
    )
}

/// Full reconstructed spectrum of `model` at `s`.
pub fn spectrum_at(model: &ModelSpec, s: f64) -> Result<SpectrumReconstruction> {
    let (decomp, weights) = build(model, s)?;
    full_spectrum(&decomp, &weights)
}

/// The `count` lowest eigenvalues of `model` at `s`.
pub fn low_spectrum_at(model: &ModelSpec, s: f64, count: usize) -> Result<LowSpectrum> {
    let (decomp, weights) = build(model, s)?;
    low_spectrum(&decomp, &weights, count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::BitString;
    use crate::reduction::assemble_effective;

    fn all_models(n: u32) -> Vec<ModelSpec> {
        let nf = f64::from(n);
        vec![
            ModelSpec::GroverPlain { driver: Driver::Grover, n, target_scale: 1.0 },
            ModelSpec::GroverPlain { driver: Driver::Standard, n, target_scale: nf },
            ModelSpec::GroverNoiseStd { n, epsilon: 1.7, q: n / 3, target_scale: nf },
            ModelSpec::GroverNoiseGrv { n, epsilon: 0.8, q: n / 2, target_scale: nf },
            ModelSpec::Tunneling { n, barriers: (0..n).map(|i| 0.5 + 0.1 * f64::from(i)).collect() },
            ModelSpec::MultiSolution {
                n,
                targets: vec![BitString::from_index(0, n), BitString::from_index(5, n), BitString::from_index(6, n)],
            },
            ModelSpec::MLevelGrover {
                energies: vec![-2.0, -0.5, 1.0],
                degeneracies: vec![1, 3, (1u128 << n) - 4],
            },
        ]
    }

    #[test]
    fn every_model_validates_across_s() {
        for n in [3, 6, 9] {
            for model in all_models(n) {
                for i in 0..=10 {
                    let s = f64::from(i) / 10.0;
                    let (decomp, w) = build(&model, s).unwrap();
                    decomp.validate().unwrap_or_else(|e| panic!("{model} s={s}: {e}"));
                    assert_eq!(w.count(), model.projector_count());
                }
            }
        }
    }

    #[test]
    fn dimensions_follow_the_table() {
        for n in [3, 5, 8] {
            for model in all_models(n) {
                for s in [0.13, 0.5, 0.87] {
                    let (decomp, w) = build(&model, s).unwrap();
                    let eff = assemble_effective(&decomp, &w).unwrap();
                    assert!(model.dimension_rule().admits(eff.dim()), "{model}: dim {} vs {}", eff.dim(), model.dimension_rule());
                }
            }
        }
    }

    #[test]
    fn noisy_std_n10_has_eleven_levels() {
        let m = ModelSpec::GroverNoiseStd { n: 10, epsilon: 0.5, q: 2, target_scale: 10.0 };
        assert_eq!(build(&m, 0.4).unwrap().0.levels.len(), 11);
    }

    #[test]
    fn noisy_grover_cross_overlap() {
        let m = ModelSpec::GroverNoiseGrv { n: 4, epsilon: 1.0, q: 2, target_scale: 4.0 };
        let (decomp, w) = build(&m, 0.3).unwrap();
        assert!((decomp.levels[2].gram.get(0, 1) - 1.0 / 6f64.sqrt()).abs() < 1e-15);
        assert_eq!(assemble_effective(&decomp, &w).unwrap().dim(), 6);
    }

    #[test]
    fn multi_solution_large_n_dimension() {
        let n = 60;
        let targets = (0..5u64).map(|i| BitString::from_index(0x9E37_79B9_7F4A_7C15u64.rotate_left(7 * i as u32) >> 4, n)).collect();
        let m = ModelSpec::MultiSolution { n, targets };
        let (decomp, w) = build(&m, 0.6).unwrap();
        decomp.validate().unwrap();
        assert!(assemble_effective(&decomp, &w).unwrap().dim() <= 300);
    }

    #[test]
    fn grover_plain_two_level_at_n40() {
        let m = ModelSpec::GroverPlain { driver: Driver::Grover, n: 40, target_scale: 1.0 };
        let (decomp, _) = build(&m, 0.5).unwrap();
        decomp.validate().unwrap();
        assert_eq!(decomp.levels.len(), 2);
    }

    #[test]
    fn rejects_s_out_of_range() {
        let m = ModelSpec::GroverPlain { driver: Driver::Grover, n: 3, target_scale: 1.0 };
        assert!(build(&m, 1.5).is_err());
    }
}
