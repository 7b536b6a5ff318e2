//! Low-lying spectrum with resolved small gaps.
//!
//! With a single projector the effective block is `D + ρ u uᵀ`, whose
//! eigenvalues are the roots of `1 + ρ Σ_j w_j / (d_j − λ) = 0`. Each root is
//! located as an offset from its nearest pole `d_j = a·E_j`, so splittings far
//! below `ulp(a·E)` survive. Several projectors fall back to the dense
//! eigensolver.

use super::{assemble_effective, complement, factored_levels, LevelDecomposition, ProjectorWeights};
use crate::numkit::eigvalsh;
use crate::Result;

/// Lowest eigenvalues as `origin + offsets[i]`, offsets ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct LowSpectrum {
    pub origin: f64,
    pub offsets: Vec<f64>,
    /// Dimension of the effective block.
    pub reduced_dim: usize,
    /// Whether the secular path was used.
    pub secular: bool,
}

impl LowSpectrum {
    pub fn value(&self, i: usize) -> f64 {
        self.origin + self.offsets[i]
    }

    /// `E_l − E_0`.
    pub fn gap(&self, l: usize) -> Option<f64> {
        Some(self.offsets.get(l)? - self.offsets.first()?)
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }
}

pub fn low_spectrum(decomp: &LevelDecomposition, weights: &ProjectorWeights, count: usize) -> Result<LowSpectrum> {
    if decomp.k() == 1 && weights.count() == 1 {
        return Ok(secular_path(decomp, weights.chi[0], count));
    }
    let eff = assemble_effective(decomp, weights)?;
    let mut values = if eff.dim() == 0 { Vec::new() } else { eigvalsh(&eff.matrix)? };
    for (value, mult) in factored_levels(decomp, &eff.kappa) {
        let c = mult.to_count().map_or(count, |c| (c as usize).min(count));
        values.extend(std::iter::repeat_n(value, c));
    }
    values.sort_by(f64::total_cmp);
    values.truncate(count);
    let origin = values.first().copied().unwrap_or(0.0);
    Ok(LowSpectrum {
        origin,
        offsets: values.iter().map(|v| v - origin).collect(),
        reduced_dim: eff.dim(),
        secular: false,
    })
}

struct Pole {
    energy: f64,
    weight: f64,
}

fn secular_path(decomp: &LevelDecomposition, chi: f64, count: usize) -> LowSpectrum {
    let a = decomp.a_coeff;
    let rho = decomp.b_coeff * chi;
    let mut poles: Vec<Pole> = decomp
        .levels
        .iter()
        .filter(|l| l.z[0] > 0.0)
        .map(|l| Pole { energy: l.energy, weight: l.z[0] * l.z[0] })
        .collect();
    poles.sort_by(|p, q| (a * p.energy).total_cmp(&(a * q.energy)));
    let kappa: Vec<usize> = decomp.levels.iter().map(|l| usize::from(l.z[0] > 0.0)).collect();
    let reduced_dim = poles.len();

    let origin_energy = poles
        .first()
        .map(|p| p.energy)
        .or_else(|| decomp.levels.first().map(|l| l.energy))
        .unwrap_or(0.0);
    let origin = a * origin_energy;
    let mut offsets: Vec<f64> = Vec::new();

    let m = poles.len();
    let wanted = count.min(m);
    if a == 0.0 || m == 1 {
        // all poles coincide: one shifted root, the rest stay on the pole
        let shift = if m > 0 { rho * poles.iter().map(|p| p.weight).sum::<f64>() } else { 0.0 };
        if m > 0 {
            offsets.push(a * (poles[0].energy - origin_energy) + shift);
            offsets.extend(std::iter::repeat_n(0.0, m - 1));
        }
    } else if rho == 0.0 {
        offsets.extend(poles.iter().take(wanted).map(|p| a * (p.energy - origin_energy)));
    } else {
        for i in 0..wanted {
            // interval bounded by poles (lo, hi); None means the outer side
            let (lo, hi) = if rho < 0.0 {
                (i.checked_sub(1), Some(i))
            } else {
                (Some(i), (i + 1 < m).then_some(i + 1))
            };
            offsets.push(root_offset(&poles, a, rho, lo, hi, origin_energy));
        }
    }

    for (li, mult) in complement(decomp, &kappa) {
        let c = mult.to_count().map_or(count, |c| (c as usize).min(count));
        offsets.extend(std::iter::repeat_n(a * (decomp.levels[li].energy - origin_energy), c));
    }
    offsets.sort_by(f64::total_cmp);
    offsets.truncate(count);
    LowSpectrum { origin, offsets, reduced_dim, secular: true }
}

/// Secular function with the argument written as `d_ref + tau`.
///
/// Each off-reference term is split as `w/Δ + w·τ/(Δ(Δ − τ))` so the
/// τ-dependence survives even when `τ ≪ ulp(Δ)`.
fn secular(poles: &[Pole], a: f64, rho: f64, reference: usize, tau: f64) -> f64 {
    let e_ref = poles[reference].energy;
    let mut constant = 0.0;
    let mut linear = 0.0;
    for (j, p) in poles.iter().enumerate() {
        if j != reference {
            let delta = a * (p.energy - e_ref);
            constant += p.weight / delta;
            linear += p.weight / (delta * (delta - tau));
        }
    }
    (1.0 + rho * constant) + rho * tau * linear - rho * poles[reference].weight / tau
}

fn root_offset(poles: &[Pole], a: f64, rho: f64, lo: Option<usize>, hi: Option<usize>, origin_energy: f64) -> f64 {
    // f is monotone in λ with sign(f') = sign(ρ); right of the root f has sign(ρ)
    let right_sign = rho.signum();
    let (reference, direction, span) = match (lo, hi) {
        (Some(l), Some(h)) => {
            let width = a * (poles[h].energy - poles[l].energy);
            let mid = 0.5 * width;
            if secular(poles, a, rho, l, mid).signum() == right_sign {
                (l, 1.0, mid)
            } else {
                (h, -1.0, width - mid)
            }
        }
        (Some(l), None) => (l, 1.0, rho.abs()),
        (None, Some(h)) => (h, -1.0, rho.abs()),
        (None, None) => unreachable!("root interval needs a pole"),
    };
    let near_sign = -direction * right_sign;
    let eval = |t: f64| secular(poles, a, rho, reference, direction * t);

    let mut lo_t = span * 1e-300;
    let mut hi_t = span;
    if lo_t == 0.0 || eval(lo_t).signum() != near_sign {
        return a * (poles[reference].energy - origin_energy);
    }
    for _ in 0..400 {
        let mid = if hi_t > 4.0 * lo_t { (lo_t * hi_t).sqrt() } else { 0.5 * (lo_t + hi_t) };
        if mid <= lo_t || mid >= hi_t {
            break;
        }
        if eval(mid).signum() == near_sign {
            lo_t = mid;
        } else {
            hi_t = mid;
        }
    }
    a * (poles[reference].energy - origin_energy) + direction * 0.5 * (lo_t + hi_t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::{binomial, SignedLogReal};
    use crate::reduction::{full_spectrum, Level};

    fn uniform_driver(n: u32, s: f64, scale: f64) -> (LevelDecomposition, ProjectorWeights) {
        // −(1−s)Σσx  − s·scale·|0…0⟩⟨0…0| in the driver eigenbasis
        let levels = (0..=n)
            .map(|k| {
                let lam = binomial(u64::from(n), u64::from(k));
                let z = (lam.ln_abs() - f64::from(n) * std::f64::consts::LN_2).exp().sqrt();
                Level::rank_one(2.0 * f64::from(k) - f64::from(n), lam, vec![z])
            })
            .collect();
        (
            LevelDecomposition { s, a_coeff: 1.0 - s, b_coeff: s, n_qubits: n, levels },
            ProjectorWeights::new(vec![-scale]),
        )
    }

    #[test]
    fn agrees_with_dense_path() {
        for &(n, s, scale) in &[(6u32, 0.3, 1.0), (8, 0.55, 8.0), (5, 0.0, 5.0), (7, 1.0, 7.0), (9, 0.9, -3.0)] {
            let (decomp, w) = uniform_driver(n, s, scale);
            decomp.validate().unwrap();
            let dense = full_spectrum(&decomp, &w).unwrap().lowest(6);
            let low = low_spectrum(&decomp, &w, 6).unwrap();
            assert!(low.secular);
            for (i, d) in dense.iter().enumerate() {
                assert!((low.value(i) - d).abs() < 1e-12, "n={n} s={s}: {} vs {d}", low.value(i));
            }
        }
    }

    #[test]
    fn resolves_splitting_below_ulp() {
        // two-level Grover at n = 120: gap 2^-60 at s = 1/2, far below ulp(1/2)
        let n = 120;
        let big = f64::from(n) * std::f64::consts::LN_2;
        let z_t = (-0.5 * big).exp();
        let levels = vec![
            Level::rank_one(-1.0, SignedLogReal::ONE, vec![z_t]),
            Level::rank_one(
                0.0,
                SignedLogReal::from_ln(big + (-(-big).exp()).ln_1p()),
                vec![(1.0 - z_t * z_t).sqrt()],
            ),
        ];
        let decomp = LevelDecomposition { s: 0.5, a_coeff: 0.5, b_coeff: 1.0, n_qubits: n, levels };
        let low = low_spectrum(&decomp, &ProjectorWeights::new(vec![-0.5]), 3).unwrap();
        let gap = low.gap(1).unwrap();
        assert!(((gap - 2f64.powi(-60)) / 2f64.powi(-60)).abs() < 1e-9, "{gap:e}");
        assert!((low.offsets[2] - 0.5).abs() < 1e-15);
    }
}
