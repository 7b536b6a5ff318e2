//! The generic reduction engine.
//!
//! Given `H = a·H_A + b·Σ_α χ_α |ψ_α⟩⟨ψ_α|` where `H_A = Σ_E E·P_E`, every
//! eigenvector with nonzero weight on some `ψ_α` lives in the span of the
//! projected states `|E_α⟩ = P_E|ψ_α⟩ / Z_α(E)`. Per level, a Cholesky factor
//! of the Gram matrix `⟨E_α|E_β⟩` yields an orthonormal basis `|ℰ_μ⟩` of that
//! span; the rest of each level is annihilated by `H_B` and contributes the
//! bare value `a·E`.

mod secular;

pub use secular::{low_spectrum, LowSpectrum};

use crate::numkit::{
    eigvalsh, pivoted_psd_cholesky, signed_logsumexp, CholFactor, SignedLogReal, SymMatrix, DEFAULT_TOL,
};
use crate::{Error, Result};

/// `χ_α` evaluated at the decomposition's `s`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectorWeights {
    pub chi: Vec<f64>,
}

impl ProjectorWeights {
    pub fn new(chi: Vec<f64>) -> Self {
        Self { chi }
    }

    pub fn count(&self) -> usize {
        self.chi.len()
    }
}

/// One eigenspace `Ω_E` of `H_A`.
#[derive(Clone, Debug)]
pub struct Level {
    pub energy: f64,
    /// `λ(E) = dim Ω_E`.
    pub degeneracy: SignedLogReal,
    /// `Z_α(E) = ‖P_E ψ_α‖`.
    pub z: Vec<f64>,
    /// `⟨E_α|E_β⟩`; only rows/columns with `Z_α(E) > 0` are meaningful.
    pub gram: SymMatrix,
}

impl Level {
    /// Level whose projected states all coincide (`k = 1`, or identical
    /// projections).
    pub fn rank_one(energy: f64, degeneracy: SignedLogReal, z: Vec<f64>) -> Self {
        let k = z.len();
        Self { energy, degeneracy, z, gram: SymMatrix::from_lower_fn(k, |_, _| 1.0) }
    }

    fn active(&self) -> Vec<usize> {
        (0..self.z.len()).filter(|&a| self.z[a] > 0.0).collect()
    }
}

#[derive(Clone, Debug)]
pub struct LevelDecomposition {
    pub s: f64,
    pub a_coeff: f64,
    pub b_coeff: f64,
    pub n_qubits: u32,
    pub levels: Vec<Level>,
}

impl LevelDecomposition {
    /// Number of projectors.
    pub fn k(&self) -> usize {
        self.levels.first().map_or(0, |l| l.z.len())
    }

    pub fn total_degeneracy(&self) -> SignedLogReal {
        let terms: Vec<_> = self.levels.iter().map(|l| l.degeneracy).collect();
        signed_logsumexp(&terms)
    }

    /// Checks shapes, completeness of every `ψ_α`, `Σ λ = 2^n` and the Gram
    /// diagonal.
    pub fn validate(&self) -> Result<()> {
        let k = self.k();
        if k == 0 {
            return Err(Error::ModelConstruction("no projectors".into()));
        }
        if !(self.a_coeff.is_finite() && self.b_coeff.is_finite()) {
            return Err(Error::ModelConstruction(format!("non-finite coefficients at s = {}", self.s)));
        }
        let mut norms = vec![0.0; k];
        for (i, level) in self.levels.iter().enumerate() {
            if level.z.len() != k {
                return Err(Error::DimensionMismatch { expected: k, found: level.z.len() });
            }
            if level.gram.dim() != k {
                return Err(Error::DimensionMismatch { expected: k, found: level.gram.dim() });
            }
            if !level.energy.is_finite() || level.z.iter().any(|z| !z.is_finite() || *z < 0.0) {
                return Err(Error::ModelConstruction(format!("level {i}: invalid energy or Z")));
            }
            for alpha in level.active() {
                norms[alpha] += level.z[alpha] * level.z[alpha];
                if (level.gram.get(alpha, alpha) - 1.0).abs() > 1e-10 {
                    return Err(Error::ModelConstruction(format!("level {i}: gram diagonal {alpha} is not 1")));
                }
                for beta in level.active() {
                    if level.gram.get(alpha, beta).abs() > 1.0 + 1e-10 {
                        return Err(Error::ModelConstruction(format!("level {i}: |gram| exceeds 1")));
                    }
                }
            }
        }
        for (alpha, norm) in norms.iter().enumerate() {
            if (norm - 1.0).abs() > 1e-10 {
                return Err(Error::ModelConstruction(format!(
                    "projector {alpha} not normalized across levels: Σ Z² = {norm}"
                )));
            }
        }
        let total = self.total_degeneracy().ln_abs();
        let expect = f64::from(self.n_qubits) * std::f64::consts::LN_2;
        if (total - expect).abs() > 1e-12 * expect.max(1.0) {
            return Err(Error::ModelConstruction(format!(
                "degeneracies sum to exp({total}), expected 2^{}",
                self.n_qubits
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BasisLabel {
    pub level: usize,
    pub energy: f64,
    pub mu: usize,
}

#[derive(Clone, Debug)]
pub struct EffectiveHamiltonian {
    pub matrix: SymMatrix,
    pub basis: Vec<BasisLabel>,
    /// `κ(E)` per level, in level order.
    pub kappa: Vec<usize>,
    /// `U[r][α] = ⟨ℰ_r|ψ_α⟩ = Z_α(E) T_{μα}`.
    pub coupling: Vec<Vec<f64>>,
}

impl EffectiveHamiltonian {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Clone, Debug)]
pub struct SpectrumReconstruction {
    pub reduced_eigs: Vec<f64>,
    /// `(a·E, λ(E) − κ(E))` for levels with a nonzero complement.
    pub factored_levels: Vec<(f64, SignedLogReal)>,
}

impl SpectrumReconstruction {
    pub fn total_multiplicity(&self) -> SignedLogReal {
        let mut terms: Vec<_> = self.factored_levels.iter().map(|l| l.1).collect();
        terms.push(SignedLogReal::from_f64(self.reduced_eigs.len() as f64));
        signed_logsumexp(&terms)
    }

    /// Full multiset, sorted; only for spectra small enough to enumerate.
    pub fn sorted_values(&self, limit: u64) -> Result<Vec<f64>> {
        let mut out = self.reduced_eigs.clone();
        for &(value, mult) in &self.factored_levels {
            let count = mult
                .to_count()
                .filter(|&c| c <= limit)
                .ok_or_else(|| Error::InvalidInput(format!("multiplicity {mult} too large to enumerate")))?;
            out.extend(std::iter::repeat_n(value, count as usize));
        }
        out.sort_by(f64::total_cmp);
        Ok(out)
    }

    /// The `count` lowest values of the full spectrum.
    pub fn lowest(&self, count: usize) -> Vec<f64> {
        let mut out = self.reduced_eigs.clone();
        for &(value, mult) in &self.factored_levels {
            let c = mult.to_count().map_or(count, |c| (c as usize).min(count));
            out.extend(std::iter::repeat_n(value, c));
        }
        out.sort_by(f64::total_cmp);
        out.truncate(count);
        out
    }
}

/// Orthonormal basis of one level's effective subspace.
///
/// Returns the factor `T` (rows `μ`, columns over all `k` projectors, zero
/// where `Z_α(E) = 0`) and `κ(E)`.
pub fn orthogonalize_level(gram: &SymMatrix, z: &[f64], tol: f64) -> Result<(CholFactor, usize)> {
    if gram.dim() != z.len() {
        return Err(Error::DimensionMismatch { expected: z.len(), found: gram.dim() });
    }
    let k = z.len();
    let active: Vec<usize> = (0..k).filter(|&a| z[a] > 0.0).collect();
    let inner = pivoted_psd_cholesky(&gram.submatrix(&active), tol).map_err(|e| match e {
        Error::NotPositiveSemidefinite { pivot, remainder } => Error::ModelConstruction(format!(
            "level gram not PSD (column {}, remainder {remainder:.3e})",
            active[pivot]
        )),
        other => other,
    })?;
    let factor = inner
        .factor
        .iter()
        .map(|row| {
            let mut full = vec![0.0; k];
            for (i, &a) in active.iter().enumerate() {
                full[a] = row[i];
            }
            full
        })
        .collect();
    let mut pivots: Vec<usize> = inner.pivots.iter().map(|&i| active[i]).collect();
    pivots.extend((0..k).filter(|a| z[*a] <= 0.0));
    let rank = inner.rank;
    Ok((CholFactor { factor, rank, pivots, tolerance: tol }, rank))
}

pub fn assemble_effective(decomp: &LevelDecomposition, weights: &ProjectorWeights) -> Result<EffectiveHamiltonian> {
    let k = decomp.k();
    if weights.count() != k {
        return Err(Error::DimensionMismatch { expected: k, found: weights.count() });
    }
    let mut basis = Vec::new();
    let mut kappa = Vec::with_capacity(decomp.levels.len());
    let mut coupling = Vec::new();
    for (li, level) in decomp.levels.iter().enumerate() {
        let (t, rank) = orthogonalize_level(&level.gram, &level.z, DEFAULT_TOL)?;
        if let Some(lambda) = level.degeneracy.to_count() {
            if rank as u64 > lambda {
                return Err(Error::ModelConstruction(format!(
                    "level {li}: κ = {rank} exceeds degeneracy {lambda}"
                )));
            }
        }
        for (mu, row) in t.factor.iter().enumerate() {
            basis.push(BasisLabel { level: li, energy: level.energy, mu });
            coupling.push((0..k).map(|a| level.z[a] * row[a]).collect::<Vec<_>>());
        }
        kappa.push(rank);
    }
    let weight: Vec<f64> = weights.chi.iter().map(|c| decomp.b_coeff * c).collect();
    let matrix = SymMatrix::from_lower_fn(basis.len(), |r, c| {
        let hb: f64 = (0..k).map(|a| weight[a] * coupling[r][a] * coupling[c][a]).sum();
        if r == c {
            decomp.a_coeff * basis[r].energy + hb
        } else {
            hb
        }
    });
    Ok(EffectiveHamiltonian { matrix, basis, kappa, coupling })
}

pub fn reconstruct_full_spectrum(
    decomp: &LevelDecomposition,
    eff: &EffectiveHamiltonian,
) -> Result<SpectrumReconstruction> {
    let reduced_eigs = if eff.dim() == 0 { Vec::new() } else { eigvalsh(&eff.matrix)? };
    Ok(SpectrumReconstruction { reduced_eigs, factored_levels: factored_levels(decomp, &eff.kappa) })
}

fn factored_levels(decomp: &LevelDecomposition, kappa: &[usize]) -> Vec<(f64, SignedLogReal)> {
    complement(decomp, kappa)
        .into_iter()
        .map(|(li, mult)| (decomp.a_coeff * decomp.levels[li].energy, mult))
        .collect()
}

/// `(level index, λ(E) − κ(E))` for levels with a nonzero complement.
fn complement(decomp: &LevelDecomposition, kappa: &[usize]) -> Vec<(usize, SignedLogReal)> {
    decomp
        .levels
        .iter()
        .zip(kappa)
        .enumerate()
        .filter_map(|(li, (level, &k))| {
            let rest = signed_logsumexp(&[level.degeneracy, -SignedLogReal::from_f64(k as f64)]);
            (rest.sign() > 0).then_some((li, rest))
        })
        .collect()
}

/// Builds the effective block and reconstructs the full spectrum in one go.
pub fn full_spectrum(decomp: &LevelDecomposition, weights: &ProjectorWeights) -> Result<SpectrumReconstruction> {
    let eff = assemble_effective(decomp, weights)?;
    reconstruct_full_spectrum(decomp, &eff)
}
