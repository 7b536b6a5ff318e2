//! Brute-force `2^n × 2^n` Hamiltonians for small `n`.
//!
//! Basis index `x` has qubit `i` in bit `i`; bit value 1 means `σᶻ = −1`.
//! Noisy models are built in the original (unrotated) frame with explicit
//! noise signs, so agreement with the reduced spectrum also checks the gauge
//! step.

mod protocol;

pub use protocol::{random_instance, run_case, verify, CaseOutcome, ModelKind, VerifyConfig, VerifyReport};

use faer::{Mat, Side};

use crate::models::{Driver, ModelSpec};
use crate::numkit::SymMatrix;
use crate::reduction::SpectrumReconstruction;
use crate::{Error, Result};

pub const MAX_QUBITS: u32 = 10;

/// Concrete target and noise signs behind a rotated-frame model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    /// Basis index of `σ*`.
    pub target: u64,
    /// `δ_i ∈ {−1, +1}` per qubit; empty for noiseless models.
    pub signs: Vec<i8>,
}

impl Realization {
    /// Rotated target `σ′ = σ* ⊕ [δ > 0]`.
    pub fn rotated_target(&self) -> u64 {
        self.signs
            .iter()
            .enumerate()
            .fold(self.target, |t, (i, &d)| if d > 0 { t ^ (1 << i) } else { t })
    }

    /// The realization already in the rotated frame: target `0…01…1` of weight
    /// `q`, all noise signs negative.
    pub fn canonical(model: &ModelSpec) -> Self {
        let n = model.n();
        if model.is_noisy() {
            Realization { target: (1u64 << model.q()) - 1, signs: vec![-1; n as usize] }
        } else {
            Realization { target: 0, signs: Vec::new() }
        }
    }
}

#[derive(Clone, Debug)]
pub struct DenseHamiltonian {
    pub n: u32,
    pub s: f64,
    pub matrix: SymMatrix,
}

fn sigma_z(x: u64, i: u32) -> f64 {
    if x >> i & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

pub fn full_hamiltonian(model: &ModelSpec, s: f64, realization: Option<&Realization>) -> Result<DenseHamiltonian> {
    model.validate()?;
    let n = model.n();
    if n > MAX_QUBITS {
        return Err(Error::TooManyQubits { n, max: MAX_QUBITS });
    }
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidInput(format!("s = {s} outside [0, 1]")));
    }
    let canonical = Realization::canonical(model);
    let real = realization.unwrap_or(&canonical);
    if real.target >> n != 0 {
        return Err(Error::InvalidInput(format!("target index {} exceeds {n} qubits", real.target)));
    }
    if model.is_noisy() {
        if real.signs.len() != n as usize {
            return Err(Error::DimensionMismatch { expected: n as usize, found: real.signs.len() });
        }
        if real.rotated_target().count_ones() != model.q() {
            return Err(Error::InvalidInput(format!(
                "noise signs rotate the target to weight {}, model has q = {}",
                real.rotated_target().count_ones(),
                model.q()
            )));
        }
    }

    let dim = 1usize << n;
    let mut h = SymMatrix::zeros(dim);
    let add_transverse = |h: &mut SymMatrix, weight: f64| {
        for x in 0..dim {
            for i in 0..n {
                let y = x ^ (1 << i);
                if y > x {
                    h.add(x, y, -weight);
                }
            }
        }
    };
    let add_uniform = |h: &mut SymMatrix, weight: f64| {
        let v = -weight / dim as f64;
        for x in 0..dim {
            for y in 0..=x {
                h.add(x, y, v);
            }
        }
    };
    let add_noise = |h: &mut SymMatrix, eps: f64| {
        for x in 0..dim {
            let field: f64 = (0..n).map(|i| f64::from(real.signs[i as usize]) * sigma_z(x as u64, i)).sum();
            h.add(x, x, s * eps * field);
        }
    };
    let t = real.target as usize;

    match model {
        ModelSpec::GroverPlain { driver, target_scale, .. } => {
            match driver {
                Driver::Grover => add_uniform(&mut h, 1.0 - s),
                Driver::Standard => add_transverse(&mut h, 1.0 - s),
            }
            h.add(t, t, -s * target_scale);
        }
        ModelSpec::GroverNoiseStd { epsilon, target_scale, .. } => {
            add_transverse(&mut h, 1.0 - s);
            add_noise(&mut h, *epsilon);
            h.add(t, t, -s * target_scale);
        }
        ModelSpec::GroverNoiseGrv { epsilon, target_scale, .. } => {
            add_uniform(&mut h, (1.0 - s) * target_scale);
            add_noise(&mut h, *epsilon);
            h.add(t, t, -s * target_scale);
        }
        ModelSpec::Tunneling { barriers, .. } => {
            add_transverse(&mut h, 1.0 - s);
            for x in 0..dim {
                let field: f64 = (0..n).map(|i| sigma_z(x as u64, i)).sum();
                h.add(x, x, -s * field);
            }
            for (alpha, v) in barriers.iter().enumerate() {
                let e = 1usize << alpha;
                h.add(e, e, s * v);
            }
        }
        ModelSpec::MultiSolution { targets, .. } => {
            add_transverse(&mut h, 1.0 - s);
            for target in targets {
                let x = target.index().expect("n <= 10") as usize;
                h.add(x, x, -s);
            }
        }
        ModelSpec::MLevelGrover { energies, degeneracies } => {
            add_uniform(&mut h, 1.0 - s);
            let mut x = 0usize;
            for (e, &d) in energies.iter().zip(degeneracies) {
                for _ in 0..d {
                    h.add(x, x, s * e);
                    x += 1;
                }
            }
        }
    }
    Ok(DenseHamiltonian { n, s, matrix: h })
}

/// All eigenvalues, ascending.
pub fn full_spectrum(h: &DenseHamiltonian) -> Result<Vec<f64>> {
    let dim = h.matrix.dim();
    let m = Mat::<f64>::from_fn(dim, dim, |i, j| h.matrix.get(i, j));
    let mut values = m
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::NoConvergence(format!("dense oracle eigensolve: {e:?}")))?;
    values.sort_by(f64::total_cmp);
    Ok(values)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Comparison {
    /// Largest elementwise deviation of the sorted multisets.
    pub max_deviation: f64,
    /// Deviation of the ground-state gap `E₁ − E₀`.
    pub gap_deviation: f64,
}

/// Compares a reconstruction with a full oracle spectrum (sorted ascending).
pub fn compare_values(reduced: &SpectrumReconstruction, full: &[f64]) -> Result<Comparison> {
    let values = reduced.sorted_values(1 << MAX_QUBITS)?;
    if values.len() != full.len() {
        return Err(Error::StructuralMismatch { reduced: values.len(), full: full.len() });
    }
    let max_deviation = values.iter().zip(full).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let gap_deviation = if full.len() > 1 { ((values[1] - values[0]) - (full[1] - full[0])).abs() } else { 0.0 };
    Ok(Comparison { max_deviation, gap_deviation })
}

pub fn compare_spectra(reduced: &SpectrumReconstruction, full: &DenseHamiltonian) -> Result<Comparison> {
    compare_values(reduced, &full_spectrum(full)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::spectrum_at;

    #[test]
    fn single_qubit_transverse_field() {
        let m = ModelSpec::GroverPlain { driver: Driver::Standard, n: 1, target_scale: 1.0 };
        let h = full_hamiltonian(&m, 0.0, None).unwrap();
        assert_eq!(h.matrix.row(0), &[0.0, -1.0]);
        assert_eq!(h.matrix.row(1), &[-1.0, 0.0]);
        let vals = full_spectrum(&h).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-15 && (vals[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn grover_n2_both_drivers() {
        for driver in [Driver::Grover, Driver::Standard] {
            let m = ModelSpec::GroverPlain { driver, n: 2, target_scale: 1.0 };
            let h = full_hamiltonian(&m, 0.5, None).unwrap();
            assert_eq!(h.matrix.as_slice().len(), 16);
            for i in 0..4 {
                for j in 0..4 {
                    assert_eq!(h.matrix.get(i, j), h.matrix.get(j, i));
                }
            }
            let full = full_spectrum(&h).unwrap();
            if driver == Driver::Grover {
                assert!((full[1] - full[0] - 0.5).abs() < 1e-14);
            }
            let cmp = compare_spectra(&spectrum_at(&m, 0.5).unwrap(), &h).unwrap();
            assert!(cmp.max_deviation < 1e-12, "{driver:?}: {cmp:?}");
        }
    }

    #[test]
    fn refuses_eleven_qubits() {
        let m = ModelSpec::GroverPlain { driver: Driver::Grover, n: 11, target_scale: 1.0 };
        assert!(matches!(full_hamiltonian(&m, 0.5, None), Err(Error::TooManyQubits { n: 11, .. })));
    }

    #[test]
    fn rejects_inconsistent_signs() {
        let m = ModelSpec::GroverNoiseStd { n: 3, epsilon: 1.0, q: 2, target_scale: 3.0 };
        let r = Realization { target: 0, signs: vec![1, -1, -1] };
        assert!(full_hamiltonian(&m, 0.5, Some(&r)).is_err());
        let r = Realization { target: 0b100, signs: vec![1, -1, -1] };
        assert!(full_hamiltonian(&m, 0.5, Some(&r)).is_ok());
    }

    #[test]
    fn size_mismatch_is_structural() {
        let m = ModelSpec::GroverPlain { driver: Driver::Grover, n: 2, target_scale: 1.0 };
        let rec = spectrum_at(&m, 0.3).unwrap();
        assert!(matches!(compare_values(&rec, &[0.0; 3]), Err(Error::StructuralMismatch { reduced: 4, full: 3 })));
    }
}
