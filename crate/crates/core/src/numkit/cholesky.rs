use super::SymMatrix;
use crate::{Error, Result};

/// Default relative drop tolerance.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Rank-revealing factor `T` with `Tᵀ T ≈ G`.
///
/// `factor` is `rank × k`, row-major, columns in the original order of `G`.
/// Row `μ` is zero in every column pivoted before `μ`.
#[derive(Clone, Debug)]
pub struct CholFactor {
    pub factor: Vec<Vec<f64>>,
    pub rank: usize,
    /// Pivoted columns first, then the dropped ones.
    pub pivots: Vec<usize>,
    pub tolerance: f64,
}

impl CholFactor {
    pub fn cols(&self) -> usize {
        self.pivots.len()
    }

    /// `(Tᵀ T)[i][j]`.
    pub fn reconstruct(&self, i: usize, j: usize) -> f64 {
        self.factor.iter().map(|row| row[i] * row[j]).sum()
    }
}

pub fn pivoted_psd_cholesky(g: &SymMatrix, tol: f64) -> Result<CholFactor> {
    let k = g.dim();
    if !g.is_finite() {
        return Err(Error::InvalidInput("gram matrix has non-finite entries".into()));
    }
    let mut remainder = g.diagonal();
    let max_diag = remainder.iter().fold(0.0f64, |m, &x| m.max(x));
    let threshold = tol * max_diag;
    let mut pivots: Vec<usize> = (0..k).collect();
    let mut factor: Vec<Vec<f64>> = Vec::new();

    for step in 0..k {
        let (best, _) = pivots[step..]
            .iter()
            .enumerate()
            .max_by(|a, b| remainder[*a.1].total_cmp(&remainder[*b.1]))
            .expect("non-empty remainder");
        let p = pivots[step + best];
        if remainder[p] <= threshold || max_diag <= 0.0 {
            break;
        }
        pivots.swap(step, step + best);
        let diag = remainder[p].sqrt();
        let mut row = vec![0.0; k];
        row[p] = diag;
        for &i in &pivots[step + 1..] {
            let dot: f64 = factor.iter().map(|r: &Vec<f64>| r[p] * r[i]).sum();
            row[i] = (g.get(p, i) - dot) / diag;
            remainder[i] -= row[i] * row[i];
        }
        remainder[p] = 0.0;
        factor.push(row);
    }

    let rank = factor.len();
    for &i in &pivots[rank..] {
        if remainder[i] < -10.0 * threshold {
            return Err(Error::NotPositiveSemidefinite { pivot: i, remainder: remainder[i] });
        }
    }
    Ok(CholFactor { factor, rank, pivots, tolerance: tol })
}
