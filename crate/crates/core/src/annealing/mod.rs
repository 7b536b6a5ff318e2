//! Gap profiles, annealing times and computational-time scaling.

mod quadrature;
mod tcomp;

pub use quadrature::{gauss_kronrod, t_ann_optimal, t_ann_optimal_with};
pub use tcomp::{
    analytic_scaling, binary_entropy, computational_time, fit_exponent, log2_t_ann, q_distribution, q_epsilon,
    t_comp, ScalingFit, Schedule, TcompResult,
};

use crate::models::{low_spectrum_at, ModelSpec};
use crate::{Error, Result};

pub const DEFAULT_COARSE_POINTS: usize = 257;
/// Number of coarse local minima that get refined.
const REFINED_MINIMA: usize = 4;
const DEGENERATE_TOL: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq)]
pub struct GapProfile {
    /// Increasing; coarse grid plus refined minima.
    pub s_points: Vec<f64>,
    pub gaps: Vec<f64>,
    pub s_star: f64,
    pub g_min: f64,
    /// An interior point had a numerically degenerate ground state.
    pub degenerate: bool,
    /// Refined local minima `(s, g)`, lowest first.
    pub minima: Vec<(f64, f64)>,
}

impl GapProfile {
    /// Gap at the coarse point nearest `s`.
    fn nearest(&self, s: f64) -> (f64, f64) {
        let i = self.s_points.partition_point(|&x| x < s);
        let cand = [i.saturating_sub(1), i.min(self.s_points.len() - 1)];
        let j = cand
            .into_iter()
            .min_by(|&a, &b| (self.s_points[a] - s).abs().total_cmp(&(self.s_points[b] - s).abs()))
            .unwrap();
        (self.s_points[j], self.gaps[j])
    }
}

/// Coarse grid denser around `s = 1/2`.
pub fn coarse_grid(points: usize) -> Vec<f64> {
    let last = (points - 1) as f64;
    let mut grid: Vec<f64> = (0..points)
        .map(|i| {
            let u = i as f64 / last;
            (u + 0.9 / std::f64::consts::TAU * (std::f64::consts::TAU * u).sin()).clamp(0.0, 1.0)
        })
        .collect();
    grid[0] = 0.0;
    grid[points - 1] = 1.0;
    grid
}

/// `(E_1 − E_0, degenerate)` at `s`.
fn gap_with_flag(model: &ModelSpec, s: f64) -> Result<(f64, bool)> {
    let low = low_spectrum_at(model, s, 2)?;
    let g = low
        .gap(1)
        .ok_or_else(|| Error::InvalidInput(format!("{model} has fewer than two states")))?;
    let scale = low.origin.abs().max(1.0);
    let degenerate = g == 0.0 || (!low.secular && g < DEGENERATE_TOL * scale);
    Ok(if degenerate { (0.0, s < 1.0) } else { (g, false) })
}

/// Ground-state gap `E_1 − E_0` at `s`.
pub fn gap_at(model: &ModelSpec, s: f64) -> Result<f64> {
    gap_with_flag(model, s).map(|(g, _)| g)
}

/// `E_l − E_0` for `l = 1..=levels`; fewer when the spectrum is smaller.
pub fn level_gaps(model: &ModelSpec, s: f64, levels: usize) -> Result<Vec<f64>> {
    let low = low_spectrum_at(model, s, levels + 1)?;
    Ok((1..low.len()).filter_map(|l| low.gap(l)).map(|g| g.max(0.0)).collect())
}

pub fn gap_profile(model: &ModelSpec, coarse_points: usize) -> Result<GapProfile> {
    if coarse_points < 16 {
        return Err(Error::InvalidInput(format!("coarse_points = {coarse_points}, need at least 16")));
    }
    let grid = coarse_grid(coarse_points);
    let mut degenerate = false;
    let mut gaps = Vec::with_capacity(grid.len());
    for &s in &grid {
        let (g, d) = gap_with_flag(model, s)?;
        degenerate |= d;
        gaps.push(g);
    }

    let last = grid.len() - 1;
    let mut local: Vec<usize> = (0..=last)
        .filter(|&i| (i == 0 || gaps[i] <= gaps[i - 1]) && (i == last || gaps[i] <= gaps[i + 1]))
        .collect();
    local.sort_by(|&a, &b| gaps[a].total_cmp(&gaps[b]));
    local.dedup_by(|a, b| a.abs_diff(*b) <= 1);
    local.truncate(REFINED_MINIMA);

    let mut minima = Vec::new();
    for &i in &local {
        let (lo, hi) = (grid[i.saturating_sub(1)], grid[(i + 1).min(last)]);
        let (s, g, d) = refine_minimum(model, lo, hi, (grid[i], gaps[i]))?;
        degenerate |= d;
        minima.push((s, g));
    }
    minima.sort_by(|a, b| a.1.total_cmp(&b.1));

    let mut pairs: Vec<(f64, f64)> = grid.into_iter().zip(gaps).collect();
    for &(s, g) in &minima {
        match pairs.binary_search_by(|p| p.0.total_cmp(&s)) {
            Ok(j) => pairs[j].1 = pairs[j].1.min(g),
            Err(j) => pairs.insert(j, (s, g)),
        }
    }
    let (s_star, g_min) = pairs.iter().copied().min_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
    let (s_points, gaps) = pairs.into_iter().unzip();
    Ok(GapProfile { s_points, gaps, s_star, g_min, degenerate, minima })
}

fn at_resolution(lo: f64, hi: f64) -> bool {
    hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(lo.abs()).max(f64::MIN_POSITIVE)
}

/// Golden-section search on `[lo, hi]`, then a quadratic fit of `g²` once the
/// bracket reaches floating-point resolution.
fn refine_minimum(model: &ModelSpec, mut lo: f64, mut hi: f64, start: (f64, f64)) -> Result<(f64, f64, bool)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut degenerate = false;
    let mut eval = |s: f64| -> Result<f64> {
        let (g, d) = gap_with_flag(model, s)?;
        degenerate |= d;
        Ok(g)
    };
    let mut best = start;
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let (mut gc, mut gd) = (eval(c)?, eval(d)?);
    for _ in 0..300 {
        for (s, g) in [(c, gc), (d, gd)] {
            if g < best.1 {
                best = (s, g);
            }
        }
        if best.1 == 0.0 || at_resolution(lo, hi) {
            break;
        }
        if gc <= gd {
            hi = d;
            d = c;
            gd = gc;
            c = hi - INV_PHI * (hi - lo);
            gc = eval(c)?;
        } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + INV_PHI * (hi - lo);
            gd = eval(d)?;
        }
    }

    if best.1 > 0.0 && at_resolution(lo, hi) {
        let h = (hi - lo).max(4.0 * f64::EPSILON * best.0.abs().max(1e-300));
        let (sl, sr) = ((best.0 - h).max(0.0), (best.0 + h).min(1.0));
        if sl < best.0 && best.0 < sr {
            let (gl, gr) = (eval(sl)?, eval(sr)?);
            if let Some((s0, g0)) = parabola_vertex([(sl, gl * gl), (best.0, best.1 * best.1), (sr, gr * gr)]) {
                if s0 >= sl && s0 <= sr && g0 >= 0.0 && g0.sqrt() < best.1 {
                    best = (s0, g0.sqrt());
                }
            }
            for (s, g) in [(sl, gl), (sr, gr)] {
                if g < best.1 {
                    best = (s, g);
                }
            }
        }
    }
    Ok((best.0, best.1, degenerate))
}

/// Vertex of the parabola through three points, if it opens upward.
fn parabola_vertex(p: [(f64, f64); 3]) -> Option<(f64, f64)> {
    let x0 = p[1].0;
    let (a, b) = (p[0].0 - x0, p[2].0 - x0);
    let (fa, f0, fb) = (p[0].1, p[1].1, p[2].1);
    // f(x0 + t) = f0 + B t + C t²
    let det = a * b * (b - a);
    let c = ((fb - f0) * a - (fa - f0) * b) / det;
    let bb = ((fa - f0) * b * b - (fb - f0) * a * a) / det;
    (c > 0.0 && c.is_finite() && bb.is_finite()).then(|| {
        let t = -bb / (2.0 * c);
        (x0 + t, f0 - bb * bb / (4.0 * c))
    })
}

/// `1/g_min²`; infinite when the gap closes.
pub fn t_ann_linear(profile: &GapProfile) -> f64 {
    if profile.g_min > 0.0 {
        profile.g_min.powi(-2)
    } else {
        f64::INFINITY
    }
}
