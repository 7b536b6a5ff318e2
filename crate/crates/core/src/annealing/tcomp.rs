use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{gap_profile, t_ann_linear, t_ann_optimal_with};
use crate::models::ModelSpec;
use crate::numkit::binomial;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Schedule {
    /// `T = 1/g_min²`
    Linear,
    /// `T = ∫ ds/g²`
    Optimal,
    /// `T = √2ⁿ` for Grover-driver models.
    GroverOverride,
}

impl Schedule {
    pub fn name(self) -> &'static str {
        match self {
            Schedule::Linear => "linear",
            Schedule::Optimal => "optimal",
            Schedule::GroverOverride => "grover-override",
        }
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Schedule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "linear" => Ok(Schedule::Linear),
            "optimal" => Ok(Schedule::Optimal),
            "grover-override" => Ok(Schedule::GroverOverride),
            other => Err(Error::Config(format!("unknown schedule '{other}' (linear|optimal|grover-override)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TcompResult {
    pub n: u32,
    pub epsilon: f64,
    pub schedule: Schedule,
    pub log2_t_comp: f64,
    pub q_star: u32,
    pub q_epsilon: u32,
}

impl TcompResult {
    pub fn t_comp(&self) -> f64 {
        self.log2_t_comp.exp2()
    }
}

/// `p_n(q) = 2⁻ⁿ C(n, q)` for `q = 0..=n`.
pub fn q_distribution(n: u32) -> Vec<f64> {
    let ln2n = f64::from(n) * std::f64::consts::LN_2;
    (0..=u64::from(n))
        .map(|q| (binomial(u64::from(n), q).ln_abs() - ln2n).exp())
        .collect()
}

/// Largest rotated-target weight that is still the ground state at `s = 1`.
pub fn q_epsilon(n: u32, epsilon: f64) -> u32 {
    if epsilon <= 0.0 {
        return n;
    }
    let q = (f64::from(n) / (2.0 * epsilon)).floor();
    q.clamp(0.0, f64::from(n)) as u32
}

/// Minimizes `log2 T_ann(q) + log2 K(q)` over `q ≤ q_ε`, where
/// `K = ln(1 − target) / ln(1 − p_n(q))` is the number of repetitions.
///
/// `log2_t_ann` may return `+∞` for weights that cannot be annealed.
pub fn t_comp<F>(n: u32, epsilon: f64, schedule: Schedule, mut log2_t_ann: F, target_success: f64) -> Result<TcompResult>
where
    F: FnMut(u32) -> Result<f64>,
{
    if !(target_success > 0.0 && target_success < 1.0) {
        return Err(Error::InvalidInput(format!("target success {target_success} outside (0, 1)")));
    }
    let qe = q_epsilon(n, epsilon);
    let p = q_distribution(n);
    let ln_fail = (-target_success).ln_1p();
    let mut best: Option<(f64, u32)> = None;
    for q in 0..=qe {
        let t = log2_t_ann(q)?;
        if t.is_nan() || t == f64::INFINITY {
            continue;
        }
        let k = (ln_fail / (-p[q as usize]).ln_1p()).max(1.0);
        let total = t + k.log2();
        if best.is_none_or(|b| total < b.0) {
            best = Some((total, q));
        }
    }
    let (log2_t_comp, q_star) =
        best.ok_or_else(|| Error::NoConvergence(format!("no annealable weight q <= {qe} at n = {n}")))?;
    Ok(TcompResult { n, epsilon, schedule, log2_t_comp, q_star, q_epsilon: qe })
}

/// `log2 T_ann` of one model instance; gap closures give `+∞`.
pub fn log2_t_ann(model: &ModelSpec, schedule: Schedule, coarse_points: usize) -> Result<f64> {
    if schedule == Schedule::GroverOverride {
        return Ok(0.5 * f64::from(model.n()));
    }
    let profile = gap_profile(model, coarse_points)?;
    let t = match schedule {
        Schedule::Linear => t_ann_linear(&profile),
        _ => match t_ann_optimal_with(model, &profile) {
            Err(Error::Divergence { .. }) => f64::INFINITY,
            other => other?,
        },
    };
    Ok(t.log2())
}

/// `T_comp` of a model family, scanning the rotated-target weight.
pub fn computational_time(
    model: &ModelSpec,
    schedule: Schedule,
    target_success: f64,
    coarse_points: usize,
) -> Result<TcompResult> {
    if schedule == Schedule::GroverOverride && model.driver() != crate::models::Driver::Grover {
        return Err(Error::InvalidInput(format!("grover-override needs a Grover-driver model, got {model}")));
    }
    let mut memo: HashMap<u32, f64> = HashMap::new();
    t_comp(
        model.n(),
        model.epsilon(),
        schedule,
        |q| {
            let m = model.with_q(q).canonical();
            let key = m.q();
            if let Some(&t) = memo.get(&key) {
                return Ok(t);
            }
            let t = log2_t_ann(&m, schedule, coarse_points)?;
            memo.insert(key, t);
            Ok(t)
        },
        target_success,
    )
}

/// Binary Shannon entropy in bits.
pub fn binary_entropy(x: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(x) + term(1.0 - x)
}

/// Asymptotic exponent of `T_comp ~ 2^{s n}` for the Grover driver.
pub fn analytic_scaling(epsilon: f64) -> f64 {
    if epsilon < 1.0 {
        0.5
    } else {
        1.5 - binary_entropy(1.0 / (2.0 * epsilon))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
    pub n_range: (f64, f64),
    pub points: usize,
}

/// Least-squares line through `(n, log2 T)`.
pub fn fit_exponent(points: &[(f64, f64)]) -> Result<ScalingFit> {
    let mut xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    if xs.len() < 5 {
        return Err(Error::FitFailure(format!("need at least 5 distinct n, got {}", xs.len())));
    }
    if points.iter().any(|p| !p.0.is_finite() || !p.1.is_finite()) {
        return Err(Error::FitFailure("non-finite point".into()));
    }
    let m = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    if !slope.is_finite() {
        return Err(Error::FitFailure("degenerate abscissae".into()));
    }
    let max_residual = points.iter().map(|p| (p.1 - slope * p.0 - intercept).abs()).fold(0.0, f64::max);
    Ok(ScalingFit { slope, intercept, max_residual, n_range: (xs[0], xs[xs.len() - 1]), points: points.len() })
}
