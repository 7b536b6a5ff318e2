use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{QChoice, RunConfig};
use super::Command;
use crate::annealing::{
    analytic_scaling, computational_time, fit_exponent, gap_profile, level_gaps, q_epsilon, ScalingFit, Schedule,
    DEFAULT_COARSE_POINTS,
};
use crate::models::{build, Driver, ModelSpec};
use crate::oracle::{verify, ModelKind, VerifyConfig, MAX_QUBITS};
use crate::reduction::assemble_effective;
use crate::{Error, Result};

/// Command output and whether it counts as success.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub body: String,
    pub ok: bool,
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn execute(command: Command, config: &RunConfig, inject: bool) -> Result<Report> {
    let body = match command {
        Command::Gap => gap(config)?,
        Command::Tcomp => tcomp(config)?,
        Command::Scaling => scaling(config)?,
        Command::Spectrum => spectrum(config)?,
        Command::Verify => return run_verify(config, inject),
    };
    Ok(Report { body, ok: true })
}

fn q_values(config: &RunConfig, n: u32, epsilon: f64) -> Vec<u32> {
    if !config.is_noisy() {
        return vec![0];
    }
    let qs: Vec<u32> = match config.q {
        QChoice::Fixed(q) => vec![q],
        QChoice::Scan => (0..=n).collect(),
    };
    if config.feasible_only {
        let qe = q_epsilon(n, epsilon);
        qs.into_iter().filter(|&q| q < qe).collect()
    } else {
        qs
    }
}

fn gap(config: &RunConfig) -> Result<String> {
    let points = config.s_points.unwrap_or(DEFAULT_COARSE_POINTS);
    let mut tasks = Vec::new();
    for n in config.n_values()? {
        for eps in config.epsilon_values() {
            for q in q_values(config, n, eps) {
                tasks.push((n, eps, q));
            }
        }
    }
    let rows = tasks
        .par_iter()
        .map(|&(n, eps, q)| {
            let model = config.model_at(n, eps, q)?;
            let p = gap_profile(&model, points)?;
            if p.degenerate {
                eprintln!("aqo: warning: {model} has a degenerate ground state inside (0, 1)");
            }
            Ok(format!("{},{},{},{},{},{}\n", model.kind(), model.n(), eps, q, num(p.s_star), num(p.g_min)))
        })
        .collect::<Result<Vec<String>>>()?;
    Ok(String::from("model,n,epsilon,q,s_star,g_min\n") + &rows.concat())
}

fn tcomp_points(config: &RunConfig, eps: f64) -> Result<Vec<(ModelSpec, f64, u32)>> {
    let points = config.s_points.unwrap_or(DEFAULT_COARSE_POINTS);
    config
        .n_values()?
        .par_iter()
        .map(|&n| {
            let model = config.model_at(n, eps, 0)?;
            let r = computational_time(&model, config.schedule, config.target_success, points)?;
            Ok((model, r.log2_t_comp, r.q_star))
        })
        .collect()
}

fn tcomp(config: &RunConfig) -> Result<String> {
    let mut out = String::from("model,driver,schedule,n,epsilon,log2_Tcomp,q_star\n");
    for eps in config.epsilon_values() {
        for (model, log2_t, q_star) in tcomp_points(config, eps)? {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                model.kind(),
                model.driver().name(),
                config.schedule,
                model.n(),
                eps,
                num(log2_t),
                q_star
            )
            .unwrap();
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct EpsilonFit {
    epsilon: f64,
    /// Closed-form exponent of the Grover-driver model.
    analytic: f64,
    #[serde(flatten)]
    fit: ScalingFit,
    log2_t_comp: Vec<(u32, f64)>,
}

#[derive(Serialize)]
struct ScalingReport {
    model: String,
    driver: String,
    schedule: Schedule,
    target_success: f64,
    fits: Vec<EpsilonFit>,
}

fn scaling(config: &RunConfig) -> Result<String> {
    let mut fits = Vec::new();
    let mut first: Option<ModelSpec> = None;
    for eps in config.epsilon_values() {
        let pts = tcomp_points(config, eps)?;
        let xy: Vec<(f64, f64)> = pts.iter().map(|(m, t, _)| (f64::from(m.n()), *t)).collect();
        let fit = fit_exponent(&xy).map_err(|e| Error::FitFailure(format!("epsilon = {eps}: {e}")))?;
        first = first.or_else(|| pts.first().map(|p| p.0.clone()));
        fits.push(EpsilonFit {
            epsilon: eps,
            analytic: analytic_scaling(eps),
            fit,
            log2_t_comp: pts.iter().map(|(m, t, _)| (m.n(), *t)).collect(),
        });
    }
    let model = first.ok_or_else(|| Error::FitFailure("empty sweep".into()))?;
    let report = ScalingReport {
        model: model.kind().into(),
        driver: model.driver().name().into(),
        schedule: config.schedule,
        target_success: config.target_success,
        fits,
    };
    Ok(serde_json::to_string_pretty(&report).expect("plain data serializes") + "\n")
}

fn spectrum(config: &RunConfig) -> Result<String> {
    let ns = config.n_values()?;
    let [n] = ns[..] else {
        return Err(Error::Config(format!("spectrum needs a single n, got {} values", ns.len())));
    };
    let eps = match config.epsilon_values()[..] {
        [e] => e,
        _ => return Err(Error::Config("spectrum needs a single epsilon".into())),
    };
    let QChoice::Fixed(q) = config.q else {
        return Err(Error::Config("spectrum needs a fixed q".into()));
    };
    let model = config.model_at(n, eps, q)?;
    let (decomp, weights) = build(&model, 0.5)?;
    let dim = assemble_effective(&decomp, &weights)?.dim();
    let states = 2f64.powi(model.n().min(1000) as i32) - 1.0;
    let limit = (dim as f64).min(states) as usize;
    let mut levels = config.levels.max(1);
    if levels > limit {
        eprintln!("aqo: warning: levels = {levels} exceeds the reduced dimension, clipped to {limit}");
        levels = limit;
    }
    let points = config.s_points.unwrap_or(101).max(2);
    let rows = (0..points)
        .into_par_iter()
        .map(|i| {
            let s = i as f64 / (points - 1) as f64;
            let mut gaps = level_gaps(&model, s, levels)?;
            gaps.resize(levels, f64::NAN);
            let mut row = num(s);
            for g in gaps {
                row.push(',');
                row.push_str(&num(g));
            }
            row.push('\n');
            Ok(row)
        })
        .collect::<Result<Vec<String>>>()?;
    let header: Vec<String> = std::iter::once("s".to_string()).chain((1..=levels).map(|l| format!("gap_{l}"))).collect();
    Ok(header.join(",") + "\n" + &rows.concat())
}

fn verify_kinds(config: &RunConfig) -> Result<Vec<ModelKind>> {
    let Some(model) = config.model.get("model") else {
        return Ok(ModelKind::ALL.to_vec());
    };
    let driver = config.model.get("driver").map(|d| d.parse::<Driver>()).transpose()?;
    let kinds: Vec<ModelKind> = match model.as_str() {
        "grover-plain" => match driver {
            Some(Driver::Grover) => vec![ModelKind::GroverPlainGrover],
            Some(Driver::Standard) => vec![ModelKind::GroverPlainStandard],
            None => vec![ModelKind::GroverPlainGrover, ModelKind::GroverPlainStandard],
        },
        "grover-noise-std" => vec![ModelKind::GroverNoiseStd],
        "grover-noise-grv" => vec![ModelKind::GroverNoiseGrv],
        "tunneling" => vec![ModelKind::Tunneling],
        "multi-solution" => vec![ModelKind::MultiSolution],
        "mlevel-grover" => vec![ModelKind::MLevelGrover],
        other => return Err(Error::Config(format!("unknown model '{other}'"))),
    };
    Ok(kinds)
}

fn run_verify(config: &RunConfig, inject: bool) -> Result<Report> {
    let n_min = config.n_min.unwrap_or(3);
    let n_max = config.n_max.unwrap_or(MAX_QUBITS);
    if n_max > MAX_QUBITS {
        return Err(Error::TooManyQubits { n: n_max, max: MAX_QUBITS });
    }
    if n_min == 0 {
        return Err(Error::Config("verify needs n >= 1".into()));
    }
    let vc = VerifyConfig {
        n_min,
        n_max,
        draws: config.draws,
        s_points: config.s_points.unwrap_or(11),
        seed: config.seed,
        tolerance: config.tolerance,
        kinds: verify_kinds(config)?,
        inject_chi_sign_error: inject,
    };
    let report = verify(&vc)?;
    let mut out = String::from("model,cases,max_deviation\n");
    for (kind, dev, cases) in report.per_kind() {
        writeln!(out, "{},{},{}", kind.name(), cases, num(dev)).unwrap();
    }
    let failures = report.failures();
    for c in failures.iter().take(20) {
        eprintln!(
            "aqo: FAIL {} n={} draw={} s={} deviation={:e} dim={} dim_ok={} [{}]",
            c.kind.name(),
            c.n,
            c.draw,
            c.s,
            c.worst(),
            c.reduced_dim,
            c.dimension_ok,
            c.model
        );
    }
    if failures.len() > 20 {
        eprintln!("aqo: ... {} failing cases in total", failures.len());
    }
    Ok(Report { body: out, ok: failures.is_empty() })
}
